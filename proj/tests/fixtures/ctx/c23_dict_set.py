empty_d = {}
simple = {"a": 1, "b": 2}
merged = {**simple, "c": 3, **extra}
nested_d = {"outer": {"inner": [1, 2]}}
points = {(0, 0), (1, 1)}
single_set = {element}
keyed = {compute(k): v for k, v in source.items()}
