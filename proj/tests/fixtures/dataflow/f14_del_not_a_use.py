cache = {"k": 1}
del cache
