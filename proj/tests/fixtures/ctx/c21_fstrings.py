name = "world"
plain = f"hello {name}"
displayed = f"{name!r} and {name!s}"
padded = f"{value:>10}"
dynamic = f"{value:{width}.{precision}f}"
mixed = "prefix " f"{a + b} middle" " suffix"
nested_attr = f"result={obj.attr[0]}"
call_inside = f"{func(x, y=2)}"
quoted = f"{table['key']}"
multi = f"""first {alpha}
second {beta + 1} end"""
empty_spec = f"{num:}"
just_text = f"no fields"
