result = compute(1, 2, mode="fast")
print(*args, **kwargs)
value = outer(inner(x), y=g(z), *rest)
chained = obj.method(1).attr.other(n=2)
table.update({"k": 1}, strict=True)
callback(lambda item: item * 2, default=None)
