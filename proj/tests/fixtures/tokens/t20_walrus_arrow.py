if (n := len(data)) > 10:
    print(n)
def f() -> 'str':
    return ''
g = lambda: (yield)
