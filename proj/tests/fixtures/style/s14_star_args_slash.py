print(*args)
print(**kwargs)
def g(*args, **kwargs):
    pass


def h(a, *, b):
    pass


def k(a, /, b):
    pass


def m(a, b, /):
    pass


lam = lambda a, /: a
x = a if a else-1
y = a if a else -1
norm = -1 if x else+1
