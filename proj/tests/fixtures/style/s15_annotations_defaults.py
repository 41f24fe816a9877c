x: int = 1
y:int = 2
z : int = 3
def f(a: int=1, b: str = "x", c:int = 3):
    return a


def g(a=1, b =2, c= 3, d = 4):
    return a


foo(bar=1, baz = 2)
foo(bar=-1)
foo(bar*2, baz=-1)
result = f(a=4, b='x') != g(a=4, b='x')
