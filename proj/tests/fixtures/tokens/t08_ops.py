a = b ** c // d % e
a **= 2
a //= 3
x = a << 2 >> 1
y = a | b & c ^ ~d
z = a < b <= c != d >= e > f == g
p = a @ b
p @= m
w := 5
h = lambda q: -q
def fn(x, *args, **kw) -> int: ...
t[1:2:3, ..., None]
