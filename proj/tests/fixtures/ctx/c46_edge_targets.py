(x) = 1
del (a)
(y), = rows
[p], q = pairs
x = (held := 5)
a = b = c = fresh()
