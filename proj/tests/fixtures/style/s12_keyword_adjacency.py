comparison = 1if True else 2
value = 1 if True else(2)
spam(ham[1], {eggs: 2})
d['x'] = d ['x'] + 1
t = (1,)
u = (1 ,)
v = len( t )
