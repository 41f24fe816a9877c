if (a or
    b):
    pass
if (a or
        b):
    pass
x = (1 +
     2 +
     3)
while (x and
       y):
    break
