def a():
    x = 1

def b():
    y = 2
