def f():
    # just a comment then code
    return 1
def g():
    pass
    # trailing comment in block
x = 1
