# comment before
x = 1

# comment between


def f():
    pass
# trailing comment right after


y = 2



# deep blank comment
z = 3
