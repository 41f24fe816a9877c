s = 'abc\
def\
ghi'
x = 1
