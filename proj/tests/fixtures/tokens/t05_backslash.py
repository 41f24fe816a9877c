total = 1 + \
    2
s = 'ab\
cd'
