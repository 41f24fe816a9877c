item = data[1 :]
item2 = data[1 : 2]
item3 = data[x +1]
print(a , b)
print(a ,b)
foo(' ', eggs)
bar("  ",  ham)
if x == 4 :
    pass
