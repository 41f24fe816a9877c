flag = True
if flag:
    result = 1
else:
    result = 2
print(result)
