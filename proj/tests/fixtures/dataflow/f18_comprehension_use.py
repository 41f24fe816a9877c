values = [1, 2, 3]
squares = [i * i for i in values]
print(squares)
