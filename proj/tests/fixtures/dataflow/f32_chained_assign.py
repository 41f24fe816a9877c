def load():
    return 7
a = b = load()
print(a)
