cache = {"k": 1}
key = "k"
del cache[key]
print(cache)
