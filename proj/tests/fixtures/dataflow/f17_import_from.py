from collections import Counter, OrderedDict
counts = Counter("abracadabra")
print(counts)
