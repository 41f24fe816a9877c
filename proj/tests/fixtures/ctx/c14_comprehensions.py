squares = [x * x for x in range(10)]
evens = [x for x in numbers if x % 2 == 0 if x > 2]
pairs = [(i, j) for i in rows for j in cols]
names = {p.name for p in people}
index = {name: pos for pos, name in enumerate(names)}
flat = [item for sublist in nested for item in sublist]
gen = (line.strip() for line in handle)
total = sum(v * w for v, w in zip(values, weights))
matrix = [[row[i] for row in data] for i in range(3)]
