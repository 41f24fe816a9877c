count = 0
total = count + 1
name = "sensor"
count += 2
total *= count
rate: float = 0.5
limit: int
a = b = c = 9
