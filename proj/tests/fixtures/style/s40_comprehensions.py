squares = [x**2 for x in range(10)]
evens = [x for x in range(10) if x%2 == 0]
mapping = {k: v for k, v in pairs}
gen = (x*2
       for x in data
       if x)
nested = [[y for y in row]
          for row in grid]
