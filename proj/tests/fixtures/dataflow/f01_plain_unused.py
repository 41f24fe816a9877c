y = 2
