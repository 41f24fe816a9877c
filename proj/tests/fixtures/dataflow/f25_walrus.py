data = [1, 2, 3, 4, 5]
if (n := len(data)) > 3:
    print(n)
