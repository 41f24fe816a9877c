if a:
    if b:
        x = 1
    y = 2
z = 3
while q:
        deep = 1
done = 2
