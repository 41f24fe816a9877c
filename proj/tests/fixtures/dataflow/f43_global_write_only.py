total = 0
def reset():
    global total
    total = 0
reset()
