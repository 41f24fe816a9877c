size = 10
def make(n=size):
    return n
print(make())
