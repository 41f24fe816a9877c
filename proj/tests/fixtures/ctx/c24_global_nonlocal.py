counter = 0


def bump():
    global counter
    counter += 1


def make_adder():
    total = 0

    def add(n):
        nonlocal total
        total += n
        return total

    return add


def reset_many():
    global counter, registry
    counter = 0
    registry = {}
