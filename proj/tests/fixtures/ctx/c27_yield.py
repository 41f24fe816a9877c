def counter(limit):
    n = 0
    while n < limit:
        yield n
        n += 1


def echo():
    while True:
        received = yield
        print(received)


def delegate(inner):
    result = yield from inner
    return result


def pairs(xs):
    for x in xs:
        yield x, x * 2
