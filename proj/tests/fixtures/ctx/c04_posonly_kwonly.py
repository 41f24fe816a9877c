def clamp(value, /, low, high, *, strict=False):
    if strict and low > high:
        raise ValueError("bad range")
    return min(max(value, low), high)


def collect(*items, sep=", ", end="\n"):
    return sep.join(items) + end


def merge(a, b, /):
    return a + b


def only_kw(*, flag):
    return flag
