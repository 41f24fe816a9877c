def chunks(seq, size):
    for i in range(0, len(seq), size):
        yield seq[i:i + size]


def flatten(nested):
    return [x
        for row in nested
            for x in row]
totals = sum(x*x for x in range(100) if x%3)
