def add(x, y=1):
    return x + y


def scale(values, factor=2, *extra, **options):
    result = [v * factor for v in values]
    result.extend(extra)
    return result


def annotated(x: int, y: float = 0.0) -> float:
    return x + y


def empty():
    pass
