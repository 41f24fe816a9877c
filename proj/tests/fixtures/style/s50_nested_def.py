def outer():
    def inner():
        pass
    x = inner()
    def after_code():
        pass
    return after_code


def sibling():
    pass
