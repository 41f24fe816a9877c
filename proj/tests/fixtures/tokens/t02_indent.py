def f(a):
    if a > 0:
        return a
    return -a


class C:
    def m(self):
        pass
