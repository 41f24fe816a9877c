first, *rest = [1, 2, 3, 4]
a, b = b, a
x, y = (p
        for p in pairs)
head, (left ,right) = tree
def call(*args,**kwargs):
    return target(*args, **kwargs)
merged = {**defaults, **overrides , 'live': True}
