def scale(values, factor):
    return [v * factor for v in values]
print(scale([1, 2], 2))
#%%
def g(unused_param):
    return 1
g(0)
