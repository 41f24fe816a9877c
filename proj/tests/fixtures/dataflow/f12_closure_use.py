a = 1
#%%
def g():
    return a
#%%
g()
