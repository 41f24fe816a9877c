def f():
    return 3
#%%
x = f(); x
