a = 1
#%%
def broken(:
#%%
print(a)
