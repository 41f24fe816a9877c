pair = (1, 2)
#%%
tmp, val = pair
print(val)
