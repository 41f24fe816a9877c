path = "data.txt"
with open(path) as fh:
    data = fh.read()
print(data)
#%%
with open(path) as unused_handle:
    pass
