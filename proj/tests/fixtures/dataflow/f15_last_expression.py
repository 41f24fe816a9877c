import math
result = math.sqrt(2)
#%%
result
