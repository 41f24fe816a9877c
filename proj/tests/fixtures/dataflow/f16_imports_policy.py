import numpy as np
import json
#%%
values = np.arange(10)
print(values.sum())
