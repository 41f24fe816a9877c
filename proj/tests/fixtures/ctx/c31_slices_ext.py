window = arr[i - 1:i + 2]
block = tensor[0, :, 1:3]
plane = tensor[..., -1]
expanded = arr[:, None]
strided = arr[::2, 1::2]
arr[mask] = 0
arr[arr > limit] = limit
picked = arr[[0, 2, 4]]
