from typing import List
items: List = []
print(items)
