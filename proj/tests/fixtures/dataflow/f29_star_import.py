from os.path import *
print(join("a", "b"))
q = 1
