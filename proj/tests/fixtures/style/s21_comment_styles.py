# block comment
#bad block
## double
#!shebang-not-first
#: special
x = 1  # good inline
y = 2 # close inline
z = 3  #bad inline
w = 4  ## bad double inline
v = 5  #!bang inline
#
u = 6
