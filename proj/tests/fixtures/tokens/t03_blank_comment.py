# leading comment
x = 1

# block comment
  # indented comment inside nothing

def g():
    # inside function

    return 1
