name = "world"
width = 8
print(f"hello {name:>{width}}")
