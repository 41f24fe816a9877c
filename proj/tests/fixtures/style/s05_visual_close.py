print("E124", (
"visual",
   "indent_two"
))
print("E124", ("visual",
               "indent_five"
))
print("good", (
    "hanging",
    "indent"
))
