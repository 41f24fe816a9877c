x = """
multi
line
"""
y = ("implicit"
     "concat")
z = ("implicit"
         "over")
w = ("implicit"
  "under")
