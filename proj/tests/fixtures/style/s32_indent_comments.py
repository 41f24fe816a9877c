indented = 1
if indented:
      over = 2
if indented:
  under = 3
if indented:
    # comment first
    ok = 4
if indented:
        # over comment
        deep = 5
x = 1
    # dangling comment
y = 2
