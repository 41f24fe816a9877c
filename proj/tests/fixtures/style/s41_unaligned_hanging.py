result = frobnicate(a,
                    b,
                    c)
result = frobnicate(
    a,
      b,
    c)
result = frobnicate(
    a,
  b,
    c)
items = [first,
         second,
    third,
         fourth]
