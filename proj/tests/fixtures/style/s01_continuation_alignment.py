result = some_function(arg_one,
                       arg_two,
    arg_three,
                           arg_four)
value = [1, 2, 3,
         4, 5, 6,
          7]
data = {
    'a': 1,
        'b': 2,
  'c': 3,
}
