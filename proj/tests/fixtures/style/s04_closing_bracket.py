my_list = [
    1, 2, 3,
    4, 5, 6,
    ]
my_list = [
    1, 2, 3,
    4, 5, 6,
]
result = some_function(arg_one,
                       arg_two,
                       )
result = some_function(arg_one,
                       arg_two,
)
