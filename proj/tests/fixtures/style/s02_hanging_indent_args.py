def long_function_name(
        var_one, var_two, var_three,
        var_four):
    print(var_one)


foo = long_function_name(var_one,
                         var_two)
foo = long_function_name(
    var_one,
    var_two)
foo = long_function_name(var_one,
    var_two)
