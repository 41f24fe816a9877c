matrix = [
    [1, 2],
    [3, 4],
]
call(arg1,
     kwarg=value,
     *args,
     **kwargs)
chained = (obj
           .method()
           .другой())
