if cond:
    value = computation(arg,
                        kw=1)
    other = [
        1,
    ]
    final = {
        'k': [
            (a, b)
            for a, b in pairs
        ],
    }
