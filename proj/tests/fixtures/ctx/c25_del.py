del simple_name
del table["key"]
del obj.attr
del first, second
del (paired, together)
del items[2:5]
del [listed, targets]
