name = 'world'
greeting = f"hello {name}"
old = "value: %s" % name
padded = "{:>10}".format(name)
joined = ','.join([ 'a', 'b' ])
multi = ("first part "
         "second part "
            "third part")
path = r"C:\data\files"
