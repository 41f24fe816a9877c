assert some_type_of_boolean_expression, \
    'Followed by a really really long error message'
assert some_type_of_boolean_expression, \
       'Followed by a really really long error message'
assert some_type_of_boolean_expression, \
          'Followed by a really long error message'
with open('a') as fa, \
     open('b') as fb:
    pass
raise SomeError("the message "
                "continues")
