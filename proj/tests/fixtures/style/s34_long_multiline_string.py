s = """
a very long line inside a multiline string that should still be checked for length x
short
"""
t = '''another
   string with trailing spaces inside   
'''
