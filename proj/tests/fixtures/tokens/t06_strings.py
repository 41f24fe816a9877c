a = 'single'
b = "double"
c = '''triple
spans
lines'''
d = """doc"""
e = 'esc\'aped'
f = "tab\there"
g = r'raw\n'
h = rb'bytes'
i = B"caps"
j = f'{name}!'
k = Rf"mix"
m = 'adj' 'acent'
n = ''
o = """quote "inside" body"""
p = '''quad ''' + 'tail'
