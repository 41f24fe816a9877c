small = 7
big = 1_000_000
fractional = 3.14
sci = 6.02e23
tiny = 1e-9
imag = 2j
both = 1.5J
hex_val = 0xDEADBEEF
oct_val = 0o755
bin_val = 0b1010_1010
trailing = 10.
leading = .5
