pair = (1, 2)
a, b = pair
a, b = b, a
(x, y), z = pair, 3
[m, n] = [4, 5]
*head, tail = [1, 2, 3, 4]
first, *rest = "abcdef"
p, (q, *r) = 1, (2, 3, 4)
