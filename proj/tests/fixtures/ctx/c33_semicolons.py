a = 1; b = 2; c = a + b
if c > 2: d = c; e = d * 2
while False: break
for i in range(3): print(i); continue
def quick(): return 99
class Tiny: pass
