status = "ok" if code == 0 else "bad"
level = "high" if x > 9 else "mid" if x > 4 else "low"
result = (a if a else b) if cond else (c if c else d)
weight = base * (2 if heavy else 1)
