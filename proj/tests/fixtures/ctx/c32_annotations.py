count: int = 0
names: list = []
threshold: float
obj.field: str = "x"
table["k"]: int = 1
(bracketed): bool = True
