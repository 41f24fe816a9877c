money = 5
cost = money ? 3
