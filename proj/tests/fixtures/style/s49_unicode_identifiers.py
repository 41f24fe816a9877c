very_long_call_chain = obj.method_one().method_two().method_three(argument_one, 2)
s = "unicode: héllo wörld ünïcödé"
路径 = "chinese identifier"
δ = 0.01
