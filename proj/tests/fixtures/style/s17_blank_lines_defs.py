import os
import sys
def f():
    pass
def g():
    x = 1

    def nested():
        return x
    return nested


class A:
    def m1(self):
        pass
    def m2(self):
        pass



    def m3(self):
        pass


a = A()
