class Shape:
    def __init__(self, name):
        self.name = name

    def area(self):
        raise NotImplementedError


class Circle(Shape):
    def __init__(self, radius):
        super().__init__("circle")
        self.radius = radius

    def area(self):
        return 3.14159 * self.radius ** 2

    @classmethod
    def unit(cls):
        return cls(1.0)

    @property
    def diameter(self):
        return self.radius * 2
