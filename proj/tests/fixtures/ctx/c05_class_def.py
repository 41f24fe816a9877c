class Base:
    kind = "base"


class Registry(dict):
    def register(self, key, value):
        self[key] = value


class Meta(Base, metaclass=type):
    counter = 0

    def __init__(self, name):
        self.name = name
        Meta.counter += 1

    @property
    def label(self):
        return self.name.title()
