class Model:
    def fit(self):
        return 1
m = Model()
m.fit()
