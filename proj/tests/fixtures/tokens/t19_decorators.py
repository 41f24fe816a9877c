@app.route('/x')
@cached
def handler(req):
    return req


@prop.setter
def value(self, v):
    self._v = v
