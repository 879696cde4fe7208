class CompensatedSum:
    """Running sum with Kahan-Babuska (Neumaier) compensation."""

    __slots__ = ("_s", "_c")

    def __init__(self, start=0.0):
        self._s = float(start)
        self._c = 0.0

    def add(self, v):
        v = float(v)
        t = self._s + v
        if abs(self._s) >= abs(v):
            self._c += (self._s - t) + v
        else:
            self._c += (v - t) + self._s
        self._s = t
        return self

    @property
    def value(self):
        return self._s + self._c
