"""Compensated running sums."""

from __future__ import annotations

from collections.abc import Iterable


class CompensatedSum:
    """Like math.fsum, but allows a running sum (Kahan-Babuska/Neumaier).

    The running total is `_s + _c`; `_c` collects the low-order bits lost when
    adding terms of very different magnitude.
    """

    __slots__ = ("_s", "_c")

    def __init__(self, start: float = 0.0) -> None:
        self._s = float(start)
        self._c = 0.0

    def add(self, term: float) -> None:
        s = self._s + term
        if abs(self._s) >= abs(term):
            self._c += (self._s - s) + term
        else:
            self._c += (term - s) + self._s
        self._s = s

    def extend(self, terms: Iterable[float]) -> None:
        for term in terms:
            self.add(term)

    @property
    def value(self) -> float:
        return self._s + self._c

    def __float__(self) -> float:
        return self.value

    def __repr__(self) -> str:
        return f"CompensatedSum({self.value!r})"
