"""Exact arithmetic in ``Q`` and in quadratic étale algebras ``Q[w]/(w^2 - c)``."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class QuadElem:
    """``p + q w`` with ``w^2 = c``."""

    c: Fraction
    p: Fraction
    q: Fraction = Fraction(0)

    def _lift(self, other) -> "QuadElem":
        if isinstance(other, QuadElem):
            if other.c != self.c:
                raise ValueError("elements of different quadratic algebras")
            return other
        return QuadElem(self.c, Fraction(other), Fraction(0))

    def __add__(self, other) -> "QuadElem":
        o = self._lift(other)
        return QuadElem(self.c, self.p + o.p, self.q + o.q)

    __radd__ = __add__

    def __neg__(self) -> "QuadElem":
        return QuadElem(self.c, -self.p, -self.q)

    def __sub__(self, other) -> "QuadElem":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "QuadElem":
        return self._lift(other) - self

    def __mul__(self, other) -> "QuadElem":
        if not isinstance(other, QuadElem):
            s = Fraction(other)
            return QuadElem(self.c, self.p * s, self.q * s)
        o = self._lift(other)
        return QuadElem(self.c, self.p * o.p + self.c * self.q * o.q, self.p * o.q + self.q * o.p)

    __rmul__ = __mul__

    @property
    def norm(self) -> Fraction:
        return self.p * self.p - self.c * self.q * self.q

    def conj(self) -> "QuadElem":
        return QuadElem(self.c, self.p, -self.q)

    def inverse(self) -> "QuadElem":
        n = self.norm
        if n == 0:
            raise ZeroDivisionError(f"{self} is not invertible")
        return self.conj() * (1 / n)

    def __truediv__(self, other) -> "QuadElem":
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other) -> "QuadElem":
        return self._lift(other) * self.inverse()

    def __eq__(self, other) -> bool:
        if isinstance(other, QuadElem):
            return (self.c, self.p, self.q) == (other.c, other.p, other.q)
        try:
            return self.q == 0 and self.p == Fraction(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self) -> int:
        return hash((self.c, self.p, self.q))

    def __bool__(self) -> bool:
        return bool(self.p) or bool(self.q)

    def __repr__(self) -> str:
        return f"({self.p} + {self.q}w)"


@dataclass(frozen=True)
class RationalField:
    def coerce(self, x) -> Fraction:
        return Fraction(x)

    def is_unit(self, x) -> bool:
        return x != 0


@dataclass(frozen=True)
class QuadField:
    """``Q[w]/(w^2 - c)``; a field when ``c`` is not a square."""

    c: Fraction

    def __post_init__(self):
        object.__setattr__(self, "c", Fraction(self.c))
        if self.c == 0:
            raise ValueError("c must be nonzero")

    def coerce(self, x) -> QuadElem:
        if isinstance(x, QuadElem):
            if x.c != self.c:
                raise ValueError("element of a different quadratic algebra")
            return x
        return QuadElem(self.c, Fraction(x), Fraction(0))

    def elem(self, p, q=0) -> QuadElem:
        return QuadElem(self.c, Fraction(p), Fraction(q))

    @property
    def w(self) -> QuadElem:
        return self.elem(0, 1)

    def is_unit(self, x) -> bool:
        return self.coerce(x).norm != 0


QQ = RationalField()
