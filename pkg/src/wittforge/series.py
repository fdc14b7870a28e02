"""Truncated power series and Greek letters.

A :class:`Series` stores the coefficients ``c_0 .. c_T`` of a power series
truncated at order ``T``.  Coefficients may be any exact commutative ring
elements supporting ``+``, ``-`` and ``*`` (ints and ``Fraction`` in practice).

Greek letters are series of the form ``t + t^2 * (...)`` over the integers.
They form a group under composition, and they reparametrize families of
lambda-operations (see :mod:`wittforge.greek`).
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Sequence

DEFAULT_ORDER = 32


def default_order() -> int:
    """Truncation order, overridable with the ``WITTFORGE_ORDER`` variable."""
    raw = os.environ.get("WITTFORGE_ORDER")
    if raw is None or raw == "":
        return DEFAULT_ORDER
    value = int(raw)
    if value < 0:
        raise ValueError("WITTFORGE_ORDER must be non-negative")
    return value


@dataclass(frozen=True)
class Series:
    coeffs: tuple
    order: int

    def __post_init__(self):
        if len(self.coeffs) != self.order + 1:
            raise ValueError(
                f"series of order {self.order} needs {self.order + 1} coefficients, got {len(self.coeffs)}"
            )

    @classmethod
    def from_list(cls, coeffs: Sequence, order: int) -> "Series":
        """Pad with zeros or truncate so that exactly ``order + 1`` coefficients remain."""
        cs = list(coeffs[: order + 1])
        cs.extend([0] * (order + 1 - len(cs)))
        return cls(tuple(cs), order)

    @classmethod
    def monomial(cls, degree: int, order: int, coeff=1) -> "Series":
        cs = [0] * (order + 1)
        if degree <= order:
            cs[degree] = coeff
        return cls(tuple(cs), order)

    @classmethod
    def one(cls, order: int) -> "Series":
        return cls.monomial(0, order)

    @classmethod
    def t(cls, order: int) -> "Series":
        return cls.monomial(1, order)

    def __getitem__(self, k: int):
        return self.coeffs[k] if 0 <= k <= self.order else 0

    def _check(self, other: "Series"):
        if not isinstance(other, Series):
            raise TypeError("expected a Series")
        if other.order != self.order:
            raise ValueError(f"truncation orders differ: {self.order} vs {other.order}")

    def __add__(self, other: "Series") -> "Series":
        self._check(other)
        return Series(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), self.order)

    def __sub__(self, other: "Series") -> "Series":
        self._check(other)
        return Series(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)), self.order)

    def __neg__(self) -> "Series":
        return Series(tuple(-a for a in self.coeffs), self.order)

    def __mul__(self, other) -> "Series":
        if isinstance(other, Series):
            return series_mul(self, other)
        return Series(tuple(a * other for a in self.coeffs), self.order)

    __rmul__ = __mul__

    def valuation(self) -> int | None:
        for k, c in enumerate(self.coeffs):
            if c != 0:
                return k
        return None

    def derivative(self) -> "Series":
        cs = [k * self.coeffs[k] for k in range(1, self.order + 1)] + [0]
        return Series(tuple(cs), self.order)

    def truncate(self, order: int) -> "Series":
        return Series.from_list(list(self.coeffs), order)

    def to_json(self) -> dict:
        return {"order": self.order, "coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "Series":
        from fractions import Fraction

        def parse(s):
            v = Fraction(s)
            return v.numerator if v.denominator == 1 else v

        return cls.from_list([parse(s) for s in data["coeffs"]], int(data["order"]))


def series_mul(f: Series, g: Series) -> Series:
    """Cauchy product truncated at the common order."""
    f._check(g)
    order = f.order
    out = [0] * (order + 1)
    gc = g.coeffs
    for i, a in enumerate(f.coeffs):
        if a == 0:
            continue
        for j in range(order - i + 1):
            b = gc[j]
            if b != 0:
                out[i + j] += a * b
    return Series(tuple(out), order)


def inverse(f: Series) -> Series:
    """Multiplicative inverse of a series whose constant term is 1 or -1."""
    c0 = f[0]
    if c0 not in (1, -1):
        raise ValueError("series inverse needs a unit constant term (+1 or -1)")
    order = f.order
    out = [0] * (order + 1)
    out[0] = c0
    for n in range(1, order + 1):
        acc = 0
        for k in range(1, n + 1):
            if f.coeffs[k]:
                acc += f.coeffs[k] * out[n - k]
        out[n] = -acc * c0
    return Series(tuple(out), order)


def compose(f: Series, g: Series) -> Series:
    """``f(g(t))`` truncated; requires ``g(0) == 0``."""
    f._check(g)
    if g[0] != 0:
        raise ValueError("composition needs an inner series with zero constant term")
    order = f.order
    # Horner from the top coefficient down
    acc = Series.monomial(0, order, f[order])
    for k in range(order - 1, -1, -1):
        acc = series_mul(acc, g)
        acc = Series((acc.coeffs[0] + f[k],) + acc.coeffs[1:], order)
    return acc


def power(f: Series, k: int) -> Series:
    out = Series.one(f.order)
    for _ in range(k):
        out = series_mul(out, f)
    return out


@dataclass(frozen=True)
class GreekLetter:
    """An element ``t + t^2 R[[t]]`` of the composition group of letters."""

    series: Series

    def __post_init__(self):
        s = self.series
        if s.order < 1 or s[0] != 0 or s[1] != 1:
            raise ValueError("a Greek letter must start t + O(t^2)")

    @property
    def order(self) -> int:
        return self.series.order

    def __getitem__(self, k):
        return self.series[k]

    def __matmul__(self, other: "GreekLetter") -> "GreekLetter":
        """Composition ``self ∘ other``."""
        return GreekLetter(compose(self.series, other.series))

    @classmethod
    def identity(cls, order: int) -> "GreekLetter":
        return cls(Series.t(order))

    @classmethod
    def from_coeffs(cls, coeffs: Sequence, order: int) -> "GreekLetter":
        return cls(Series.from_list(coeffs, order))


def reversion(f: GreekLetter) -> GreekLetter:
    """Compositional inverse of a letter.

    Uses the Newton form of the fixed-point map ``g <- g - (f∘g - t)/f'(g)``,
    doubling the number of correct coefficients at each pass.  Since
    ``f'(g)`` has constant term 1 no division by a non-unit ever occurs.
    """
    order = f.order
    target = Series.t(order)
    fprime = f.series.derivative()
    g = Series.t(order)
    precision = 2
    while True:
        precision = min(2 * precision, order + 1)
        residual = compose(f.series, g) - target
        correction = series_mul(residual, inverse(compose(fprime, g)))
        g = g - correction
        if precision > order:
            break
    # one more pass certifies the fixed point exactly
    if compose(f.series, g) != target:
        raise ArithmeticError("reversion failed to converge")
    return GreekLetter(g)


@lru_cache(maxsize=None)
def _catalan_numbers(order: int) -> tuple:
    c = [1]
    for k in range(order):
        c.append(sum(c[i] * c[k - i] for i in range(k + 1)))
    return tuple(c)


def catalan(order: int) -> Series:
    """The series ``C`` with ``C = 1 + t C^2``."""
    if order < 0:
        raise ValueError("order must be non-negative")
    return Series(_catalan_numbers(order), order)


def catalan_step(n: int, order: int) -> GreekLetter:
    """The letter ``t C(-2^(n-1) t)`` carrying one pi letter to the next."""
    c = _catalan_numbers(order)
    scale = -(2 ** (n - 1))
    cs = [0] + [c[k] * scale**k for k in range(order)]
    return GreekLetter(Series(tuple(cs), order))


def quadratic_step(n: int, order: int) -> GreekLetter:
    """The letter ``t + 2^(n-1) t^2``, inverse of :func:`catalan_step`."""
    return GreekLetter.from_coeffs([0, 1, 2 ** (n - 1)], order)


@lru_cache(maxsize=None)
def pi_letter(n: int, order: int | None = None) -> GreekLetter:
    """The letter making every n-fold Pfister element one-dimensional."""
    if order is None:
        order = default_order()
    if n < 1:
        raise ValueError("pi letters are indexed from 1")
    if n == 1:
        cs = [0] + [(-1) ** (d + 1) for d in range(1, order + 1)]
        return GreekLetter(Series(tuple(cs), order))
    return pi_letter(n - 1, order) @ catalan_step(n - 1, order)


def lambda_letter(order: int | None = None) -> GreekLetter:
    return GreekLetter.identity(default_order() if order is None else order)


def gamma_letter(order: int | None = None) -> GreekLetter:
    """``t/(1-t)``, the letter of the gamma operations."""
    order = default_order() if order is None else order
    return GreekLetter(Series(tuple([0] + [1] * order), order))


@lru_cache(maxsize=256)
def letter_matrix(letter: GreekLetter, max_degree: int) -> tuple:
    """``a[k][d]`` = coefficient of ``t^d`` in ``letter^k`` for ``0 <= k, d <= max_degree``.

    The entries vanish for ``k > d`` and ``a[d][d] = 1``.
    """
    if max_degree > letter.order:
        raise ValueError(f"degree {max_degree} exceeds the truncation order {letter.order}")
    s = letter.series.truncate(max_degree)
    rows = []
    p = Series.one(max_degree)
    for _ in range(max_degree + 1):
        rows.append(p.coeffs)
        p = series_mul(p, s)
    return tuple(rows)


def pi1_matrix_entry(k: int, d: int) -> int:
    if k == 0:
        return int(d == 0)
    return (-1) ** (d - k) * comb(d - 1, k - 1)


def catalan_step_matrix_entry(n: int, k: int, d: int) -> int:
    """Closed form for the powers of ``t C(-2^(n-1) t)``; the division is exact."""
    if k == 0:
        return int(d == 0)
    if d < k:
        return 0
    num = (-1) ** (d - k) * 2 ** ((d - k) * (n - 1)) * k * comb(2 * d - k - 1, d - 1)
    q, r = divmod(num, d)
    if r:
        raise ArithmeticError("non-integral Catalan power coefficient")
    return q


def quadratic_step_matrix_entry(n: int, k: int, d: int) -> int:
    if d < k or d > 2 * k:
        return 0
    return comb(k, d - k) * 2 ** ((d - k) * (n - 1))
