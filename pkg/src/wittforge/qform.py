"""Quadratic forms over the rationals.

Everything here is exact.  A :class:`GWElem` is stored as an integer
combination of one-dimensional forms, i.e. an element of the group ring
``Z[Q*/Q*^2]``.  That ring maps onto ``GW(Q)`` and the lambda-operations are
compatible with the map, so all computations happen upstairs and equality is
decided downstairs with complete local invariants (Hasse-Minkowski).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Mapping

from sympy import factorint

INF = "inf"


class UnsupportedError(ValueError):
    """Raised for inputs outside the supported range of an operation."""


def place_key(p) -> tuple:
    return (1, 0) if p == INF else (0, p)


@lru_cache(maxsize=65536)
def _squarefree_primes(n: int) -> tuple:
    return tuple(sorted(p for p, e in factorint(n).items() if e % 2))


@dataclass(frozen=True, order=False)
class SquareClass:
    """A class in ``Q*/Q*^2``: a sign and a squarefree positive part."""

    sign: int
    primes: tuple = ()
    _value: int = field(init=False, repr=False, compare=False, default=0)

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if list(self.primes) != sorted(set(self.primes)):
            raise ValueError("primes must be strictly increasing")
        v = self.sign
        for p in self.primes:
            v *= p
        object.__setattr__(self, "_value", v)

    def __eq__(self, other) -> bool:
        return isinstance(other, SquareClass) and self._value == other._value

    def __hash__(self) -> int:
        return hash(self._value)

    @classmethod
    def of(cls, x) -> "SquareClass":
        """Square class of a nonzero int, Fraction or SquareClass."""
        if isinstance(x, SquareClass):
            return x
        x = Fraction(x)
        if x == 0:
            raise ValueError("zero has no square class")
        sign = 1 if x > 0 else -1
        primes = set(_squarefree_primes(abs(x.numerator))) ^ set(_squarefree_primes(x.denominator))
        return cls(sign, tuple(sorted(primes)))

    @property
    def value(self) -> int:
        return self._value

    def __mul__(self, other: "SquareClass") -> "SquareClass":
        if not isinstance(other, SquareClass):
            other = SquareClass.of(other)
        return _class_product(self, other)

    __rmul__ = __mul__

    def inverse(self) -> "SquareClass":
        return self

    def is_one(self) -> bool:
        return self.sign == 1 and not self.primes

    def valuation(self, p: int) -> int:
        return 1 if p in self.primes else 0

    def unit_part(self, p: int) -> int:
        """The class divided by ``p`` if ``p`` divides it, as a signed squarefree integer."""
        v = self.value
        return v // p if p in self.primes else v

    def __lt__(self, other: "SquareClass") -> bool:
        return self._value < other._value

    def __repr__(self) -> str:
        return f"<{self.value}>"


@lru_cache(maxsize=1 << 16)
def _class_product(a: SquareClass, b: SquareClass) -> SquareClass:
    return SquareClass(a.sign * b.sign, tuple(sorted(set(a.primes) ^ set(b.primes))))


ONE = SquareClass(1)
MINUS_ONE = SquareClass(-1)


def sq(x) -> SquareClass:
    return x if isinstance(x, SquareClass) else SquareClass.of(x)


# ---------------------------------------------------------------- Hilbert symbols


def _legendre(a: int, p: int) -> int:
    r = pow(a % p, (p - 1) // 2, p)
    if r == 0:
        raise ValueError(f"{a} is divisible by {p}")
    return 1 if r == 1 else -1


def hilbert_symbol(a, b, place) -> int:
    """The Hilbert symbol ``(a, b)_v`` with ``v`` a prime or ``INF``."""
    return _hilbert(sq(a), sq(b), place)


@lru_cache(maxsize=1 << 16)
def _hilbert(a: SquareClass, b: SquareClass, place) -> int:
    if place == INF:
        return -1 if a.sign < 0 and b.sign < 0 else 1
    p = int(place)
    alpha, beta = a.valuation(p), b.valuation(p)
    u, v = a.unit_part(p), b.unit_part(p)
    if p == 2:
        eps_u = ((u - 1) // 2) % 2
        eps_v = ((v - 1) // 2) % 2
        om_u = ((u * u - 1) // 8) % 2
        om_v = ((v * v - 1) // 8) % 2
        e = eps_u * eps_v + alpha * om_v + beta * om_u
        return -1 if e % 2 else 1
    e = alpha * beta * (((p - 1) // 2) % 2)
    s = -1 if e % 2 else 1
    if beta:
        s *= _legendre(u, p)
    if alpha:
        s *= _legendre(v, p)
    return s


# ---------------------------------------------------------------- forms


@dataclass(frozen=True)
class DiagForm:
    """A diagonal form ``<a_1, ..., a_r>``."""

    entries: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(sq(a) for a in self.entries))

    @classmethod
    def of(cls, *entries) -> "DiagForm":
        return cls(tuple(entries))

    @property
    def dim(self) -> int:
        return len(self.entries)

    def gw(self) -> "GWElem":
        return GWElem.from_counts(_count(self.entries))

    def __add__(self, other: "DiagForm") -> "DiagForm":
        return DiagForm(self.entries + other.entries)

    def __mul__(self, other: "DiagForm") -> "DiagForm":
        return DiagForm(tuple(a * b for a in self.entries for b in other.entries))

    def scaled(self, c) -> "DiagForm":
        c = sq(c)
        return DiagForm(tuple(c * a for a in self.entries))

    def to_json(self) -> dict:
        return {"entries": [a.value for a in self.entries]}

    @classmethod
    def from_json(cls, data) -> "DiagForm":
        if isinstance(data, dict):
            data = data["entries"]
        return cls(tuple(_parse_rational(x) for x in data))


def _parse_rational(x):
    if isinstance(x, str):
        return Fraction(x)
    return x


def _term_key(t) -> int:
    return t[0]._value


def _count(entries: Iterable[SquareClass]) -> dict:
    out: dict = {}
    for a in entries:
        out[a] = out.get(a, 0) + 1
    return out


@dataclass(frozen=True)
class GWElem:
    """A virtual form ``sum n_a <a>``, stored as sorted ``(class, multiplicity)`` pairs."""

    terms: tuple = ()

    @classmethod
    def from_counts(cls, counts: Mapping) -> "GWElem":
        merged: dict = {}
        for a, n in counts.items():
            if n:
                if not isinstance(a, SquareClass):
                    a = SquareClass.of(a)
                merged[a] = merged.get(a, 0) + n
        return cls(tuple(sorted(((a, n) for a, n in merged.items() if n), key=_term_key)))

    @classmethod
    def of(cls, *entries) -> "GWElem":
        return DiagForm(tuple(entries)).gw()

    @classmethod
    def scalar(cls, n: int) -> "GWElem":
        return cls.from_counts({ONE: n})

    @classmethod
    def zero(cls) -> "GWElem":
        return cls(())

    @classmethod
    def one(cls) -> "GWElem":
        return cls.scalar(1)

    @property
    def counts(self) -> dict:
        return dict(self.terms)

    @property
    def pos(self) -> DiagForm:
        return DiagForm(tuple(a for a, n in self.terms if n > 0 for _ in range(n)))

    @property
    def neg(self) -> DiagForm:
        return DiagForm(tuple(a for a, n in self.terms if n < 0 for _ in range(-n)))

    @property
    def dim(self) -> int:
        return sum(n for _, n in self.terms)

    @property
    def signature(self) -> int:
        return sum(n * a.sign for a, n in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other) -> "GWElem":
        other = as_gw(other)
        c = self.counts
        for a, n in other.terms:
            c[a] = c.get(a, 0) + n
        return GWElem.from_counts(c)

    __radd__ = __add__

    def __neg__(self) -> "GWElem":
        return GWElem(tuple((a, -n) for a, n in self.terms))

    def __sub__(self, other) -> "GWElem":
        return self + (-as_gw(other))

    def __rsub__(self, other) -> "GWElem":
        return as_gw(other) - self

    def __mul__(self, other) -> "GWElem":
        if isinstance(other, int):
            return GWElem.from_counts({a: n * other for a, n in self.terms})
        other = as_gw(other)
        c: dict = {}
        for a, n in self.terms:
            for b, m in other.terms:
                ab = a * b
                c[ab] = c.get(ab, 0) + n * m
        return GWElem.from_counts(c)

    __rmul__ = __mul__

    def scaled(self, c) -> "GWElem":
        c = sq(c)
        return GWElem.from_counts({c * a: n for a, n in self.terms})

    def classes(self) -> list:
        return [a for a, _ in self.terms]

    def witt(self) -> "WittClass":
        return witt_class(self)

    def __repr__(self) -> str:
        if not self.terms:
            return "GW(0)"
        return "GW(" + " + ".join(f"{n}{a!r}" for a, n in self.terms) + ")"

    def to_json(self) -> dict:
        return {"terms": [[a.value, n] for a, n in self.terms]}


def as_gw(x) -> GWElem:
    if isinstance(x, GWElem):
        return x
    if isinstance(x, DiagForm):
        return x.gw()
    if isinstance(x, int):
        return GWElem.scalar(x)
    raise TypeError(f"cannot interpret {x!r} as a Grothendieck-Witt element")


HYPERBOLIC = GWElem.of(1, -1)


def one_dim(a) -> GWElem:
    return GWElem.from_counts({sq(a): 1})


def pfister(*a) -> GWElem:
    """``<<a_1, ..., a_n>> = prod (<1> - <a_i>)``, an element of the n-th power of the augmentation ideal."""
    out = GWElem.one()
    for x in a:
        out = out * (GWElem.one() - one_dim(x))
    return out


def dim_zero_lift(x) -> GWElem:
    """The even-dimensional ``x`` shifted by hyperbolic planes to virtual dimension 0."""
    x = as_gw(x)
    if x.dim % 2:
        raise ValueError("only even-dimensional elements have a dimension-0 lift")
    return x - HYPERBOLIC * (x.dim // 2)


# ---------------------------------------------------------------- lambda-operations


def _basis(classes: Iterable[SquareClass]) -> list:
    """Generators of the subgroup spanned by ``classes``: -1 first, then primes."""
    primes = sorted({p for a in classes for p in a.primes})
    return [-1] + primes


def _mask(a: SquareClass, index: dict) -> int:
    m = 1 if a.sign < 0 else 0
    for p in a.primes:
        m |= 1 << index[p]
    return m


def _unmask(m: int, basis) -> SquareClass:
    return _unmask_cached(m, tuple(basis))


@lru_cache(maxsize=1 << 16)
def _unmask_cached(m: int, basis: tuple) -> SquareClass:
    sign = -1 if m & 1 else 1
    primes = tuple(basis[i] for i in range(1, len(basis)) if m >> i & 1)
    return SquareClass(sign, primes)


def _walsh(vec: list) -> list:
    v = list(vec)
    h = 1
    while h < len(v):
        for i in range(0, len(v), 2 * h):
            for j in range(i, i + h):
                x, y = v[j], v[j + h]
                v[j], v[j + h] = x + y, x - y
        h *= 2
    return v


def _gen_binom(n: int, k: int) -> int:
    """``binom(n, k)`` for any integer ``n`` (falling factorial over ``k!``)."""
    if k < 0:
        return 0
    if n >= 0:
        return comb(n, k)
    return (-1) ** k * comb(k - n - 1, k)


@dataclass(frozen=True)
class CharVector:
    """A group-ring element seen through the characters of a finite square-class group.

    ``basis`` lists generators (``-1`` then primes); ``values[s]`` is the
    value at the character ``s`` (a bitmask over the basis).  Ring operations
    are pointwise, which makes long polynomial computations cheap.
    """

    basis: tuple
    values: tuple

    @classmethod
    def from_gw(cls, x, basis: Iterable | None = None) -> "CharVector":
        x = as_gw(x)
        basis = tuple(basis) if basis is not None else tuple(_basis(x.classes()))
        index = {p: i for i, p in enumerate(basis) if p != -1}
        vec = [0] * (1 << len(basis))
        for a, n in x.terms:
            if any(p not in index for p in a.primes):
                raise ValueError(f"{a!r} is outside the span of {basis}")
            vec[_mask(a, index)] += n
        return cls(basis, tuple(_walsh(vec)))

    @classmethod
    def constant(cls, basis: Iterable, n: int) -> "CharVector":
        basis = tuple(basis)
        return cls(basis, (n,) * (1 << len(basis)))

    def to_gw(self) -> GWElem:
        size = len(self.values)
        counts = {}
        for mk, v in enumerate(_walsh(list(self.values))):
            if v:
                q, r = divmod(v, size)
                if r:
                    raise ArithmeticError("non-integral inverse character transform")
                counts[_unmask_cached(mk, self.basis)] = q
        return GWElem.from_counts(counts)

    @property
    def dim(self) -> int:
        return self.values[0]

    def _other(self, other) -> tuple:
        if isinstance(other, CharVector):
            if other.basis != self.basis:
                raise ValueError("character vectors over different bases")
            return other.values
        if isinstance(other, int):
            return (other,) * len(self.values)
        return CharVector.from_gw(other, self.basis).values

    def __add__(self, other) -> "CharVector":
        return CharVector(self.basis, tuple(a + b for a, b in zip(self.values, self._other(other))))

    __radd__ = __add__

    def __sub__(self, other) -> "CharVector":
        return CharVector(self.basis, tuple(a - b for a, b in zip(self.values, self._other(other))))

    def __rsub__(self, other) -> "CharVector":
        return CharVector(self.basis, tuple(b - a for a, b in zip(self.values, self._other(other))))

    def __neg__(self) -> "CharVector":
        return CharVector(self.basis, tuple(-a for a in self.values))

    def __mul__(self, other) -> "CharVector":
        if isinstance(other, int):
            return CharVector(self.basis, tuple(a * other for a in self.values))
        return CharVector(self.basis, tuple(a * b for a, b in zip(self.values, self._other(other))))

    __rmul__ = __mul__


def lambda_chars(x: CharVector, D: int) -> list:
    """``[lambda^0(x), ..., lambda^D(x)]`` as character vectors.

    At a character with value ``c`` on a virtual form of dimension ``dim``,
    ``lambda_t`` is ``(1+t)^P (1-t)^N`` with ``P = (dim+c)/2`` and
    ``N = (dim-c)/2``; virtual forms just give negative exponents.
    """
    dim = x.dim
    cols = []
    for c in x.values:
        P, N = (dim + c) // 2, (dim - c) // 2
        cols.append(_lambda_column(P, N, D))
    return [CharVector(x.basis, tuple(col[d] for col in cols)) for d in range(D + 1)]


@lru_cache(maxsize=1 << 14)
def _lambda_column(P: int, N: int, D: int) -> tuple:
    return tuple(
        sum(_gen_binom(P, j) * _gen_binom(N, d - j) * (-1) ** (d - j) for j in range(d + 1))
        for d in range(D + 1)
    )


def lambda_all(x, D: int) -> list:
    """``[lambda^0(x), ..., lambda^D(x)]`` for a virtual form, via :func:`lambda_chars`."""
    return [v.to_gw() for v in lambda_chars(CharVector.from_gw(x), D)]


def lambda_form(x, d: int) -> GWElem:
    if d < 0:
        raise ValueError("degree must be non-negative")
    return lambda_all(x, d)[d]


def lambda_series(x, order: int) -> list:
    return lambda_all(x, order)


# ---------------------------------------------------------------- Witt invariants


def _positive_entries(x: GWElem) -> dict:
    """Counts of a genuine form in the Witt class of ``x``: ``-<a>`` becomes ``<-a>``."""
    out: dict = {}
    for a, n in x.terms:
        b = a if n > 0 else MINUS_ONE * a
        out[b] = out.get(b, 0) + abs(n)
    return out


def _det(counts: dict) -> SquareClass:
    d = ONE
    for a, n in counts.items():
        if n % 2:
            d = d * a
    return d


def relevant_places(classes: Iterable[SquareClass]) -> list:
    primes = {2}
    for a in classes:
        primes.update(a.primes)
    return [INF] + sorted(primes)


def _hasse_exponents(counts: dict, places: list) -> dict:
    """Hasse invariant exponents (in F_2) of the form with the given entry counts.

    Uses bilinearity of the Hilbert symbol on the F_2-basis of generators:
    only the per-generator counts and the pairwise overlap counts matter.
    """
    basis = _basis(counts.keys())
    index = {p: i for i, p in enumerate(basis) if p != -1}
    m = len(basis)
    masks = [(_mask(a, index), n) for a, n in counts.items()]
    N = [[0] * m for _ in range(m)]
    for mk, n in masks:
        bits = [i for i in range(m) if mk >> i & 1]
        for i in bits:
            for j in bits:
                N[i][j] += n
    gens = [SquareClass(-1)] + [SquareClass(1, (p,)) for p in basis[1:]]
    out = {}
    for v in places:
        B = [[0 if hilbert_symbol(gens[i], gens[j], v) == 1 else 1 for j in range(m)] for i in range(m)]
        e = 0
        for k in range(m):
            if B[k][k]:
                e += N[k][k] * (N[k][k] - 1) // 2
            for l in range(k + 1, m):
                if B[k][l]:
                    e += N[k][k] * N[l][l] - N[k][l]
        out[v] = e % 2
    return out


# dim mod 8 -> exponents of (-1,-1) and (-1,det) turning the Hasse invariant into the Clifford invariant
_CLIFFORD_CORRECTION = {0: (0, 0), 1: (0, 0), 2: (1, 1), 3: (1, 1), 4: (1, 0), 5: (1, 0), 6: (0, 1), 7: (0, 1)}


@dataclass(frozen=True)
class WittClass:
    """Complete invariants of a Witt class over Q.

    ``clifford`` is the set of places where the Clifford invariant is
    nontrivial; it always has even cardinality.
    """

    dim_parity: int
    disc: SquareClass
    clifford: frozenset
    signature: int

    def is_zero(self) -> bool:
        return self.dim_parity == 0 and self.disc.is_one() and not self.clifford and self.signature == 0

    def to_json(self) -> dict:
        return {
            "dim_parity": self.dim_parity,
            "disc": self.disc.value,
            "clifford": sorted((str(p) for p in self.clifford), key=lambda s: (s == INF, len(s), s)),
            "signature": self.signature,
        }


def witt_class(x) -> WittClass:
    return _witt_class(as_gw(x))


@lru_cache(maxsize=1 << 14)
def _witt_class(x: GWElem) -> WittClass:
    counts = _positive_entries(x)
    n = sum(counts.values())
    det = _det(counts)
    signed_disc = det * MINUS_ONE if (n * (n - 1) // 2) % 2 else det
    places = relevant_places(counts.keys())
    hasse = _hasse_exponents(counts, places)
    alpha, beta = _CLIFFORD_CORRECTION[n % 8]
    ram = set()
    for v in places:
        e = hasse[v]
        if alpha and hilbert_symbol(MINUS_ONE, MINUS_ONE, v) == -1:
            e += 1
        if beta and hilbert_symbol(MINUS_ONE, det, v) == -1:
            e += 1
        if e % 2:
            ram.add(v)
    if len(ram) % 2:
        raise ArithmeticError("Clifford invariant violates reciprocity")
    return WittClass(n % 2, signed_disc, frozenset(ram), x.signature)


def hasse_invariant(x, place) -> int:
    counts = _positive_entries(as_gw(x))
    return -1 if _hasse_exponents(counts, [place])[place] else 1


def witt_equal(x, y) -> bool:
    return witt_class(as_gw(x) - as_gw(y)).is_zero()


def gw_equal(x, y) -> bool:
    x, y = as_gw(x), as_gw(y)
    return x.dim == y.dim and witt_equal(x, y)


def in_In(x, n: int) -> bool:
    """Membership in the n-th power of the fundamental ideal, for ``n <= 3``."""
    if n > 3:
        raise UnsupportedError("membership is decided only for n <= 3")
    w = x if isinstance(x, WittClass) else witt_class(x)
    if n <= 0:
        return True
    if w.dim_parity:
        return False
    if n == 1:
        return True
    if not w.disc.is_one():
        return False
    if n == 2:
        return True
    return not w.clifford and w.signature % 8 == 0


def in_I_power(x, n: int) -> bool:
    """Exact membership test for every ``n``.

    Over Q the ideals from the third power on are detected by the signature,
    so this extends :func:`in_In` without approximation.
    """
    w = x if isinstance(x, WittClass) else witt_class(x)
    if n <= 3:
        return in_In(w, n)
    return in_In(w, 3) and w.signature % (2**n) == 0


# ---------------------------------------------------------------- residues


@dataclass(frozen=True)
class FpWittClass:
    """A Witt class over F_p (p odd): dimension parity and whether the signed discriminant is a square."""

    p: int
    dim_parity: int
    disc_square: bool

    def is_zero(self) -> bool:
        return self.dim_parity == 0 and self.disc_square


def second_residue(x, p: int) -> FpWittClass:
    if p % 2 == 0:
        raise UnsupportedError("second residues are implemented for odd primes only")
    counts = _positive_entries(as_gw(x))
    n = 0
    det = 1
    for a, m in counts.items():
        if a.valuation(p):
            n += m
            if m % 2:
                det = det * a.unit_part(p) % p
    if (n * (n - 1) // 2) % 2:
        det = -det
    return FpWittClass(p, n % 2, _legendre(det, p) == 1)


def is_unimodular_at(x, p: int) -> bool:
    return all(not a.valuation(p) for a in as_gw(x).classes())

