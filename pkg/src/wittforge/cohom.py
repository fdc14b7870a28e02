"""Mod-2 Galois cohomology in two backends.

Rational backend (:class:`RatCoh`): the cohomology of Q with coefficients
mu_2, described completely by local data.  Degree 0 is a bit, degree 1 a
square class, degree 2 the even set of places where a Brauer class ramifies,
and from degree 3 on everything restricts isomorphically to the real place.

Symbolic backend (:class:`SymCoh`): the F_2-algebra on a degree-1 class
``rho`` (the class of -1) and independent degree-1 classes ``x_i`` with
``x_i^2 = rho x_i``.  A basis is given by the monomials ``rho^a x_S``.  The
power of ``rho`` is either free or killed at a fixed level.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .qform import (
    INF,
    MINUS_ONE,
    ONE,
    GWElem,
    hilbert_symbol,
    in_I_power,
    place_key,
    relevant_places,
    sq,
    witt_class,
)


class BackendMismatch(TypeError):
    """Classes from different backends or different rho-regimes were combined."""


class MembershipError(ValueError):
    """An element is not in the power of the fundamental ideal an operation requires."""


# ---------------------------------------------------------------- rational backend


def _real_bit(degree: int, payload) -> int:
    if degree == 0:
        return payload
    if degree == 1:
        return 1 if payload.sign < 0 else 0
    if degree == 2:
        return 1 if INF in payload else 0
    return payload


def _is_zero_payload(degree: int, payload) -> bool:
    if degree == 1:
        return payload.is_one()
    if degree == 2:
        return not payload
    return payload == 0


def _add_payload(degree: int, x, y):
    if degree == 1:
        return x * y
    if degree == 2:
        return x ^ y
    return (x + y) % 2


@dataclass(frozen=True)
class RatCoh:
    """A (possibly inhomogeneous) class in the cohomology of Q; ``parts`` maps degree to payload."""

    parts: tuple = ()

    def __post_init__(self):
        for deg, payload in self.parts:
            if deg == 2 and len(payload) % 2:
                raise ValueError("a degree-2 class must ramify at an even number of places")

    @classmethod
    def _make(cls, parts: dict) -> "RatCoh":
        return cls(tuple(sorted((d, p) for d, p in parts.items() if not _is_zero_payload(d, p))))

    @classmethod
    def zero(cls) -> "RatCoh":
        return cls(())

    @classmethod
    def one(cls) -> "RatCoh":
        return cls(((0, 1),))

    @classmethod
    def square(cls, a) -> "RatCoh":
        return cls._make({1: sq(a)})

    @classmethod
    def ramification(cls, places: Iterable) -> "RatCoh":
        return cls._make({2: frozenset(places)})

    @classmethod
    def real(cls, degree: int, bit: int) -> "RatCoh":
        if degree < 3:
            raise ValueError("real-place classes start in degree 3")
        return cls._make({degree: bit % 2})

    @classmethod
    def minus_one(cls) -> "RatCoh":
        return cls.square(MINUS_ONE)

    def component(self, degree: int):
        for d, p in self.parts:
            if d == degree:
                return p
        return {0: 0, 1: ONE, 2: frozenset()}.get(degree, 0)

    def is_zero(self) -> bool:
        return not self.parts

    def __add__(self, other: "RatCoh") -> "RatCoh":
        if not isinstance(other, RatCoh):
            raise BackendMismatch("cannot add classes from different backends")
        out = dict(self.parts)
        for d, p in other.parts:
            out[d] = _add_payload(d, out[d], p) if d in out else p
        return RatCoh._make(out)

    __sub__ = __add__

    def __neg__(self) -> "RatCoh":
        return self

    def __mul__(self, other) -> "RatCoh":
        if isinstance(other, int):
            return self if other % 2 else RatCoh.zero()
        if not isinstance(other, RatCoh):
            raise BackendMismatch("cannot multiply classes from different backends")
        out = RatCoh.zero()
        for i, x in self.parts:
            for j, y in other.parts:
                out = out + _cup_homogeneous(i, x, j, y)
        return out

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, RatCoh) and self.parts == other.parts

    def __hash__(self) -> int:
        return hash(self.parts)

    def to_json(self):
        out = []
        for d, p in self.parts:
            if d == 1:
                out.append({"degree": 1, "class": p.value})
            elif d == 2:
                out.append({"degree": 2, "places": [str(v) for v in sorted(p, key=place_key)]})
            else:
                out.append({"degree": d, "bit": p})
        return out


def _cup_homogeneous(i: int, x, j: int, y) -> RatCoh:
    if i == 0:
        return RatCoh._make({j: y}) if x else RatCoh.zero()
    if j == 0:
        return RatCoh._make({i: x}) if y else RatCoh.zero()
    if i == 1 and j == 1:
        places = relevant_places([x, y])
        return RatCoh.ramification(v for v in places if hilbert_symbol(x, y, v) == -1)
    return RatCoh.real(i + j, _real_bit(i, x) * _real_bit(j, y))


def cup(c1, c2):
    """Cup product; the classes must come from the same backend."""
    if type(c1) is not type(c2):
        raise BackendMismatch("cannot cup classes from different backends")
    return c1 * c2


def e_n(x, n: int) -> RatCoh:
    """The degree-n invariant of an element of the n-th power of the fundamental ideal over Q."""
    w = witt_class(x)
    if not in_I_power(w, n):
        raise MembershipError(f"element is not in I^{n}")
    if n == 0:
        return RatCoh._make({0: w.dim_parity})
    if n == 1:
        return RatCoh.square(w.disc)
    if n == 2:
        return RatCoh.ramification(w.clifford)
    return RatCoh.real(n, (w.signature >> n) % 2)


# ---------------------------------------------------------------- symbolic backend


@dataclass(frozen=True)
class SymSquare:
    """A symbolic square class ``(-1)^neg * prod x_i`` with independent generic ``x_i``."""

    neg: bool = False
    vars: frozenset = frozenset()

    @classmethod
    def var(cls, i: int) -> "SymSquare":
        return cls(False, frozenset([i]))

    def __mul__(self, other: "SymSquare") -> "SymSquare":
        return SymSquare(self.neg ^ other.neg, self.vars ^ other.vars)

    def __neg__(self) -> "SymSquare":
        return SymSquare(not self.neg, self.vars)

    def is_one(self) -> bool:
        return not self.neg and not self.vars

    def __repr__(self) -> str:
        body = "*".join(f"x{i}" for i in sorted(self.vars)) or "1"
        return ("-" if self.neg else "") + body


SYM_MINUS_ONE = SymSquare(True)


@dataclass(frozen=True)
class SymCoh:
    """A class in the symbolic algebra; ``monomials`` holds pairs ``(a, S)`` for ``rho^a x_S``.

    ``rho_cap`` is ``None`` for the formally real regime, else the level N with ``rho^N = 0``.
    """

    monomials: frozenset = frozenset()
    rho_cap: int | None = None

    def __post_init__(self):
        if self.rho_cap is not None:
            if self.rho_cap < 1:
                raise ValueError("rho_cap must be at least 1")
            if any(a >= self.rho_cap for a, _ in self.monomials):
                object.__setattr__(
                    self, "monomials", frozenset(m for m in self.monomials if m[0] < self.rho_cap)
                )

    @classmethod
    def zero(cls, rho_cap=None) -> "SymCoh":
        return cls(frozenset(), rho_cap)

    @classmethod
    def one(cls, rho_cap=None) -> "SymCoh":
        return cls(frozenset([(0, frozenset())]), rho_cap)

    @classmethod
    def rho(cls, rho_cap=None, power: int = 1) -> "SymCoh":
        return cls(frozenset([(power, frozenset())]), rho_cap)

    @classmethod
    def x(cls, i: int, rho_cap=None) -> "SymCoh":
        return cls(frozenset([(0, frozenset([i]))]), rho_cap)

    @classmethod
    def monomial(cls, a: int, S: Iterable[int], rho_cap=None) -> "SymCoh":
        return cls(frozenset([(a, frozenset(S))]), rho_cap)

    @classmethod
    def square(cls, s: SymSquare, rho_cap=None) -> "SymCoh":
        """The degree-1 class ``{s} = neg * rho + sum x_i``."""
        mons = [(0, frozenset([i])) for i in s.vars]
        if s.neg:
            mons.append((1, frozenset()))
        return cls(frozenset(mons), rho_cap)

    @classmethod
    def minus_one(cls, rho_cap=None) -> "SymCoh":
        return cls.rho(rho_cap)

    def _check(self, other):
        if not isinstance(other, SymCoh):
            raise BackendMismatch("cannot combine classes from different backends")
        if other.rho_cap != self.rho_cap:
            raise BackendMismatch("cannot combine classes from different rho-regimes")

    def is_zero(self) -> bool:
        return not self.monomials

    def degrees(self) -> set:
        return {a + len(S) for a, S in self.monomials}

    def homogeneous(self, degree: int) -> "SymCoh":
        return SymCoh(frozenset(m for m in self.monomials if m[0] + len(m[1]) == degree), self.rho_cap)

    def __add__(self, other: "SymCoh") -> "SymCoh":
        self._check(other)
        return SymCoh(self.monomials ^ other.monomials, self.rho_cap)

    __sub__ = __add__

    def __neg__(self) -> "SymCoh":
        return self

    def __mul__(self, other) -> "SymCoh":
        if isinstance(other, int):
            return self if other % 2 else SymCoh.zero(self.rho_cap)
        self._check(other)
        out: set = set()
        for a, S in self.monomials:
            for b, T in other.monomials:
                m = (a + b + len(S & T), S | T)
                if self.rho_cap is not None and m[0] >= self.rho_cap:
                    continue
                out ^= {m}
        return SymCoh(frozenset(out), self.rho_cap)

    __rmul__ = __mul__

    def to_json(self) -> list:
        return [
            {"rho": a, "vars": sorted(S)}
            for a, S in sorted(self.monomials, key=lambda m: (m[0] + len(m[1]), m[0], sorted(m[1])))
        ]

    @classmethod
    def from_json(cls, data: list, rho_cap=None) -> "SymCoh":
        out = cls.zero(rho_cap)
        for m in data:
            out = out + cls.monomial(int(m["rho"]), m["vars"], rho_cap)
        return out

    def __repr__(self) -> str:
        if not self.monomials:
            return "0"
        terms = []
        for m in self.to_json():
            parts = ([f"rho^{m['rho']}"] if m["rho"] else []) + [f"x{i}" for i in m["vars"]]
            terms.append("*".join(parts) or "1")
        return " + ".join(terms)


# ---------------------------------------------------------------- shared helpers


@dataclass(frozen=True)
class CohBackend:
    """Selects a backend: ``rational`` or ``symbolic`` (with an optional ``rho_cap``)."""

    kind: str = "rational"
    rho_cap: int | None = None

    def __post_init__(self):
        if self.kind not in ("rational", "symbolic"):
            raise ValueError(f"unknown backend {self.kind!r}")
        if self.kind == "rational" and self.rho_cap is not None:
            raise ValueError("the rational backend has no rho-regime to choose")

    def zero(self):
        return RatCoh.zero() if self.kind == "rational" else SymCoh.zero(self.rho_cap)

    def one(self):
        return RatCoh.one() if self.kind == "rational" else SymCoh.one(self.rho_cap)

    def minus_one(self):
        return RatCoh.minus_one() if self.kind == "rational" else SymCoh.rho(self.rho_cap)

    def square(self, a):
        if self.kind == "rational":
            return RatCoh.square(a)
        if not isinstance(a, SymSquare):
            raise BackendMismatch("the symbolic backend needs symbolic square classes")
        return SymCoh.square(a, self.rho_cap)

    def symbol(self, entries: Sequence):
        """The cup product ``{a_1} ... {a_n}``."""
        out = self.one()
        for a in entries:
            out = out * self.square(a)
        return out


RATIONAL = CohBackend("rational")


def backend_of(entry) -> CohBackend:
    return CohBackend("symbolic") if isinstance(entry, SymSquare) else RATIONAL


def sw(q: Sequence, d: int, backend: CohBackend | None = None):
    """Stiefel-Whitney class ``w_d`` of a diagonal form given by its entries."""
    return sw_upto(q, d, backend)[d]


def sw_upto(q: Sequence, d: int, backend: CohBackend | None = None) -> list:
    """``[w_0, ..., w_d]`` in one pass."""
    entries = list(q.entries) if hasattr(q, "entries") else list(q)
    if backend is None:
        backend = backend_of(entries[0]) if entries else RATIONAL
    e = [backend.one()] + [backend.zero()] * d
    for a in entries:
        s = backend.square(a)
        for k in range(d, 0, -1):
            e[k] = e[k] + e[k - 1] * s
    return e


def sw_total(q: Sequence, backend: CohBackend | None = None) -> list:
    entries = list(q.entries) if hasattr(q, "entries") else list(q)
    return sw_upto(entries, len(entries), backend)


# ---------------------------------------------------------------- Pfister sums


def _mul_class(a, b):
    return a * b


@dataclass(frozen=True)
class PfisterSum:
    """A signed sum of n-fold Pfister forms ``sum eps_i <<a_i1, ..., a_in>>``.

    Entries are rational square classes or :class:`SymSquare`; never mixed.
    """

    level: int
    terms: tuple = field(default=())

    def __post_init__(self):
        fixed = []
        for eps, entries in self.terms:
            if eps not in (1, -1):
                raise ValueError("Pfister sum signs must be +1 or -1")
            entries = tuple(e if isinstance(e, SymSquare) else sq(e) for e in entries)
            if len(entries) != self.level:
                raise ValueError(f"expected {self.level}-fold Pfister forms")
            fixed.append((eps, entries))
        object.__setattr__(self, "terms", tuple(fixed))

    @classmethod
    def of(cls, level: int, *terms) -> "PfisterSum":
        return cls(level, tuple(terms))

    @classmethod
    def from_diagonal(cls, entries: Sequence) -> "PfisterSum":
        """The dimension-0 lift of an even-dimensional diagonal form as a sum of 1-fold Pfister forms.

        ``<a_1, ..., a_2r> - r H = r <<-1>> - sum <<a_i>>`` holds in GW.
        """
        entries = list(entries.entries) if hasattr(entries, "entries") else list(entries)
        if len(entries) % 2:
            raise ValueError("only even-dimensional forms lift to dimension 0")
        symbolic = bool(entries) and isinstance(entries[0], SymSquare)
        m1 = SYM_MINUS_ONE if symbolic else MINUS_ONE
        terms = [(1, (m1,))] * (len(entries) // 2) + [(-1, (a,)) for a in entries]
        return cls(1, tuple(terms))

    @property
    def symbolic(self) -> bool:
        return any(isinstance(e, SymSquare) for _, es in self.terms for e in es)

    def __add__(self, other: "PfisterSum") -> "PfisterSum":
        if other.level != self.level:
            raise ValueError("cannot add Pfister sums of different levels")
        return PfisterSum(self.level, self.terms + other.terms)

    def __neg__(self) -> "PfisterSum":
        return PfisterSum(self.level, tuple((-e, es) for e, es in self.terms))

    def __sub__(self, other: "PfisterSum") -> "PfisterSum":
        return self + (-other)

    def times_pfister(self, *b) -> "PfisterSum":
        """Product with ``<<b_1, ..., b_m>>``, raising the level by ``m``."""
        return PfisterSum(self.level + len(b), tuple((e, es + tuple(b)) for e, es in self.terms))

    def scaled(self, lam) -> "PfisterSum":
        """``<lam> * self``, using ``<lam><<a, ...>> = <<lam a, ...>> - <<lam, ...>>``."""
        if self.level < 1:
            raise ValueError("scaling needs level >= 1")
        lam = lam if isinstance(lam, SymSquare) else sq(lam)
        out = []
        for e, es in self.terms:
            out.append((e, (_mul_class(lam, es[0]),) + es[1:]))
            out.append((-e, (lam,) + es[1:]))
        return PfisterSum(self.level, tuple(out))

    def to_gw(self) -> GWElem:
        if self.symbolic:
            raise TypeError("symbolic Pfister sums have no Grothendieck-Witt value")
        from .qform import pfister

        out = GWElem.zero()
        for e, es in self.terms:
            out = out + pfister(*es) * e
        return out

    def to_json(self) -> dict:
        if self.symbolic:
            raise TypeError("symbolic Pfister sums are not serialized")
        return {"level": self.level, "terms": [[e, [a.value for a in es]] for e, es in self.terms]}

    @classmethod
    def from_json(cls, data: dict) -> "PfisterSum":
        return cls(int(data["level"]), tuple((int(e), tuple(es)) for e, es in data["terms"]))


def e_n_pfister_sum(x: PfisterSum, backend: CohBackend | None = None):
    """``e_n(sum eps_i <<a_i>>) = sum {a_i}`` on the given representation."""
    if backend is None:
        backend = CohBackend("symbolic") if x.symbolic else RATIONAL
    out = backend.zero()
    for _, es in x.terms:
        out = out + backend.symbol(es)
    return out


def coh_equal(x, y) -> bool:
    if type(x) is not type(y):
        raise BackendMismatch("cannot compare classes from different backends")
    return (x - y).is_zero()
