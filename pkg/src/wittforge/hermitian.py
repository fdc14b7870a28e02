"""Quaternion algebras with their canonical involution and the mixed Witt ring.

Quaternionic form components are carried as formal diagonals.  Equality in
``W^-(Q)`` is never decided directly; every assertion goes through a scalar
product (which lands in ``W(Q)``) or through a split Morita image.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Sequence

from . import linalg
from .invariants import binom0, f_from_g_coeffs, g_values, WITT
from .qform import (
    HYPERBOLIC,
    INF,
    DiagForm,
    GWElem,
    SquareClass,
    hilbert_symbol,
    in_I_power,
    in_In,
    lambda_all,
    gw_equal,
    pfister,
    relevant_places,
    sq,
    witt_class,
    witt_equal,
)


class NotSplitError(ValueError):
    """The quaternion algebra is a division algebra."""


# ---------------------------------------------------------------- quaternions


@dataclass(frozen=True)
class QuaternionAlgebra:
    """``(a, b)``: ``i^2 = a``, ``j^2 = b``, ``k = ij = -ji``."""

    a: Fraction
    b: Fraction

    def __post_init__(self):
        a, b = Fraction(self.a), Fraction(self.b)
        if a == 0 or b == 0:
            raise ValueError("quaternion parameters must be nonzero")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def elem(self, *c) -> "Quaternion":
        if len(c) == 1 and not isinstance(c[0], (int, Fraction)):
            c = tuple(c[0])
        if len(c) != 4:
            raise ValueError("a quaternion has 4 coordinates")
        return Quaternion(self, tuple(Fraction(x) for x in c))

    def scalar(self, x) -> "Quaternion":
        return self.elem(x, 0, 0, 0)

    @property
    def one(self) -> "Quaternion":
        return self.scalar(1)

    @property
    def i(self) -> "Quaternion":
        return self.elem(0, 1, 0, 0)

    @property
    def j(self) -> "Quaternion":
        return self.elem(0, 0, 1, 0)

    @property
    def k(self) -> "Quaternion":
        return self.elem(0, 0, 0, 1)

    def basis(self) -> list:
        return [self.one, self.i, self.j, self.k]

    def mul(self, x: tuple, y: tuple) -> tuple:
        a, b = self.a, self.b
        x0, x1, x2, x3 = x
        y0, y1, y2, y3 = y
        return (
            x0 * y0 + a * x1 * y1 + b * x2 * y2 - a * b * x3 * y3,
            x0 * y1 + x1 * y0 - b * x2 * y3 + b * x3 * y2,
            x0 * y2 + x2 * y0 + a * x1 * y3 - a * x3 * y1,
            x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1,
        )

    def ramification(self) -> frozenset:
        places = relevant_places([sq(self.a), sq(self.b)])
        return frozenset(v for v in places if hilbert_symbol(self.a, self.b, v) == -1)

    def is_split(self) -> bool:
        return not self.ramification()

    def to_json(self) -> dict:
        return {"a": str(self.a), "b": str(self.b)}

    @classmethod
    def from_json(cls, data: dict) -> "QuaternionAlgebra":
        return cls(Fraction(data["a"]), Fraction(data["b"]))


HAMILTON = QuaternionAlgebra(-1, -1)


@dataclass(frozen=True)
class Quaternion:
    alg: QuaternionAlgebra
    c: tuple

    def _check(self, other: "Quaternion"):
        if other.alg != self.alg:
            raise ValueError("quaternions from different algebras")

    def __add__(self, other) -> "Quaternion":
        if not isinstance(other, Quaternion):
            other = self.alg.scalar(other)
        self._check(other)
        return Quaternion(self.alg, tuple(x + y for x, y in zip(self.c, other.c)))

    __radd__ = __add__

    def __neg__(self) -> "Quaternion":
        return Quaternion(self.alg, tuple(-x for x in self.c))

    def __sub__(self, other) -> "Quaternion":
        return self + (-other)

    def __rsub__(self, other) -> "Quaternion":
        return (-self) + other

    def __mul__(self, other) -> "Quaternion":
        if isinstance(other, Quaternion):
            self._check(other)
            return Quaternion(self.alg, self.alg.mul(self.c, other.c))
        s = Fraction(other)
        return Quaternion(self.alg, tuple(x * s for x in self.c))

    def __rmul__(self, other) -> "Quaternion":
        return self * other

    def conj(self) -> "Quaternion":
        c0, c1, c2, c3 = self.c
        return Quaternion(self.alg, (c0, -c1, -c2, -c3))

    @property
    def trd(self) -> Fraction:
        return 2 * self.c[0]

    @property
    def nrd(self) -> Fraction:
        a, b = self.alg.a, self.alg.b
        c0, c1, c2, c3 = self.c
        return c0 * c0 - a * c1 * c1 - b * c2 * c2 + a * b * c3 * c3

    @property
    def pure_part(self) -> "Quaternion":
        return Quaternion(self.alg, (Fraction(0),) + self.c[1:])

    def is_pure(self) -> bool:
        return self.c[0] == 0

    def is_scalar(self) -> bool:
        return not any(self.c[1:])

    def is_zero(self) -> bool:
        return not any(self.c)

    @property
    def square_scalar(self) -> Fraction:
        """``z^2`` for a pure quaternion (a scalar, equal to ``-nrd(z)``)."""
        if not self.is_pure():
            raise ValueError("only pure quaternions square to scalars")
        return -self.nrd

    def inverse(self) -> "Quaternion":
        n = self.nrd
        if n == 0:
            raise ZeroDivisionError("quaternion is not invertible")
        return self.conj() * (1 / n)

    def commutes_with(self, other: "Quaternion") -> bool:
        return self * other == other * self

    def to_json(self) -> dict:
        return {"c": [str(x) for x in self.c]}

    def __repr__(self) -> str:
        return "Quaternion(" + ", ".join(str(x) for x in self.c) + ")"


def norm_form(Q: QuaternionAlgebra) -> DiagForm:
    return DiagForm.of(1, -Q.a, -Q.b, Q.a * Q.b)


def _pure_invertible(z: Quaternion, name: str = "z"):
    if not z.is_pure():
        raise ValueError(f"{name} must be a pure quaternion")
    if z.nrd == 0:
        raise ValueError(f"{name} must be invertible")


def anticommuting(*zs: Quaternion) -> Quaternion:
    """An invertible pure quaternion anticommuting with the given pure quaternions (at most two)."""
    alg = zs[0].alg
    if len(zs) == 2 and not zs[0].commutes_with(zs[1]):
        z0 = (zs[0] * zs[1]).pure_part
        if z0.nrd != 0:
            return z0
    z = zs[0]
    candidates = [alg.i, alg.j, alg.k, alg.i + alg.j, alg.i + alg.k, alg.j + alg.k, alg.i + alg.j + alg.k]
    candidates += [alg.i + 2 * alg.j, alg.j + 2 * alg.k, alg.i + 3 * alg.k, alg.i - alg.j + 2 * alg.k]
    for w in candidates:
        z0 = (z * w).pure_part
        if z0.is_zero() or z0.nrd == 0:
            continue
        if all(z0 * y == -(y * z0) for y in zs):
            return z0
    raise ArithmeticError("no invertible anticommuting pure quaternion among the candidates")


# ---------------------------------------------------------------- phi forms and products


def phi_form(zs: Sequence[Quaternion]) -> GWElem:
    """``<<z_1^2, ..., z_r^2>> - <<-1>>^(r-2) n_Q`` in W (a class of dimension 0)."""
    zs = list(zs)
    if len(zs) < 2:
        raise ValueError("phi needs at least two quaternions")
    for n, z in enumerate(zs):
        _pure_invertible(z, f"z_{n + 1}")
    alg = zs[0].alg
    base = pfister(*[z.square_scalar for z in zs])
    return base - pfister(*([-1] * (len(zs) - 2) + [alg.a, alg.b]))


def phi_form_explicit(zs: Sequence[Quaternion]) -> GWElem:
    """``<<z_1^2, z_2^2 z_0^2, z_3^2, ...>>`` with ``z_0`` anticommuting with ``z_1``."""
    zs = list(zs)
    z0 = anticommuting(zs[0])
    entries = [zs[0].square_scalar, zs[1].square_scalar * z0.square_scalar] + [z.square_scalar for z in zs[2:]]
    return pfister(*entries)


def phi_is_pfister(zs: Sequence[Quaternion]) -> bool:
    return witt_equal(phi_form(zs), phi_form_explicit(zs))


def _gram(Q: QuaternionAlgebra, bil) -> list:
    basis = Q.basis()
    return [[bil(x, y) for y in basis] for x in basis]


def product_gram(z1: Quaternion, z2: Quaternion) -> list:
    """Gram matrix of ``(x, y) -> Trd(conj(x) z1 y conj(z2))`` on ``1, i, j, k``."""
    z2c = z2.conj()
    return _gram(z1.alg, lambda x, y: (x.conj() * z1 * y * z2c).trd)


def gram_form(G: list) -> DiagForm:
    entries = linalg.diagonalize_symmetric(G)
    if any(e == 0 for e in entries):
        raise ValueError("degenerate Gram matrix (non-invertible input)")
    return DiagForm(tuple(entries))


@dataclass(frozen=True)
class ProductResult:
    formula: DiagForm
    gram: DiagForm

    @property
    def agrees(self) -> bool:
        return witt_equal(self.formula.gw(), self.gram.gw()) and self.formula.dim == self.gram.dim


def diag_product_form(z1: Quaternion, z2: Quaternion) -> DiagForm:
    """``<z1> . <z2>`` as a genuine 4-dimensional form.

    Scalars: ``<2ab> n_Q``.  Pure quaternions: ``<-Trd(z1 z2)> <<z1^2, z2^2 z0^2>>``
    for ``z0`` anticommuting with ``z1``, and a hyperbolic form when
    ``Trd(z1 z2) = 0``.
    """
    Q = z1.alg
    if z1.is_scalar() and z2.is_scalar():
        a, b = z1.c[0], z2.c[0]
        if a == 0 or b == 0:
            raise ValueError("scalars must be nonzero")
        return DiagForm(tuple(2 * a * b * e for e in (1, -Q.a, -Q.b, Q.a * Q.b)))
    if z1.is_scalar() or z2.is_scalar():
        raise ValueError("a hermitian times an anti-hermitian form lies in the alternating component")
    _pure_invertible(z1, "z1")
    _pure_invertible(z2, "z2")
    T = (z1 * z2).trd
    if T == 0:
        return DiagForm.of(1, -1, 1, -1)
    z0 = anticommuting(z1)
    s1, s2 = z1.square_scalar, z2.square_scalar * z0.square_scalar
    return DiagForm(tuple(-T * e for e in (1, -s1, -s2, s1 * s2)))


def diag_product(z1: Quaternion, z2: Quaternion) -> ProductResult:
    """The product formula together with its Gram-matrix oracle."""
    return ProductResult(diag_product_form(z1, z2), gram_form(product_gram(z1, z2)))


def diag_product_witt(z1: Quaternion, z2: Quaternion) -> GWElem:
    """``<-Trd(z1 z2)> phi_{z1,z2}`` as a Witt class (zero when the trace vanishes)."""
    T = (z1 * z2).trd
    if T == 0:
        return GWElem.zero()
    return phi_form([z1, z2]).scaled(-T)


# ---------------------------------------------------------------- trace forms of involutions


def _matrix_basis(Q: QuaternionAlgebra, r: int) -> list:
    out = []
    for i in range(r):
        for j in range(r):
            for e in Q.basis():
                out.append((i, j, e))
    return out


def _as_matrix(Q: QuaternionAlgebra, r: int, vec: Sequence) -> list:
    M = [[Q.scalar(0) for _ in range(r)] for _ in range(r)]
    for idx, x in enumerate(vec):
        if x:
            i, rest = divmod(idx, 4 * r)
            j, e = divmod(rest, 4)
            M[i][j] = M[i][j] + Q.basis()[e] * x
    return M


def _as_vector(M: list) -> list:
    return [x for row in M for q in row for x in q.c]


def adjoint_involution(h: Sequence[Quaternion], X: list) -> list:
    """``sigma_h(X) = h^{-1} conj(X)^T h`` for a diagonal form ``h`` on ``M_r(Q)``."""
    r = len(h)
    inv = [z.inverse() for z in h]
    return [[inv[i] * X[j][i].conj() * h[j] for j in range(r)] for i in range(r)]


def _mat_product(X: list, Y: list) -> list:
    r = len(X)
    Q = X[0][0].alg
    out = [[Q.scalar(0) for _ in range(r)] for _ in range(r)]
    for i in range(r):
        for j in range(r):
            acc = Q.scalar(0)
            for k in range(r):
                acc = acc + X[i][k] * Y[k][j]
            out[i][j] = acc
    return out


def involution_type(h: Sequence[Quaternion]) -> str:
    """``symplectic`` for hermitian ``h`` (scalar entries), ``orthogonal`` for anti-hermitian."""
    if all(z.is_scalar() for z in h):
        return "symplectic"
    if all(z.is_pure() for z in h):
        return "orthogonal"
    raise ValueError("entries must be all scalars or all pure quaternions")


@dataclass(frozen=True)
class TraceFormResult:
    form: DiagForm
    dim: int
    involution: str


def trace_form_involution(h: Sequence[Quaternion], part: str = "+") -> TraceFormResult:
    """``T_sigma(x, y) = Trd(sigma(x) y)`` on ``M_r(Q)``, restricted to ``Sym`` (``+``), ``Skew`` (``-``) or all (``full``)."""
    h = list(h)
    for z in h:
        if z.nrd == 0:
            raise ValueError("entries must be invertible")
    kind = involution_type(h)
    Q = h[0].alg
    r = len(h)
    n = 4 * r * r
    unit = [[Fraction(int(a == b)) for b in range(n)] for a in range(n)]
    images = [_as_vector(adjoint_involution(h, _as_matrix(Q, r, e))) for e in unit]
    # column c of sigma is the image of basis vector c
    sigma = linalg.transpose(images)

    def trd_matrix(M):
        return sum((M[i][i].trd for i in range(r)), Fraction(0))

    mats = [_as_matrix(Q, r, e) for e in unit]
    sig_mats = [_as_matrix(Q, r, v) for v in images]
    G = [[trd_matrix(_mat_product(sig_mats[a], mats[b])) for b in range(n)] for a in range(n)]
    if part == "full":
        basis = unit
    elif part in ("+", "-"):
        s = 1 if part == "+" else -1
        basis = linalg.nullspace([[sigma[a][b] - s * unit[a][b] for b in range(n)] for a in range(n)])
    else:
        raise ValueError("part must be '+', '-' or 'full'")
    expected = {
        ("symplectic", "+"): r * (2 * r - 1),
        ("symplectic", "-"): r * (2 * r + 1),
        ("orthogonal", "+"): r * (2 * r + 1),
        ("orthogonal", "-"): r * (2 * r - 1),
    }.get((kind, part), n)
    if len(basis) != expected:
        raise ArithmeticError(f"{part} part has dimension {len(basis)}, expected {expected}")
    form = gram_form(linalg.gram_restrict(G, basis))
    return TraceFormResult(form, len(basis), kind)


# ---------------------------------------------------------------- mixed Witt rings


@dataclass(frozen=True)
class SplitMixedElem:
    """``Psi(x, y) = x_(0) + Delta(y)`` in ``W(K)[Z/2]``, with ``x, y`` Witt classes given by representatives."""

    x: GWElem
    y: GWElem

    def __mul__(self, other: "SplitMixedElem") -> "SplitMixedElem":
        x1, y1, x2, y2 = self.x, self.y, other.x, other.y
        return SplitMixedElem(x1 * x2, x1 * y2 + x2 * y1 + y1 * y2 * 2)

    def __add__(self, other: "SplitMixedElem") -> "SplitMixedElem":
        return SplitMixedElem(self.x + other.x, self.y + other.y)

    def equals(self, other: "SplitMixedElem") -> bool:
        return witt_equal(self.x, other.x) and witt_equal(self.y, other.y)

    def to_group_ring(self) -> tuple:
        """Coordinates ``(pi_0, pi_1)`` in ``W(K)[Z/2]``."""
        return (self.x + self.y, -self.y)

    @classmethod
    def from_group_ring(cls, p0: GWElem, p1: GWElem) -> "SplitMixedElem":
        """``Psi^{-1} = (pi_0 + pi_1, -pi_1)``."""
        return cls(p0 + p1, -p1)

    @classmethod
    def one(cls) -> "SplitMixedElem":
        return cls(GWElem.one(), GWElem.zero())


def split_mixed_mul(e1: SplitMixedElem, e2: SplitMixedElem) -> SplitMixedElem:
    return e1 * e2


def group_ring_mul(a: tuple, b: tuple) -> tuple:
    """Product in ``R[Z/2]`` in the ``(pi_0, pi_1)`` coordinates."""
    return (a[0] * b[0] + a[1] * b[1], a[0] * b[1] + a[1] * b[0])


@dataclass(frozen=True)
class MixedWittElem:
    """``W(K) + W^+(Q) + W^-(Q)``; quaternionic parts are signed formal diagonals.

    ``h_plus`` holds ``(scalar, multiplicity)`` pairs (hermitian forms),
    ``h_minus`` holds ``(pure quaternion, multiplicity)`` pairs (anti-hermitian forms).
    """

    alg: QuaternionAlgebra
    w: GWElem = field(default_factory=GWElem.zero)
    h_plus: tuple = ()
    h_minus: tuple = ()

    @classmethod
    def hermitian(cls, alg, *entries) -> "MixedWittElem":
        return cls(alg, GWElem.zero(), tuple((Fraction(a), 1) for a in entries), ())

    @classmethod
    def anti_hermitian(cls, alg, *zs: Quaternion) -> "MixedWittElem":
        for z in zs:
            _pure_invertible(z)
        return cls(alg, GWElem.zero(), (), tuple((z, 1) for z in zs))

    @classmethod
    def scalar(cls, alg, w) -> "MixedWittElem":
        return cls(alg, w if isinstance(w, GWElem) else GWElem.of(*w))

    def __add__(self, other: "MixedWittElem") -> "MixedWittElem":
        return MixedWittElem(self.alg, self.w + other.w, self.h_plus + other.h_plus, self.h_minus + other.h_minus)

    def __neg__(self) -> "MixedWittElem":
        return MixedWittElem(
            self.alg, -self.w, tuple((a, -m) for a, m in self.h_plus), tuple((z, -m) for z, m in self.h_minus)
        )

    def _scale_parts(self, w: GWElem) -> tuple:
        plus, minus = [], []
        for c, n in w.terms:
            for a, m in self.h_plus:
                plus.append((a * c.value, n * m))
            for z, m in self.h_minus:
                minus.append((z * c.value, n * m))
        return tuple(plus), tuple(minus)

    def __mul__(self, other: "MixedWittElem") -> "MixedWittElem":
        if other.alg != self.alg:
            raise ValueError("mixed elements over different algebras")
        w = self.w * other.w
        for a, m in self.h_plus:
            for b, n in other.h_plus:
                w = w + diag_product_form(self.alg.scalar(a), self.alg.scalar(b)).gw() * (m * n)
        for z1, m in self.h_minus:
            for z2, n in other.h_minus:
                w = w + diag_product_form(z1, z2).gw() * (m * n)
        # hermitian times anti-hermitian lands in W^-(K) = 0
        p1, m1 = MixedWittElem(self.alg, GWElem.zero(), other.h_plus, other.h_minus)._scale_parts(self.w)
        p2, m2 = self._scale_parts(other.w)
        return MixedWittElem(self.alg, w, p1 + p2, m1 + m2)

    def scalar_part(self) -> GWElem:
        return self.w


# ---------------------------------------------------------------- g-formula over quaternions


def _pair_products(zs: Sequence[Quaternion], idx: Sequence[int]) -> GWElem:
    """``<z_i1> ... <z_i2s>`` as a scalar class, multiplying consecutive pairs."""
    out = GWElem.one()
    for p in range(0, len(idx), 2):
        out = out * diag_product_form(zs[idx[p]], zs[idx[p + 1]]).gw()
    return out


def g_sym_component(zs: Sequence[Quaternion], d: int) -> GWElem:
    """Symmetric component of ``g_1^{2d}(h - rH)`` for ``h = <z_1, ..., z_r>`` anti-hermitian."""
    zs = list(zs)
    for n, z in enumerate(zs):
        _pure_invertible(z, f"z_{n + 1}")
    r = len(zs)
    squares = [z.square_scalar for z in zs]
    out = GWElem.zero()
    for s in range(d + 1):
        for I in combinations(range(r), 2 * s):
            rest = [i for i in range(r) if i not in I]
            inner = GWElem.zero()
            for t in range(max(d - 2 * s, 0), d - s + 1):
                c = binom0(s, d - s - t)
                if not c:
                    continue
                for J in combinations(rest, t):
                    inner = inner + pfister(*[squares[j] for j in J]) * c
            if inner.is_zero():
                continue
            out = out + _pair_products(zs, I) * inner
    return out


def g_sym_component_lambda(zs: Sequence[Quaternion], d: int) -> GWElem:
    """The same component through lambda-operations of the residual forms ``<z_j^2>``."""
    zs = list(zs)
    r = len(zs)
    squares = [z.square_scalar for z in zs]
    out = GWElem.zero()
    for s in range(d + 1):
        for I in combinations(range(r), 2 * s):
            psi = DiagForm(tuple(squares[j] for j in range(r) if j not in I))
            lam = lambda_all(psi.gw(), d - s) if psi.dim else [GWElem.one()] + [GWElem.zero()] * (d - s)
            inner = GWElem.zero()
            for t in range(d - s + 1):
                c = (-1) ** t * binom0(r - s - t, d - s - t)
                if c:
                    inner = inner + lam[t] * c
            out = out + _pair_products(zs, I) * inner
    return out


def g_sym_component_phi(zs: Sequence[Quaternion], d: int) -> GWElem:
    """The same component regrouped by ``phi`` forms (valid for ``d >= 2``)."""
    if d < 2:
        raise ValueError("the phi regrouping needs d >= 2")
    zs = list(zs)
    r = len(zs)
    alg = zs[0].alg
    out = pfister(*([-1] * (d - 2) + [alg.a, alg.b])) * comb(r, d)
    for p in range(d, 2 * d + 1):
        for A in combinations(range(r), p):
            sub = [zs[a] for a in A]
            coeff = GWElem.zero()
            for s in range(p // 2 + 1):
                c = binom0(s, d + s - p)
                if c:
                    coeff = coeff + _omega(sub, s) * c
            if not coeff.is_zero():
                out = out + phi_form(sub) * coeff
    return out


def _omega(zs: Sequence[Quaternion], s: int) -> GWElem:
    """``sum_{i_1<...<i_2s} <(-1)^s Trd(z_i1 z_i2) ... Trd(z_i(2s-1) z_i2s)>``."""
    out = GWElem.zero()
    for I in combinations(range(len(zs)), 2 * s):
        v = Fraction((-1) ** s)
        for p in range(0, 2 * s, 2):
            v *= (zs[I[p]] * zs[I[p + 1]]).trd
        if v == 0:
            raise ZeroDivisionError("a pair with zero reduced trace has no omega term")
        out = out + GWElem.of(v)
    return out


def g_sym_expected_e(alg: QuaternionAlgebra, r: int, d: int):
    """``binom(r, d) (-1, ..., -1) u [Q]`` in degree ``d`` (rational backend), for ``d`` in 2..3."""
    from .cohom import RatCoh

    if d == 2:
        return RatCoh.ramification(alg.ramification()) if comb(r, d) % 2 else RatCoh.zero()
    if d == 3:
        bit = int(INF in alg.ramification()) * (comb(r, d) % 2)
        return RatCoh.real(3, bit)
    raise ValueError("only degrees 2 and 3 are decided here")


@dataclass(frozen=True)
class FiltrationReport:
    d: int
    level: int
    component: GWElem
    ok: bool


def ind2_filtration_check(zs: Sequence[Quaternion], d: int) -> FiltrationReport:
    """The scalar part of ``pi_1^d(h - rH)`` lies in ``I^{ceil(d/2)}``."""
    G = [g_sym_component(zs, e) for e in range(d // 2 + 1)]
    comp = GWElem.zero()
    for k, c in f_from_g_coeffs(d):
        if k % 2:
            continue  # odd g's live in the anti-hermitian component
        comp = comp + WITT.rho_pow(d - k) * G[k // 2] * c
    level = -(-d // 2)
    ok = in_In(comp, level) if level <= 3 else in_I_power(comp, level)
    return FiltrationReport(d, level, comp, ok)


# ---------------------------------------------------------------- degree 6: trace form of the Clifford involution


def _check_triple(zs: Sequence[Quaternion]) -> list:
    zs = list(zs)
    if len(zs) != 3:
        raise ValueError("three pure quaternions are needed")
    for n, z in enumerate(zs):
        _pure_invertible(z, f"z_{n + 1}")
    for p, q in combinations(range(3), 2):
        if zs[p].commutes_with(zs[q]):
            raise ValueError("the quaternions must pairwise not commute")
    return zs


def _even_part(zs: Sequence[Quaternion]) -> GWElem:
    s = [z.square_scalar for z in zs]
    return GWElem.of(1, s[0] * s[1], s[0] * s[2], s[1] * s[2])


def t_tau_form(zs: Sequence[Quaternion]) -> GWElem:
    """``<1, z1^2 z2^2, z1^2 z3^2, z2^2 z3^2> + sum_{p<q} <-delta><z_p><z_q>`` (16-dimensional)."""
    zs = _check_triple(zs)
    delta = zs[0].square_scalar * zs[1].square_scalar * zs[2].square_scalar
    out = _even_part(zs)
    for p, q in combinations(range(3), 2):
        out = out + diag_product_form(zs[p], zs[q]).gw().scaled(-delta)
    return out


def one_plus_lambda4(zs: Sequence[Quaternion]) -> GWElem:
    """``1 + lambda^4(h)`` for ``h = <z1, z2, z3>``, expanded through ``lambda^2(<z>) = <-z^2>``."""
    zs = _check_triple(zs)
    out = _even_part(zs)
    for p, q in combinations(range(3), 2):
        i = 3 - p - q
        out = out + diag_product_form(zs[p], zs[q]).gw().scaled(-zs[i].square_scalar)
    return out


def b_g_gram(zs: Sequence[Quaternion], i: int) -> list:
    """Gram matrix of ``b_{g_i}`` on the basis ``(xi, xi_i, xi_i xi_p, xi_i xi_q)``."""
    zs = _check_triple(zs)
    p, q = [n for n in range(3) if n != i]
    s = [z.square_scalar for z in zs]
    delta = s[0] * s[1] * s[2]
    T = (zs[p] * zs[q]).trd
    return [
        [delta * T, -2 * delta, Fraction(0), Fraction(0)],
        [-2 * delta, s[i] * T, Fraction(0), Fraction(0)],
        [Fraction(0), Fraction(0), -s[i] * s[p] * T, 2 * delta],
        [Fraction(0), Fraction(0), 2 * delta, -s[i] * s[q] * T],
    ]


def t_tau_from_blocks(zs: Sequence[Quaternion]) -> GWElem:
    """``T_tau`` assembled from ``b_1`` and the explicit ``b_{g_i}`` Gram matrices."""
    out = _even_part(zs)
    for i in range(3):
        out = out + gram_form(b_g_gram(zs, i)).gw()
    return out


@dataclass(frozen=True)
class TTauReport:
    formula: GWElem
    lambda_side: GWElem
    blocks: GWElem

    @property
    def ok(self) -> bool:
        return gw_equal(self.formula, self.lambda_side) and gw_equal(self.formula, self.blocks)


def t_tau_check(zs: Sequence[Quaternion]) -> TTauReport:
    return TTauReport(t_tau_form(zs), one_plus_lambda4(zs), t_tau_from_blocks(zs))


# ---------------------------------------------------------------- split Morita


def _splitting_element(Q: QuaternionAlgebra, e: Quaternion | None) -> Quaternion:
    """A pure quaternion with square 1."""
    if e is not None:
        _pure_invertible(e, "e")
        s = e.square_scalar
        root = _rational_sqrt(s)
        if root is None:
            raise ValueError("the supplied element does not square to a rational square")
        return e * (1 / root)
    for cand in (Q.i, Q.j, Q.k):
        root = _rational_sqrt(cand.square_scalar)
        if root is not None:
            return cand * (1 / root)
    if not Q.is_split():
        raise NotSplitError(f"{Q} is not split")
    raise ValueError("split algebra without an obvious splitting element; supply one")


def _rational_sqrt(x: Fraction) -> Fraction | None:
    from math import isqrt

    x = Fraction(x)
    if x <= 0:
        return None
    n, d = isqrt(x.numerator), isqrt(x.denominator)
    if n * n == x.numerator and d * d == x.denominator:
        return Fraction(n, d)
    return None


@dataclass(frozen=True)
class SplitModel:
    """An explicit isomorphism ``Q -> M_2(Q)`` sending ``e`` to ``diag(1, -1)``."""

    alg: QuaternionAlgebra
    images: tuple  # 2x2 matrices of 1, i, j, k

    def rho(self, x: Quaternion) -> list:
        out = [[Fraction(0)] * 2 for _ in range(2)]
        for c, M in zip(x.c, self.images):
            for a in range(2):
                for b in range(2):
                    out[a][b] += c * M[a][b]
        return out


def split_model(Q: QuaternionAlgebra, e: Quaternion | None = None) -> SplitModel:
    e = _splitting_element(Q, e)
    f = anticommuting(e)
    bp = f.square_scalar
    ef = e * f
    new_basis = [Q.one, e, f, ef]
    new_images = [
        [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]],
        [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(-1)]],
        [[Fraction(0), bp], [Fraction(1), Fraction(0)]],
        [[Fraction(0), bp], [Fraction(-1), Fraction(0)]],
    ]
    # coordinates of 1, i, j, k in the basis (1, e, f, ef)
    P = linalg.transpose([list(v.c) for v in new_basis])
    Pinv = linalg.inverse(P)
    images = []
    for std in range(4):
        coords = [Pinv[r][std] for r in range(4)]
        M = [[sum(coords[t] * new_images[t][a][b] for t in range(4)) for b in range(2)] for a in range(2)]
        images.append(M)
    model = SplitModel(Q, tuple(images))
    for x in Q.basis():
        for y in Q.basis():
            if linalg.mat_mul(model.rho(x), model.rho(y)) != model.rho(x * y):
                raise ArithmeticError("split model is not multiplicative")
    return model


_J = [[Fraction(0), Fraction(1)], [Fraction(-1), Fraction(0)]]


def _block_diag(blocks: Sequence[list]) -> list:
    n = 2 * len(blocks)
    out = linalg.zeros(n)
    for t, B in enumerate(blocks):
        for a in range(2):
            for b in range(2):
                out[2 * t + a][2 * t + b] = Fraction(B[a][b])
    return out


def _rho_matrix(model: SplitModel, X: list) -> list:
    r = len(X)
    out = linalg.zeros(2 * r)
    for i in range(r):
        for j in range(r):
            M = model.rho(X[i][j])
            for a in range(2):
                for b in range(2):
                    out[2 * i + a][2 * j + b] = M[a][b]
    return out


@dataclass(frozen=True)
class MoritaResult:
    form: DiagForm
    gram: tuple
    verified: bool


def split_morita(zs: Sequence[Quaternion], e: Quaternion | None = None) -> MoritaResult:
    """A quadratic form ``q`` of dimension ``2r`` whose adjoint involution matches ``sigma_h``.

    The conjugation of ``Q`` becomes the adjugate ``J^{-1} X^T J`` on ``M_2``,
    so ``sigma_h`` becomes adjoint to ``S = diag(J rho(z_i))``.  Defined up to similitude.
    """
    zs = list(zs)
    for n, z in enumerate(zs):
        _pure_invertible(z, f"z_{n + 1}")
    Q = zs[0].alg
    model = split_model(Q, e)
    S = _block_diag([linalg.mat_mul(_J, model.rho(z)) for z in zs])
    if linalg.transpose(S) != S:
        raise ArithmeticError("the Morita Gram matrix is not symmetric")
    Sinv = linalg.inverse(S)
    r = len(zs)
    ok = True
    for vec_index in range(4 * r * r):
        unit = [Fraction(int(t == vec_index)) for t in range(4 * r * r)]
        X = _as_matrix(Q, r, unit)
        lhs = _rho_matrix(model, adjoint_involution(zs, X))
        RX = _rho_matrix(model, X)
        rhs = linalg.mat_mul(linalg.mat_mul(Sinv, linalg.transpose(RX)), S)
        if lhs != rhs:
            ok = False
            break
    return MoritaResult(gram_form(S), tuple(tuple(row) for row in S), ok)


def similitude_match(x: GWElem, y: GWElem) -> SquareClass | None:
    """A square class ``c`` with ``x = <c> y`` in W, searched over the classes involved."""
    from .qform import _basis

    basis = _basis(list(x.classes()) + list(y.classes()))
    for mask in range(1 << len(basis)):
        sign = -1 if mask & 1 else 1
        primes = tuple(basis[i] for i in range(1, len(basis)) if mask >> i & 1)
        c = SquareClass(sign, primes)
        if witt_equal(x, y.scaled(c)):
            return c
    return None


def _formal_generator(x: GWElem) -> int:
    """A prime that divides no class of ``x``; it stands for the generator of ``Z/2``."""
    from sympy import nextprime

    top = max((p for a in x.classes() for p in a.primes), default=2)
    return int(nextprime(max(top, 1000)))


def g_sym_split(zs: Sequence[Quaternion], d: int, e: Quaternion | None = None) -> GWElem:
    """Degree-0 part of ``g_1^{2d}(q_(1) - rH)`` in ``W(Q)[Z/2]``, for the Morita image ``q``.

    The generator of ``Z/2`` is modelled by a fresh prime square class, so the
    group ring ``W(Q)[Z/2]`` sits inside ``W(Q)`` and its lambda-operations
    are the usual ones.
    """
    q = split_morita(zs, e).form.gw()
    eps = _formal_generator(q)
    x = q.scaled(eps) - HYPERBOLIC * len(zs)
    value = g_values(WITT, 1, 2 * d, x)[2 * d]
    return GWElem(tuple((a, n) for a, n in value.terms if eps not in a.primes))


def g_sym_split_oracle(zs: Sequence[Quaternion], d: int, e: Quaternion | None = None) -> bool:
    return witt_equal(g_sym_component(zs, d), g_sym_split(zs, d, e))


__all__ = [
    "HAMILTON",
    "MixedWittElem",
    "NotSplitError",
    "Quaternion",
    "QuaternionAlgebra",
    "SplitMixedElem",
    "anticommuting",
    "diag_product",
    "diag_product_form",
    "diag_product_witt",
    "g_sym_component",
    "ind2_filtration_check",
    "norm_form",
    "phi_form",
    "split_mixed_mul",
    "split_morita",
    "trace_form_involution",
    "witt_class",
]
