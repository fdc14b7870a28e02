"""Clifford algebras by structure constants, and the generators of the degree-4 unitary Clifford algebra.

Elements are sparse maps from subsets ``S`` (bitmasks) to coefficients of
the monomials ``e_S``.  The étale and crossed-product side lives in
:mod:`wittforge.etale` and is re-exported here.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from typing import Sequence

from . import linalg
from .fields import QQ, QuadField
from .hermitian import Quaternion, QuaternionAlgebra, anticommuting
from .etale import (  # noqa: F401  (re-exported)
    A3D3Instance,
    A3D3Report,
    EtaleAlgebra,
    EtaleElem,
    EtaleMatrix,
    a3d3_instance,
    a3d3_verify,
    hilbert90_solve,
)


def _popcount(x: int) -> int:
    return bin(x).count("1")


@dataclass(frozen=True)
class CliffordAlgebra:
    field: object
    b: tuple

    @property
    def m(self) -> int:
        return len(self.b)

    @property
    def dim(self) -> int:
        return 1 << self.m

    def _coerce(self, x):
        return self.field.coerce(x)

    def monomial_product(self, S: int, T: int) -> tuple:
        """``e_S e_T = sign * prod_{i in S & T} b_i * e_{S ^ T}``; returns ``(factor, S ^ T)``."""
        swaps = 0
        for j in range(self.m):
            if T >> j & 1:
                swaps += _popcount(S >> (j + 1))
        f = self._coerce(-1 if swaps % 2 else 1)
        common = S & T
        for i in range(self.m):
            if common >> i & 1:
                f = f * self.b[i]
        return f, S ^ T

    def elem(self, coeffs: dict) -> "CliffordElem":
        return CliffordElem(self, tuple(sorted((S, self._coerce(c)) for S, c in coeffs.items() if c)))

    def scalar(self, x) -> "CliffordElem":
        return self.elem({0: x})

    @property
    def one(self) -> "CliffordElem":
        return self.scalar(1)

    def zero(self) -> "CliffordElem":
        return CliffordElem(self, ())

    def gen(self, i: int) -> "CliffordElem":
        return self.elem({1 << i: 1})

    def basis(self) -> list:
        return [self.elem({S: 1}) for S in range(self.dim)]

    def random_elem(self, rng: random.Random, bound: int = 3) -> "CliffordElem":
        def coeff():
            if isinstance(self.field, QuadField):
                return self.field.elem(rng.randint(-bound, bound), rng.randint(-bound, bound))
            return Fraction(rng.randint(-bound, bound))

        return self.elem({S: coeff() for S in range(self.dim)})


def build_clifford(field, *b) -> CliffordAlgebra:
    if len(b) == 1 and isinstance(b[0], (list, tuple)):
        b = tuple(b[0])
    field = QQ if field is None else field
    entries = tuple(field.coerce(x) for x in b)
    for x in entries:
        if not field.is_unit(x):
            raise ValueError(f"diagonal entry {x} is not invertible")
    return CliffordAlgebra(field, entries)


@dataclass(frozen=True)
class CliffordElem:
    alg: CliffordAlgebra
    terms: tuple  # sorted (mask, coefficient) pairs, zero coefficients dropped

    @property
    def coeffs(self) -> dict:
        return dict(self.terms)

    def _lift(self, other) -> "CliffordElem":
        if isinstance(other, CliffordElem):
            return other
        return self.alg.scalar(other)

    def __add__(self, other) -> "CliffordElem":
        c = self.coeffs
        for S, x in self._lift(other).terms:
            c[S] = c[S] + x if S in c else x
        return self.alg.elem(c)

    __radd__ = __add__

    def __neg__(self) -> "CliffordElem":
        return CliffordElem(self.alg, tuple((S, -x) for S, x in self.terms))

    def __sub__(self, other) -> "CliffordElem":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "CliffordElem":
        return self._lift(other) - self

    def __mul__(self, other) -> "CliffordElem":
        if not isinstance(other, CliffordElem):
            s = self.alg._coerce(other)
            return self.alg.elem({S: x * s for S, x in self.terms})
        out: dict = {}
        for S, x in self.terms:
            for T, y in other.terms:
                f, U = self.alg.monomial_product(S, T)
                v = f * x * y
                out[U] = out[U] + v if U in out else v
        return self.alg.elem(out)

    def __rmul__(self, other) -> "CliffordElem":
        return self * other

    def reverse(self) -> "CliffordElem":
        """The canonical involution: reverses products of generators."""
        out = {}
        for S, x in self.terms:
            k = _popcount(S)
            out[S] = -x if (k * (k - 1) // 2) % 2 else x
        return self.alg.elem(out)

    def is_zero(self) -> bool:
        return not self.terms

    def scalar_part(self):
        return self.coeffs.get(0, self.alg._coerce(0))

    def commutes_with(self, other: "CliffordElem") -> bool:
        return self * other == other * self

    def __eq__(self, other) -> bool:
        if not isinstance(other, CliffordElem):
            other = self.alg.scalar(other)
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.terms)


# ---------------------------------------------------------------- generators of (B, tau)


@dataclass(frozen=True)
class D3Generators:
    zs: tuple
    K: QuadField
    pi: Fraction
    cl: CliffordAlgebra
    xi: tuple
    u: dict  # (p, q) with p < q -> generator
    relations: dict  # relation family -> list of (label, ok)

    @property
    def ok(self) -> bool:
        return all(ok for rows in self.relations.values() for _, ok in rows)

    def failures(self) -> list:
        return [(fam, label) for fam, rows in self.relations.items() for label, ok in rows if not ok]

    def u_pair(self, p: int, q: int) -> CliffordElem:
        return self.u[(min(p, q), max(p, q))]


def split_over_subfield(z: Quaternion, w: Quaternion, j: Quaternion, K: QuadField) -> tuple:
    """``z = x + j y`` with ``x, y`` in ``K = Q(w)``."""
    basis = [z.alg.one, w, j, j * w]
    P = linalg.transpose([list(v.c) for v in basis])
    if linalg.det(P) == 0:
        raise ValueError("(1, w, j, jw) is not a basis")
    x0, x1, y0, y1 = linalg.solve(P, list(z.c))
    return K.elem(x0, x1), K.elem(y0, y1)


def coordinates(z: Quaternion, basis: Sequence[Quaternion]) -> list:
    P = linalg.transpose([list(v.c) for v in basis])
    if linalg.det(P) == 0:
        raise ValueError("not a basis of the quaternion algebra")
    return linalg.solve(P, list(z.c))


def _default_subfield(zs: Sequence[Quaternion]) -> Quaternion:
    alg = zs[0].alg
    candidates = [alg.i, alg.j, alg.k, alg.i + alg.j, alg.i + alg.k, alg.j + alg.k]
    candidates += [alg.i + 2 * alg.j + 3 * alg.k, alg.i - alg.j + 2 * alg.k, 2 * alg.i + alg.j - alg.k]
    for w in candidates:
        if w.nrd == 0:
            continue
        c = w.square_scalar
        j = anticommuting(w)
        K = QuadField(c)
        try:
            ys = [split_over_subfield(z, w, j, K)[1] for z in zs]
        except ValueError:
            continue
        if all(K.is_unit(y) for y in ys):
            return w
    raise ValueError("no quadratic subfield avoids all the z_i among the candidates")


def d3_generators(zs: Sequence[Quaternion], w: Quaternion | None = None, j: Quaternion | None = None) -> D3Generators:
    """The generators ``xi_i`` and ``u_{p,q}`` of the Clifford algebra of ``h = <z_1, ..., z_r>``.

    Works in ``Cl(V, b)`` over ``K = Q(w)``, where ``V`` has the orthogonal
    basis ``e_i, f_i = e_i z_i`` with ``b(e_i, e_i) = y_i`` and
    ``b(f_i, f_i) = -z_i^2 y_i`` for ``z_i = x_i + j y_i``.
    """
    zs = list(zs)
    r = len(zs)
    if r < 2:
        raise ValueError("at least two quaternions are needed")
    alg = zs[0].alg
    for n, z in enumerate(zs):
        if not z.is_pure() or z.nrd == 0:
            raise ValueError(f"z_{n + 1} must be pure and invertible")
    for p, q in combinations(range(r), 2):
        try:
            coordinates(alg.one, [alg.one, zs[p], zs[q], zs[p] * zs[q]])
        except ValueError:
            raise ValueError(f"z_{p + 1} and z_{q + 1} are colinear") from None
    if w is None:
        w = _default_subfield(zs)
    if not w.is_pure() or w.nrd == 0:
        raise ValueError("w must be pure and invertible")
    if j is None:
        j = anticommuting(w)
    if not (j.is_pure() and j * w == -(w * j)):
        raise ValueError("j must be pure and anticommute with w")
    K = QuadField(w.square_scalar)
    pi = j.square_scalar
    xs, ys = [], []
    for n, z in enumerate(zs):
        x, y = split_over_subfield(z, w, j, K)
        if not K.is_unit(y):
            raise ValueError(f"z_{n + 1} lies in (or meets) the subfield K; choose another w")
        xs.append(x)
        ys.append(y)
    sq = [z.square_scalar for z in zs]
    b = []
    for n in range(r):
        b += [ys[n], -sq[n] * ys[n]]
    cl = build_clifford(K, b)
    e = [cl.gen(2 * n) for n in range(r)]
    f = [cl.gen(2 * n + 1) for n in range(r)]
    xi = tuple(e[n] * f[n] * (-1 / ys[n]) for n in range(r))
    u = {}
    for p, q in combinations(range(r), 2):
        inner = e[p] * e[q] * (xs[q] * ys[p] - xs[p] * ys[q]) - e[p] * f[q] * ys[p] - e[q] * f[p] * ys[q]
        u[(p, q)] = inner * (1 / (ys[p] * ys[q]))
    gens = D3Generators(tuple(zs), K, pi, cl, xi, u, {})
    return D3Generators(tuple(zs), K, pi, cl, xi, u, _relations(gens))


def _relations(g: D3Generators) -> dict:
    zs, xi = g.zs, g.xi
    r = len(zs)
    rel: dict = {"squares": [], "a": [], "b": [], "c": [], "d": [], "e": [], "center": []}
    for n in range(r):
        rel["squares"].append((f"xi_{n + 1}^2 = z_{n + 1}^2", xi[n] * xi[n] == zs[n].square_scalar))
    for m, n in combinations(range(r), 2):
        rel["squares"].append((f"xi_{m + 1} xi_{n + 1} commute", xi[m].commutes_with(xi[n])))
    for (p, q), u in g.u.items():
        name = f"u_{p + 1}{q + 1}"
        for n in range(r):
            sign = -1 if n in (p, q) else 1
            rel["a"].append((f"{name} xi_{n + 1} = {sign:+d} xi_{n + 1} {name}", u * xi[n] == xi[n] * u * sign))
        rel["b"].append((f"tau({name}) = -{name}", u.reverse() == -u))
        rel["d"].append(
            (f"{name}^2 = Trd(z_{p + 1} z_{q + 1}) - 2 xi_{p + 1} xi_{q + 1}", u * u == (zs[p] * zs[q]).trd - xi[p] * xi[q] * 2)
        )
    for (p, q), (s, t) in combinations(g.u, 2):
        if not {p, q} & {s, t}:
            rel["c"].append((f"u_{p + 1}{q + 1} u_{s + 1}{t + 1} commute", g.u[(p, q)].commutes_with(g.u[(s, t)])))
    for i, p, q in permutations(range(r), 3):
        rel["e"].append((f"u_{i + 1}{p + 1} u_{i + 1}{q + 1}", relation_e(g, i, p, q)))
    prod = g.cl.one
    for x in xi:
        prod = prod * x
    square = Fraction(1)
    for z in zs:
        square *= z.square_scalar
    rel["center"].append(("xi^2 = prod z_i^2", prod * prod == square))
    for n in range(r):
        rel["center"].append((f"xi commutes with xi_{n + 1}", prod.commutes_with(xi[n])))
    for (p, q), u in g.u.items():
        rel["center"].append((f"xi commutes with u_{p + 1}{q + 1}", prod.commutes_with(u)))
    return rel


def relation_e_coefficients(zs: Sequence[Quaternion], i: int, p: int, q: int) -> list:
    """``(l_0, l_p, l_q, l_pq)`` with ``z_i = l_0 + l_p z_p + l_q z_q + l_pq z_p z_q``."""
    alg = zs[0].alg
    return coordinates(zs[i], [alg.one, zs[p], zs[q], zs[p] * zs[q]])


def relation_e(g: D3Generators, i: int, p: int, q: int) -> bool:
    """``u_{i,p} u_{i,q} = (l_0 - xi_i + l_p xi_p - l_q xi_q - l_pq xi_p xi_q) u_{p,q}``."""
    l0, lp, lq, lpq = relation_e_coefficients(g.zs, i, p, q)
    xi = g.xi
    coeff = xi[p] * lp - xi[i] - xi[q] * lq - xi[p] * xi[q] * lpq + l0
    return g.u_pair(i, p) * g.u_pair(i, q) == coeff * g.u_pair(p, q)


def associativity_check(alg: CliffordAlgebra, trials: int = 3, seed: int = 0) -> bool:
    rng = random.Random(seed)
    for _ in range(trials):
        x, y, z = (alg.random_elem(rng) for _ in range(3))
        if (x * y) * z != x * (y * z):
            return False
        if (x * y).reverse() != y.reverse() * x.reverse():
            return False
    return True


__all__ = [
    "A3D3Instance",
    "A3D3Report",
    "CliffordAlgebra",
    "CliffordElem",
    "D3Generators",
    "EtaleAlgebra",
    "EtaleElem",
    "EtaleMatrix",
    "QuaternionAlgebra",
    "a3d3_instance",
    "a3d3_verify",
    "associativity_check",
    "build_clifford",
    "d3_generators",
    "hilbert90_solve",
    "relation_e",
]
