"""The f and g invariant families of powers of the fundamental ideal.

Values live in a *codomain*: the Witt ring (``{-1} = <<-1>>``, ``delta = 1``)
or mod-2 cohomology (``{-1} = rho``, ``delta = 0``).  Invariants are evaluated
pointwise on concrete elements.  Two evaluation routes exist:

* the Greek route, ``f_n^d(q) = pi_n^d(q)`` in GW followed by ``e_{nd}`` in
  the cohomological codomain (rational inputs only);
* the Pfister-sum route, ``f_n^d(sum eps_i phi_i) = [t^d] prod F_i(t)``,
  which also works in the symbolic backend.

Every closed formula below is checked against these evaluations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from math import comb, factorial
from typing import Any, Sequence

from . import greek
from .cohom import (
    RATIONAL,
    CohBackend,
    MembershipError,
    PfisterSum,
    SymSquare,
    e_n,
    e_n_pfister_sum,
    sw,
    sw_upto,
)
from .qform import (
    HYPERBOLIC,
    MINUS_ONE,
    DiagForm,
    GWElem,
    SquareClass,
    as_gw,
    CharVector,
    in_I_power,
    in_In,
    lambda_all,
    lambda_chars,
    one_dim,
    pfister,
    sq,
    witt_equal,
)
from .series import pi_letter

# ---------------------------------------------------------------- codomains


class WittCodomain:
    name = "witt"
    delta_bit = 1

    def zero(self):
        return GWElem.zero()

    def one(self):
        return GWElem.one()

    def scale(self, c: int, x):
        return x * c

    def equal(self, x, y) -> bool:
        return witt_equal(x, y)

    def is_zero(self, x) -> bool:
        return witt_equal(x, 0)

    def minus_one(self):
        return pfister(-1)

    def delta(self):
        return GWElem.one()

    def square(self, a):
        """``{a} = <<a>>``."""
        return pfister(a)

    def symbol(self, entries: Sequence):
        return pfister(*entries)

    def rho_pow(self, k: int):
        return _witt_rho_pow(k)


class WittCharCodomain(WittCodomain):
    """The Witt codomain with values held as character vectors over a fixed basis.

    Same mathematics as :class:`WittCodomain`; used when many values over
    one square-class group are combined before being compared.
    """

    def __init__(self, basis: Sequence):
        self.basis = tuple(basis)
        self._one = CharVector.constant(self.basis, 1)
        self._rho = CharVector.from_gw(pfister(-1), self.basis)
        self._rho_pows = [self._one]

    @classmethod
    def for_entries(cls, entries: Sequence) -> "WittCharCodomain":
        primes = sorted({p for a in entries for p in sq(a).primes})
        return cls([-1] + primes)

    def lift(self, x) -> CharVector:
        return x if isinstance(x, CharVector) else CharVector.from_gw(x, self.basis)

    def zero(self):
        return self._one * 0

    def one(self):
        return self._one

    def equal(self, x, y) -> bool:
        return witt_equal((self.lift(x) - self.lift(y)).to_gw(), 0)

    def is_zero(self, x) -> bool:
        return witt_equal(self.lift(x).to_gw(), 0)

    def minus_one(self):
        return self._rho

    def delta(self):
        return self._one

    def square(self, a):
        return CharVector.from_gw(pfister(a), self.basis)

    def symbol(self, entries: Sequence):
        return CharVector.from_gw(pfister(*entries), self.basis)

    def rho_pow(self, k: int):
        if k < 0:
            raise ValueError("negative power of {-1}")
        while len(self._rho_pows) <= k:
            self._rho_pows.append(self._rho_pows[-1] * self._rho)
        return self._rho_pows[k]


@lru_cache(maxsize=None)
def _witt_rho_pow(k: int) -> GWElem:
    if k < 0:
        raise ValueError("negative power of {-1}")
    # <<-1>>^k = 2^(k-1) <<-1>> in the group ring, for k >= 1
    return GWElem.one() if k == 0 else pfister(-1) * 2 ** (k - 1)


class CohCodomain:
    name = "coh"
    delta_bit = 0

    def __init__(self, backend: CohBackend = RATIONAL):
        self.backend = backend

    def zero(self):
        return self.backend.zero()

    def one(self):
        return self.backend.one()

    def scale(self, c: int, x):
        return x if c % 2 else self.backend.zero()

    def equal(self, x, y) -> bool:
        return (x - y).is_zero()

    def is_zero(self, x) -> bool:
        return x.is_zero()

    def minus_one(self):
        return self.backend.minus_one()

    def delta(self):
        return self.backend.zero()

    def square(self, a):
        return self.backend.square(a)

    def symbol(self, entries: Sequence):
        return self.backend.symbol(entries)

    def rho_pow(self, k: int):
        if k < 0:
            raise ValueError("negative power of {-1}")
        out = self.backend.one()
        m1 = self.backend.minus_one()
        for _ in range(k):
            out = out * m1
        return out

    @property
    def symbolic(self) -> bool:
        return self.backend.kind == "symbolic"


WITT = WittCodomain()
COH = CohCodomain(RATIONAL)


def symbolic_coh(rho_cap: int | None = None) -> CohCodomain:
    return CohCodomain(CohBackend("symbolic", rho_cap))


# ---------------------------------------------------------------- coefficient tables


@dataclass(frozen=True)
class RhoMonomial:
    """``coeff * {-1}^power`` with an integer coefficient."""

    coeff: int
    power: int = 0

    def __str__(self) -> str:
        if self.power == 0:
            return str(self.coeff)
        base = "{-1}" if self.power == 1 else "{-1}^" + str(self.power)
        return base if self.coeff == 1 else f"{self.coeff}*{base}"

    def evaluate(self, cod):
        return cod.scale(self.coeff, cod.rho_pow(self.power))


def binom0(n: int, k: int) -> int:
    """Binomial coefficient, zero outside ``0 <= k <= n``."""
    if k < 0 or n < 0 or k > n:
        return 0
    return comb(n, k)


def gbinom(n: int, k: int) -> int:
    """Generalized binomial ``n (n-1) ... (n-k+1) / k!``, any integer ``n``, zero for ``k < 0``."""
    if k < 0:
        return 0
    if n >= 0:
        return comb(n, k) if k <= n else 0
    return (-1) ** k * comb(k - n - 1, k)


def multinomial(n: int, parts: Sequence[int]) -> int:
    if any(p < 0 for p in parts) or sum(parts) != n:
        return 0
    out = factorial(n)
    for p in parts:
        out //= factorial(p)
    return out


def multinomial_parity(s: int, t: int, m: int) -> int:
    return multinomial(m, (s + t - m, m - s, m - t)) % 2


def product_coeffs(s: int, t: int, n: int, char2: bool = False) -> list:
    """Coefficients of ``f_n^s * f_n^t`` in the ``f_n^d`` basis, as ``(d, RhoMonomial)`` pairs.

    With ``char2`` the coefficients are reduced mod 2, leaving the single
    term ``d = s | t`` with coefficient ``{-1}^(n (s & t))``.
    """
    out = []
    for d in range(max(s, t), s + t + 1):
        c = multinomial(d, (s + t - d, d - s, d - t))
        if char2:
            c %= 2
        if c:
            out.append((d, RhoMonomial(c, n * (s + t - d))))
    return out


def restrict_coeffs(n: int, d: int, delta: int) -> list:
    """``f_n^d`` restricted to the next power of the ideal, in the ``f_{n+1}^k`` basis."""
    if d < 1:
        raise ValueError("d must be at least 1")
    if delta not in (0, 1):
        raise ValueError("delta must be 0 or 1")
    out = []
    for k in range((d + 1) // 2, d + 1):
        c = comb(k, d - k)
        if 2 * k - d > 0 and delta == 0:
            continue
        if c:
            out.append((k, RhoMonomial(c, (d - k) * (n - 1))))
    return out


def _binom_fg(n: int, k: int) -> int:
    # the f-from-g table needs binom(-1, -1) = 1 on its diagonal (d = k = 1)
    if n == -1 and k == -1:
        return 1
    return binom0(n, k)


def g_from_f_coeffs(d: int) -> list:
    """``g_n^d = sum c * {-1}^(n (d-k)) f_n^k``; returns ``(k, c)`` pairs."""
    if d == 0:
        return [(0, 1)]
    h = d // 2
    return [(k, binom0((d - 1) // 2, k - h - 1)) for k in range(h + 1, d + 1) if binom0((d - 1) // 2, k - h - 1)]


def f_from_g_coeffs(d: int) -> list:
    """``f_n^d = sum c * {-1}^(n (d-k)) g_n^k``; returns ``(k, c)`` pairs."""
    if d == 0:
        return [(0, 1)]
    out = []
    for k in range(1, d + 1):
        c = (-1) ** (d - k) * _binom_fg(d - (k + 1) // 2 - 1, k // 2 - 1)
        if c:
            out.append((k, c))
    return out


# ---------------------------------------------------------------- polynomials in rho

RhoPoly = dict  # exponent -> integer coefficient


def _poly_mul(a: RhoPoly, b: RhoPoly) -> RhoPoly:
    out: dict = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] = out.get(i + j, 0) + x * y
    return {e: c for e, c in out.items() if c}


def _poly_add(a: RhoPoly, b: RhoPoly) -> RhoPoly:
    out = dict(a)
    for e, c in b.items():
        out[e] = out.get(e, 0) + c
    return {e: c for e, c in out.items() if c}


def basis_change_matrix(kind: str, size: int, n: int) -> list:
    """Lower-triangular matrix over Z[rho]; ``kind`` is ``g_from_f`` or ``f_from_g``.

    Row ``d`` holds the coefficients of the ``d``-th target invariant.
    """
    table = g_from_f_coeffs if kind == "g_from_f" else f_from_g_coeffs
    M = [[{} for _ in range(size)] for _ in range(size)]
    for d in range(size):
        for k, c in table(d):
            M[d][k] = {n * (d - k): c}
    return M


def rho_matrix_product(A: list, B: list) -> list:
    size = len(A)
    out = [[{} for _ in range(size)] for _ in range(size)]
    for i in range(size):
        for j in range(size):
            acc: dict = {}
            for k in range(size):
                if A[i][k] and B[k][j]:
                    acc = _poly_add(acc, _poly_mul(A[i][k], B[k][j]))
            out[i][j] = acc
    return out


def is_unitriangular(M: list) -> bool:
    size = len(M)
    for i in range(size):
        if M[i][i] != {0: 1}:
            return False
        if any(M[i][j] for j in range(i + 1, size)):
            return False
    return True


def is_identity(M: list) -> bool:
    return all(M[i][j] == ({0: 1} if i == j else {}) for i in range(len(M)) for j in range(len(M)))


# ---------------------------------------------------------------- Pfister-sum helpers


def lower_level(x: PfisterSum) -> PfisterSum:
    """Rewrite a sum of (m+1)-fold Pfister forms as a sum of m-fold ones (m >= 1).

    ``<<a_1..a_m, b>> = <<a_1..a_m>> - <<b a_1, a_2..a_m>> + <<b, a_2..a_m>>``.
    """
    m = x.level - 1
    if m < 1:
        raise ValueError("cannot lower below level 1")
    out = []
    for e, es in x.terms:
        a, b = es[:m], es[m]
        out.append((e, a))
        out.append((-e, (b * a[0],) + a[1:]))
        out.append((e, (b,) + a[1:]))
    return PfisterSum(m, tuple(out))


def lower_to(x: PfisterSum, level: int) -> PfisterSum:
    while x.level > level:
        x = lower_level(x)
    if x.level != level:
        raise ValueError("cannot raise the level of a Pfister sum")
    return x


def pfister_sum_of_diagonal(q) -> PfisterSum:
    return PfisterSum.from_diagonal(q)


# ---------------------------------------------------------------- evaluation


@dataclass(frozen=True)
class InvariantSpec:
    family: str
    n: int
    d: int
    codomain: Any = field(default=WITT, compare=False)

    def __post_init__(self):
        if self.family not in ("f", "g"):
            raise ValueError("family must be 'f' or 'g'")
        if self.n < 1 or self.d < 0:
            raise ValueError("need n >= 1 and d >= 0")


def _as_lift(q, n: int) -> GWElem:
    """Dimension-0 representative in GW of an element of I^n, with the membership check."""
    if isinstance(q, PfisterSum):
        if q.level < n:
            raise MembershipError(f"a sum of {q.level}-fold Pfister forms is not known to lie in I^{n}")
        return q.to_gw()
    if isinstance(q, (list, tuple)):
        q = DiagForm(tuple(q))
    x = as_gw(q)
    if x.dim % 2:
        raise MembershipError("odd-dimensional forms are not in I")
    x = x - HYPERBOLIC * (x.dim // 2)
    if n <= 3:
        if not in_In(x, n):
            raise MembershipError(f"element is not in I^{n}")
    elif not in_I_power(x, n):
        raise MembershipError(f"element is not in I^{n}")
    return x


def f_values_greek(cod, n: int, D: int, q) -> list:
    """``[f_n^0(q), ..., f_n^D(q)]`` through ``pi_n`` in GW(Q)."""
    x = _as_lift(q, n)
    if isinstance(cod, WittCharCodomain):
        return greek.alpha_ops(greek.CHARS, pi_letter(n, max(D, 1)), D, cod.lift(x))
    pis = greek.alpha_ops(greek.GW, pi_letter(n, max(D, 1)), D, x)
    if isinstance(cod, WittCodomain):
        return pis
    if cod.symbolic:
        raise TypeError("the symbolic backend evaluates through Pfister sums only")
    return [cod.one()] + [e_n(pis[d], n * d) for d in range(1, D + 1)]


def f_values_pfister(cod, q: PfisterSum, D: int, n: int | None = None) -> list:
    """``[f_n^0, ..., f_n^D]`` on a signed Pfister sum, via ``prod F_i(t)``."""
    if n is None:
        n = q.level
    q = lower_to(q, n)
    coeffs = [cod.one()] + [cod.zero()] * D
    for eps, es in q.terms:
        x = cod.symbol(es)
        if eps == 1:
            factor = [cod.one(), x] + [cod.zero()] * (D - 1)
        else:
            factor = [cod.one()] + [
                cod.scale((-1) ** k, cod.rho_pow(n * (k - 1)) * x) for k in range(1, D + 1)
            ]
        new = [cod.zero()] * (D + 1)
        for i in range(D + 1):
            for j in range(D + 1 - i):
                new[i + j] = new[i + j] + coeffs[i] * factor[j]
        coeffs = new
    return coeffs[: D + 1]


def f_values(cod, n: int, D: int, q) -> list:
    if isinstance(cod, CohCodomain) and cod.symbolic:
        if not isinstance(q, PfisterSum):
            q = PfisterSum.from_diagonal(q)
        return f_values_pfister(cod, q, D, n)
    return f_values_greek(cod, n, D, q)


def g_from_f(cod, n: int, fvals: Sequence) -> list:
    out = []
    for d in range(len(fvals)):
        acc = cod.zero()
        for k, c in g_from_f_coeffs(d):
            acc = acc + cod.scale(c, cod.rho_pow(n * (d - k)) * fvals[k])
        out.append(acc)
    return out


def f_from_g(cod, n: int, gvals: Sequence) -> list:
    out = []
    for d in range(len(gvals)):
        acc = cod.zero()
        for k, c in f_from_g_coeffs(d):
            acc = acc + cod.scale(c, cod.rho_pow(n * (d - k)) * gvals[k])
        out.append(acc)
    return out


def g_values(cod, n: int, D: int, q) -> list:
    return g_from_f(cod, n, f_values(cod, n, D, q))


def eval_invariant(spec: InvariantSpec, q):
    vals = f_values(spec.codomain, spec.n, spec.d, q)
    if spec.family == "g":
        vals = g_from_f(spec.codomain, spec.n, vals)
    return vals[spec.d]


def apply_terms(cod, terms: Sequence, values: Sequence):
    out = cod.zero()
    for k, m in terms:
        out = out + m.evaluate(cod) * values[k]
    return out


# ---------------------------------------------------------------- fixed dimension


def P_d(q, d: int) -> GWElem:
    """``P^d(q) = sum_i (-1)^i binom(dim - i, d - i) lambda^i(q)``."""
    q = DiagForm(tuple(q.entries)) if hasattr(q, "entries") else DiagForm(tuple(q))
    return _p_from_lambda(q.dim, lambda_all(q.gw(), d), d)


def _p_from_lambda(dim: int, lam: Sequence, d: int):
    out = lam[0] * 0
    for i in range(d + 1):
        c = (-1) ** i * binom0(dim - i, d - i)
        if c:
            out = out + lam[i] * c
    return out


def P_d_pfister(q, d: int) -> GWElem:
    """``sum_{i_1 < ... < i_d} <<a_i1, ..., a_id>>``, the oracle for :func:`P_d`."""
    entries = q.entries if hasattr(q, "entries") else tuple(q)
    out = GWElem.zero()
    for sub in combinations(entries, d):
        out = out + pfister(*sub)
    return out


def h_values(cod, q, D: int) -> list:
    entries = list(q.entries) if hasattr(q, "entries") else list(q)
    if isinstance(cod, WittCharCodomain):
        lam = lambda_chars(cod.lift(DiagForm(tuple(entries)).gw()), D)
        return [_p_from_lambda(len(entries), lam, i) for i in range(D + 1)]
    if isinstance(cod, WittCodomain):
        lam = lambda_all(DiagForm(tuple(entries)).gw(), D)
        return [_p_from_lambda(len(entries), lam, i) for i in range(D + 1)]
    return sw_upto(entries, D, cod.backend)


def f1_fixed_dim(cod, q, d: int, h: Sequence | None = None):
    entries = list(q.entries) if hasattr(q, "entries") else list(q)
    if len(entries) % 2:
        raise ValueError("fixed-dimension formulas need even dimension")
    r = len(entries) // 2
    h = h if h is not None else h_values(cod, entries, d)
    out = cod.zero()
    for i in range(d + 1):
        c = (-1) ** i * gbinom(r - i, d - i)
        if c:
            out = out + cod.scale(c, cod.rho_pow(d - i) * h[i])
    return out


def g1_fixed_dim(cod, q, d: int, h: Sequence | None = None):
    entries = list(q.entries) if hasattr(q, "entries") else list(q)
    if len(entries) % 2:
        raise ValueError("fixed-dimension formulas need even dimension")
    r = len(entries) // 2
    h = h if h is not None else h_values(cod, entries, d)
    out = cod.zero()
    for i in range(d + 1):
        c = (-1) ** i * gbinom(r - i - 1 + (d + 1) // 2, d - i)
        if c:
            out = out + cod.scale(c, cod.rho_pow(d - i) * h[i])
    return out


def g1_from_lambda(q, d: int, lam: Sequence | None = None) -> GWElem:
    """``g_1^d`` of an even-dimensional form written with the lambda-operations of the form itself."""
    entries = list(q.entries) if hasattr(q, "entries") else list(q)
    r = len(entries) // 2
    if lam is None:
        lam = lambda_all(DiagForm(tuple(entries)).gw(), d)
    out = lam[0] * 0
    if d == 0:
        return lam[0]
    if d % 2 == 0:
        m = d // 2
        for i in range(d + 1):
            ci = (i + 1) // 2
            c = (-1) ** i * gbinom(r - ci, m - ci)
            if c:
                out = out + lam[i] * c
    else:
        m = d // 2
        for i in range(m + 1):
            c = gbinom(r - 1 - i, m - i)
            if c:
                out = out + lam[2 * i + 1] * c
    return out


def fixed_dim_eval(q, d: int, family: str, cod=WITT):
    if family == "f":
        return f1_fixed_dim(cod, q, d)
    if family == "g":
        return g1_fixed_dim(cod, q, d)
    raise ValueError("family must be 'f' or 'g'")


def hat_lambda_all(q, D: int) -> list:
    """``lambda^d(q - r H)`` for a form of dimension ``2r``."""
    x = as_gw(q)
    return lambda_all(x - HYPERBOLIC * (x.dim // 2), D)


def lambda_from_hat(r: int, hat: Sequence, d: int) -> GWElem:
    out = GWElem.zero()
    for i in range(d % 2, d + 1, 2):
        j = (d - i) // 2
        c = binom0(r, j) * (-1) ** j
        if c:
            out = out + hat[i] * c
    return out


def hat_from_lambda(r: int, lam: Sequence, d: int) -> GWElem:
    out = GWElem.zero()
    for i in range(d % 2, d + 1, 2):
        j = (d - i) // 2
        c = comb(r + j - 1, j) if r + j - 1 >= 0 else int(j == 0)
        if c:
            out = out + lam[i] * c
    return out


# ---------------------------------------------------------------- identity report


@dataclass(frozen=True)
class IdentityReport:
    checks: tuple = ()

    @property
    def ok(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    @property
    def first_failure(self):
        for name, ok, operands in self.checks:
            if not ok:
                return {"identity": name, "operands": operands}
        return None


def _lift_sum(x, y):
    return x + y


def pointwise_identities(
    cod, q: PfisterSum, phi: Sequence, lam, n: int, d: int, psi: Sequence | None = None
) -> IdentityReport:
    """Evaluate both sides of the addition, shift, similitude and Vial identities.

    ``q`` is a sum of n-fold Pfister forms, ``phi`` the entries of an
    n-fold Pfister form, ``lam`` a square class, ``psi`` (optional) the
    entries of an (n+1)-fold Pfister form.
    """
    phi = tuple(phi)
    checks = []
    operands = {"n": n, "d": d}
    phi_sum = PfisterSum(n, ((1, phi),))
    D = d + 1
    fq = f_values(cod, n, D, q)
    f_phi = cod.symbol(phi)

    # addition law f(q + q') = sum f^k(q) f^{d-k}(q')
    qq = q + phi_sum.scaled(lam)
    fqq = f_values(cod, n, D, q + qq)
    fq2 = f_values(cod, n, D, qq)
    rhs = cod.zero()
    for k in range(d + 1):
        rhs = rhs + fq[k] * fq2[d - k]
    checks.append(("addition", cod.equal(fqq[d], rhs), operands))

    # shift by a Pfister form
    fplus = f_values(cod, n, D, q + phi_sum)
    rhs = fq[d] + f_phi * fq[d - 1] if d >= 1 else fq[0]
    checks.append(("shift_plus", cod.equal(fplus[d], rhs), operands))

    # subtraction of a Pfister form
    fminus = f_values(cod, n, D, q - phi_sum)
    acc = cod.zero()
    for k in range(d):
        acc = acc + cod.scale((-1) ** (d - k - 1), cod.rho_pow(n * (d - k - 1)) * fq[k])
    rhs = fq[d] - f_phi * acc
    checks.append(("shift_minus", cod.equal(fminus[d], rhs), operands))

    # similitude on a single Pfister form
    if d >= 2:
        fs = f_values(cod, n, d, phi_sum.scaled(lam))
        rhs = cod.scale((-1) ** d, cod.rho_pow(n * (d - 1) - 1) * cod.square(lam) * f_phi)
        checks.append(("pfister_similitude", cod.equal(fs[d], rhs), operands))

    # g recursion and similitude
    gq = g_from_f(cod, n, fq)
    gplus = g_from_f(cod, n, fplus)
    gminus = g_from_f(cod, n, fminus)
    if d >= 1:
        prev = d - 1
        if prev % 2 == 0:
            checks.append(("g_minus", cod.equal(gminus[d], gq[d] - f_phi * gq[prev]), operands))
            plus_rhs = gq[prev] + (cod.rho_pow(n) * gq[prev - 1] if prev >= 1 else cod.zero())
            checks.append(("g_plus", cod.equal(gplus[d], gq[d] + f_phi * plus_rhs), operands))
        else:
            checks.append(("g_plus", cod.equal(gplus[d], gq[d] + f_phi * gq[prev]), operands))
            minus_rhs = gq[prev] - cod.rho_pow(n) * gq[prev - 1]
            checks.append(("g_minus", cod.equal(gminus[d], gq[d] - f_phi * minus_rhs), operands))
    gs = g_from_f(cod, n, f_values(cod, n, D, q.scaled(lam)))
    if d % 2:
        tilde = cod.scale(-1, cod.delta() * gq[d])
    else:
        tilde = cod.rho_pow(n - 1) * gq[d - 1] if d >= 1 else cod.zero()
    checks.append(("g_similitude", cod.equal(gs[d], gq[d] + cod.square(lam) * tilde), operands))

    # Vial-style addition of an (n+1)-fold Pfister form
    if psi is not None and isinstance(cod, CohCodomain):
        psi = tuple(psi)
        shifted = q + lower_level(PfisterSum(n + 1, ((1, psi),)))
        fpsi = f_values(cod, n, D, shifted)
        extra = cod.rho_pow(n - 1) * cod.symbol(psi) * fq[d - 2] if d >= 2 else cod.zero()
        checks.append(("vial_addition", cod.equal(fpsi[d], fq[d] + extra), operands))
    return IdentityReport(tuple(checks))


def check_product_formula(cod, n: int, q, s_max: int, t_max: int) -> bool:
    D = s_max + t_max
    fv = f_values(cod, n, D, q)
    char2 = isinstance(cod, CohCodomain)
    for s in range(s_max + 1):
        for t in range(t_max + 1):
            lhs = fv[s] * fv[t]
            if not cod.equal(lhs, apply_terms(cod, product_coeffs(s, t, n), fv)):
                return False
            if char2 and not cod.equal(lhs, apply_terms(cod, product_coeffs(s, t, n, True), fv)):
                return False
    return True


def check_restriction(cod, n: int, q, d_max: int) -> bool:
    """``q`` must lie in ``I^{n+1}``."""
    fn = f_values(cod, n, d_max, q)
    fn1 = f_values(cod, n + 1, d_max, q)
    for d in range(1, d_max + 1):
        if not cod.equal(fn[d], apply_terms(cod, restrict_coeffs(n, d, cod.delta_bit), fn1)):
            return False
    return True


def check_g_bound(cod, n: int, q: PfisterSum, d_max: int) -> bool:
    s = sum(1 for e, _ in q.terms if e == 1)
    t = len(q.terms) - s
    g = g_values(cod, n, d_max, q)
    return all(cod.is_zero(g[d]) for d in range(2 * max(s, t) + 1, d_max + 1))


# ---------------------------------------------------------------- discriminant expansion


def disc_expansion(q, D: int):
    """Partial sum ``sum_{d <= D} (-1)^d f_1^d(q)`` and whether the tail vanished before ``D``.

    Returns ``(partial_sum, stable)``; ``stable`` means ``f_1^d(q) = 0`` in W
    for the last two computed degrees, so the sum has stopped moving.
    """
    fv = f_values(WITT, 1, D, q)
    acc = GWElem.zero()
    for d in range(D + 1):
        acc = acc + fv[d] * (-1) ** d
    stable = D >= 2 and witt_equal(fv[D], 0) and witt_equal(fv[D - 1], 0)
    return acc, stable


def disc_check(q, D: int = 12) -> tuple:
    """Compare ``<disc q>`` with ``sum_d (-1)^d f_1^d(q)`` in W.

    Returns ``(agrees, stable)``.  When the tail has not visibly vanished the
    comparison is not meaningful and ``agrees`` is ``None``.
    """
    entries = list(q.entries) if hasattr(q, "entries") else list(q)
    partial, stable = disc_expansion(entries, D)
    if not stable:
        return None, False
    r = len(entries) // 2
    det = SquareClass(1)
    for a in entries:
        det = det * sq(a)
    disc = det * MINUS_ONE if r % 2 else det
    return witt_equal(partial, one_dim(disc)), True


# ---------------------------------------------------------------- Delta^{3,1}


def delta_31(c, q, d: int, backend: CohBackend = RATIONAL):
    """``{c} u f_2^d(q)`` for ``q`` in I^2."""
    cod = CohCodomain(backend)
    return cod.square(c) * f_values(cod, 2, d, q)[d]


def delta_31_consistent(a, q, b, q2, d: int) -> bool:
    """Well-definedness: if ``<<a>> q = <<b>> q2`` in W then ``{a} f_2^d(q) = {b} f_2^d(q2)``."""
    lhs_form = pfister(a) * _as_lift(q, 2)
    rhs_form = pfister(b) * _as_lift(q2, 2)
    if not witt_equal(lhs_form, rhs_form):
        raise ValueError("the two factorizations are not Witt-equal")
    if not (delta_31(a, q, d) - delta_31(b, q2, d)).is_zero():
        raise greek.PropertyViolation("{a} f(q) and {b} f(q') differ")
    return True


# ---------------------------------------------------------------- a_3 and a_4


@dataclass(frozen=True)
class A3A4:
    a3: Any
    a4: Any
    q_tau: Any


def _split_six(entries):
    if len(entries) != 6:
        raise ValueError("a3/a4 are defined for 6-dimensional forms")
    return entries[:3], entries[3:]


def _neg(a):
    return -a if isinstance(a, SymSquare) else MINUS_ONE * a


def q_tau_pfister_sum(entries) -> tuple:
    """``q_tau`` as ``(level-3 part, level-4 part)``.

    ``- <<-delta>> (<<-a1b1, -a1c1>> + <<-a2b2, -a2c2>>) + <<-a1b1, -a1c1, -a2b2, -a2c2>>``
    with ``-delta`` the determinant.
    """
    (a1, b1, c1), (a2, b2, c2) = _split_six(list(entries))
    det = a1 * b1 * c1 * a2 * b2 * c2
    x1, y1 = _neg(a1 * b1), _neg(a1 * c1)
    x2, y2 = _neg(a2 * b2), _neg(a2 * c2)
    level3 = PfisterSum(3, ((-1, (det, x1, y1)), (-1, (det, x2, y2))))
    level4 = PfisterSum(4, ((1, (x1, y1, x2, y2)),))
    return level3, level4


def a4_decomposition(entries, backend: CohBackend):
    """``e_4`` of ``-<<-1, -delta, -a1b1, -a1c1>> + <<-a1b1, -a1c1, -a2b2, -a2c2>>``."""
    (a1, b1, c1), (a2, b2, c2) = _split_six(list(entries))
    m1 = SymSquare(True) if isinstance(a1, SymSquare) else MINUS_ONE
    det = a1 * b1 * c1 * a2 * b2 * c2
    x1, y1 = _neg(a1 * b1), _neg(a1 * c1)
    x2, y2 = _neg(a2 * b2), _neg(a2 * c2)
    return backend.symbol((m1, det, x1, y1)) + backend.symbol((x1, y1, x2, y2))


def a3_a4(q, backend: CohBackend | None = None) -> A3A4:
    """The degree-3 and (when it vanishes) degree-4 invariants of a 6-dimensional form."""
    entries = list(q.entries) if hasattr(q, "entries") else list(q)
    _split_six(entries)
    symbolic = bool(entries) and isinstance(entries[0], SymSquare)
    if backend is None:
        backend = CohBackend("symbolic") if symbolic else RATIONAL
    if symbolic:
        level3, level4 = q_tau_pfister_sum(entries)
        a3 = e_n_pfister_sum(level3 + lower_level(level4), backend)
        a4 = a4_decomposition(entries, backend) if a3.is_zero() else None
        return A3A4(a3, a4, (level3, level4))
    form = DiagForm(tuple(entries))
    x = form.gw()
    lam4 = lambda_all(x, 4)[4]
    det = SquareClass(1)
    for a in form.entries:
        det = det * a
    q_tau = GWElem.one() + lam4 - pfister(-1, det)
    if not in_In(q_tau, 3):
        raise greek.PropertyViolation("q_tau is not in I^3")
    a3 = e_n(q_tau, 3)
    a4 = e_n(q_tau, 4) if a3.is_zero() else None
    return A3A4(a3, a4, q_tau)


def a4_defect_identity(entries, backend: CohBackend | None = None) -> bool:
    """``a4' - v4 = (w_1(q_1) + {-1}) u a_3`` where ``a4'`` is the decomposition value.

    Holds for every 6-dimensional diagonal form, so ``a4' = v4`` once ``a_3 = 0``.
    """
    entries = list(entries)
    if backend is None:
        backend = CohBackend("symbolic") if isinstance(entries[0], SymSquare) else RATIONAL
    cod = CohCodomain(backend)
    a3 = a3_a4(entries, backend).a3
    v4 = g_values(cod, 1, 4, entries)[4]
    a4 = a4_decomposition(entries if backend.kind == "symbolic" else [sq(a) for a in entries], backend)
    defect = (sw(entries[:3], 1, backend) + backend.minus_one()) * a3
    return (a4 - v4 - defect).is_zero()


def q_tau_representation_matches(q) -> bool:
    """The Pfister-sum expression of ``q_tau`` is Witt-equal to ``1 + lambda^4(q) - <<-1, -delta>>``."""
    entries = list(q.entries) if hasattr(q, "entries") else list(q)
    level3, level4 = q_tau_pfister_sum([sq(a) for a in entries])
    return witt_equal(a3_a4(entries).q_tau, level3.to_gw() + level4.to_gw())
