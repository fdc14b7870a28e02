"""The Greek-ring engine.

A value space is described by a :class:`LambdaProvider`: ring operations plus
the lambda-operations.  Every other family of operations is obtained from a
Greek letter ``alpha`` through the triangular change of basis
``alpha^d = sum_k [t^d] alpha(t)^k * lambda^k``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Any, Protocol, Sequence

from . import qform
from .qform import GWElem
from .series import GreekLetter, letter_matrix, pi_letter


class PropertyViolation(AssertionError):
    """An identity that should hold exactly failed on concrete inputs."""


class LambdaProvider(Protocol):
    def zero(self) -> Any: ...
    def one(self) -> Any: ...
    def add(self, x, y) -> Any: ...
    def neg(self, x) -> Any: ...
    def mul(self, x, y) -> Any: ...
    def scale(self, c: int, x) -> Any: ...
    def equal(self, x, y) -> bool: ...
    def lam(self, d: int, x) -> Any: ...


def lambdas(provider, x, D: int) -> list:
    """``[lambda^0(x), ..., lambda^D(x)]``, batched when the provider supports it."""
    batch = getattr(provider, "lambdas", None)
    if batch is not None:
        return batch(x, D)
    return [provider.lam(d, x) for d in range(D + 1)]


class IntegerLambda:
    """The integers with ``lambda^d(n) = binom(n, d)`` (generalized for negative ``n``)."""

    def zero(self):
        return 0

    def one(self):
        return 1

    def add(self, x, y):
        return x + y

    def neg(self, x):
        return -x

    def mul(self, x, y):
        return x * y

    def scale(self, c, x):
        return c * x

    def equal(self, x, y):
        return x == y

    def lam(self, d, x):
        if x >= 0:
            return comb(x, d)
        return (-1) ** d * comb(d - x - 1, d)


class GWLambda:
    """``GW(Q)`` with the lambda-operations of quadratic forms.

    Equality is equality in ``GW``: same virtual dimension and same Witt class.
    """

    def zero(self):
        return GWElem.zero()

    def one(self):
        return GWElem.one()

    def add(self, x, y):
        return x + y

    def neg(self, x):
        return -x

    def mul(self, x, y):
        return x * y

    def scale(self, c, x):
        return x * c

    def equal(self, x, y):
        return qform.gw_equal(x, y)

    def lam(self, d, x):
        return qform.lambda_form(x, d)

    def lambdas(self, x, D):
        return qform.lambda_all(x, D)

    def alpha_batch(self, a, D, x):
        # combine in the character domain, transform back once per degree
        vs = CHARS.alpha_batch(a, D, qform.CharVector.from_gw(x))
        return [v.to_gw() for v in vs]


class CharLambda:
    """Group-ring elements as :class:`~wittforge.qform.CharVector`; equality is equality in GW."""

    def zero(self):
        raise TypeError("character vectors need a basis; build zero from an element")

    def one(self):
        raise TypeError("character vectors need a basis; build one from an element")

    def add(self, x, y):
        return x + y

    def neg(self, x):
        return -x

    def mul(self, x, y):
        return x * y

    def scale(self, c, x):
        return x * c

    def equal(self, x, y):
        return qform.gw_equal((x - y).to_gw(), 0)

    def lambdas(self, x, D):
        return qform.lambda_chars(x, D)

    def lam(self, d, x):
        return qform.lambda_chars(x, d)[d]

    def alpha_batch(self, a, D, x):
        lam = qform.lambda_chars(x, D)
        size = len(x.values)
        out = [qform.CharVector.constant(x.basis, 1)]
        for d in range(1, D + 1):
            acc = [0] * size
            for k in range(1, d + 1):
                c = a[k][d]
                if c:
                    for s, v in enumerate(lam[k].values):
                        acc[s] += c * v
            out.append(qform.CharVector(x.basis, tuple(acc)))
        return out


GW = GWLambda()
CHARS = CharLambda()
INTEGERS = IntegerLambda()


def _combine(provider, coeffs: Sequence[int], values: Sequence) -> Any:
    out = provider.zero()
    for c, v in zip(coeffs, values):
        if c:
            out = provider.add(out, provider.scale(c, v))
    return out


def alpha_op(provider, letter: GreekLetter, d: int, x) -> Any:
    """``alpha^d(x)`` for the operation family attached to ``letter``."""
    return alpha_ops(provider, letter, d, x)[d]


def alpha_ops(provider, letter: GreekLetter, D: int, x) -> list:
    """``[alpha^0(x), ..., alpha^D(x)]`` sharing one batch of lambda-operations."""
    if D > letter.order:
        raise ValueError(f"degree {D} exceeds the truncation order {letter.order}")
    a = letter_matrix(letter, D)
    batch = getattr(provider, "alpha_batch", None)
    if batch is not None:
        return batch(a, D, x)
    lam = lambdas(provider, x, D)
    out = [provider.one()]
    for d in range(1, D + 1):
        out.append(_combine(provider, [a[k][d] for k in range(1, d + 1)], lam[1 : d + 1]))
    return out


@dataclass(frozen=True)
class PfisterCertificate:
    """Evidence that ``element`` is a level-``level`` Pfister element, checked up to degree ``bound``.

    Level 1 is checked directly; higher levels are products of level-1 certificates.
    """

    element: Any
    level: int
    bound: int
    factors: tuple = field(default=())


def is_pfister(provider, x, n: int = 1, T: int = 12) -> tuple[bool, Any]:
    """Bounded check that ``x`` is a 1-Pfister element.

    Returns ``(True, certificate)`` or ``(False, reason)``.
    """
    if n != 1:
        raise ValueError("only level 1 is checked directly; build higher levels with certify_product")
    two_x = provider.scale(2, x)
    if not provider.equal(provider.mul(x, x), two_x):
        return False, "x*x != 2x"
    lam = lambdas(provider, x, T)
    for d in range(2, T + 1):
        if not provider.equal(lam[d], x):
            return False, f"lambda^{d}(x) != x"
    pi = alpha_ops(provider, pi_letter(1, max(T, 1)), T, x)
    for d in range(2, T + 1):
        if not provider.equal(pi[d], provider.zero()):
            return False, f"pi_1^{d}(x) != 0"
    return True, PfisterCertificate(x, 1, T)


def certify_product(provider, certificates: Sequence[PfisterCertificate]) -> PfisterCertificate:
    if not certificates or any(c.level != 1 for c in certificates):
        raise ValueError("a product certificate needs level-1 factors")
    out = provider.one()
    for c in certificates:
        out = provider.mul(out, c.element)
    return PfisterCertificate(out, len(certificates), min(c.bound for c in certificates), tuple(certificates))


def certify_pfister_gw(*a, T: int = 12) -> PfisterCertificate:
    """Certificate for ``<<a_1, ..., a_n>>`` in ``GW(Q)``."""
    certs = []
    for x in a:
        ok, cert = is_pfister(GW, qform.pfister(x), 1, T)
        if not ok:
            raise PropertyViolation(f"<<{x}>> failed the Pfister check: {cert}")
        certs.append(cert)
    return certify_product(GW, certs)


def elementary_symmetric(provider, xs: Sequence, d: int) -> Any:
    """``e_d(x_1, ..., x_r)`` computed by the usual product recurrence."""
    e = [provider.one()] + [provider.zero()] * d
    for x in xs:
        for k in range(d, 0, -1):
            e[k] = provider.add(e[k], provider.mul(e[k - 1], x))
    return e[d]


def sym_sum_apply(provider, letter: GreekLetter, d: int, xs: Sequence) -> Any:
    """``alpha^d(x_1 + ... + x_r)`` for elements of alpha-dimension 1, checked against ``e_d(xs)``."""
    total = provider.zero()
    for x in xs:
        total = provider.add(total, x)
    lhs = alpha_op(provider, letter, d, total)
    rhs = elementary_symmetric(provider, xs, d)
    if not provider.equal(lhs, rhs):
        raise PropertyViolation(f"alpha^{d} of a sum of {len(xs)} dimension-1 elements differs from e_{d}")
    return rhs


def pi_scaled_pfister(n: int, d: int, a, x, order: int | None = None) -> GWElem:
    """``pi_n^d(<a> x)`` for an n-Pfister element ``x`` in ``GW(Q)``, checked against its closed form."""
    if d < 2:
        raise ValueError("the closed form needs d >= 2")
    order = max(d, order or d)
    ax = qform.as_gw(x).scaled(a)
    lhs = alpha_op(GW, pi_letter(n, order), d, ax)
    rhs = (GWElem.one() - qform.one_dim(a)) * qform.as_gw(x) * ((-1) ** d * 2 ** (n * (d - 1) - 1))
    if not GW.equal(lhs, rhs):
        raise PropertyViolation(f"pi_{n}^{d}(<a>x) does not match its closed form")
    return rhs


def sym_sum_brute(provider, xs: Sequence, d: int) -> Any:
    """``e_d`` by summing all ``d``-subsets; an oracle for :func:`elementary_symmetric`."""
    out = provider.zero()
    for sub in combinations(xs, d):
        p = provider.one()
        for x in sub:
            p = provider.mul(p, x)
        out = provider.add(out, p)
    return out
