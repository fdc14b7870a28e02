"""Named verification suites run by ``wittforge verify``.

A suite is a list of seeded cases; every case returns ``True``/``False``
(optionally with a payload describing the operands).  All randomness comes
from one :class:`random.Random` per suite, and case parameters are drawn
before any case runs, so a failure never shifts later draws.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Iterable

from . import greek, series
from .cohom import (
    CohBackend,
    PfisterSum,
    RatCoh,
    SymCoh,
    SymSquare,
    cup,
    e_n,
    e_n_pfister_sum,
    sw,
)
from .invariants import (
    COH,
    WITT,
    WittCharCodomain,
    a3_a4,
    basis_change_matrix,
    check_g_bound,
    check_product_formula,
    check_restriction,
    f1_fixed_dim,
    f_values,
    g1_fixed_dim,
    g_from_f,
    g_values,
    h_values,
    hat_from_lambda,
    hat_lambda_all,
    is_identity,
    is_unitriangular,
    lambda_from_hat,
    multinomial_parity,
    pointwise_identities,
    q_tau_representation_matches,
    rho_matrix_product,
    P_d,
)
from .qform import (
    GWElem,
    DiagForm,
    gw_equal,
    hilbert_symbol,
    in_In,
    lambda_all,
    pfister,
    relevant_places,
    second_residue,
    sq,
    witt_equal,
)

SIZES = ("small", "full")
SUITES = ("series", "greek", "qform", "cohom", "invariants", "hermitian", "clifford")

ENTRY_POOL = (-1, 2, 3, -2, 5, -3, 6, -5, 7, 10, -6)


@dataclass(frozen=True)
class SuiteReport:
    suite: str
    count: int
    passed: int
    first_failure: dict | None
    wall_time: float

    @property
    def ok(self) -> bool:
        return self.passed == self.count

    def to_json(self) -> dict:
        # wall time is left out so that reports are byte-identical across runs
        return {
            "suite": self.suite,
            "count": self.count,
            "passed": self.passed,
            "ok": self.ok,
            "first_failure": self.first_failure,
        }


Case = tuple  # (label, thunk)


def run_cases(name: str, cases: Iterable[Case]) -> SuiteReport:
    start = time.perf_counter()
    count = passed = 0
    first = None
    for label, thunk in cases:
        count += 1
        try:
            result = thunk()
        except Exception as ex:  # a crash is a failed case, reported with its operands
            ok, payload = False, {"error": f"{type(ex).__name__}: {ex}"}
        else:
            ok, payload = result if isinstance(result, tuple) else (result, {})
        if ok:
            passed += 1
        elif first is None:
            first = {"case": label, **payload}
    return SuiteReport(name, count, passed, first, time.perf_counter() - start)


def _n(size: str, small: int, full: int) -> int:
    return small if size == "small" else full


def _entries(rng: random.Random, k: int) -> tuple:
    return tuple(rng.choice(ENTRY_POOL) for _ in range(k))


def _virtual(rng: random.Random) -> GWElem:
    return GWElem.of(*_entries(rng, rng.randint(0, 3))) - GWElem.of(*_entries(rng, rng.randint(0, 2)))


def _pfister_sum(rng: random.Random, n: int, r: int, signed: bool = True) -> PfisterSum:
    terms = tuple((rng.choice((1, -1)) if signed else 1, _entries(rng, n)) for _ in range(r))
    return PfisterSum(n, terms)


# ---------------------------------------------------------------- series


def series_cases(rng: random.Random, size: str) -> list:
    cases = []
    T = _n(size, 16, 32)

    def coherence(n):
        lhs = series.compose(series.pi_letter(n + 1, T).series, series.quadratic_step(n, T).series)
        return lhs == series.pi_letter(n, T).series, {"n": n, "order": T}

    for n in range(1, 6):
        cases.append((f"pi coherence n={n}", lambda n=n: coherence(n)))

    def involution(cs):
        f = series.GreekLetter.from_coeffs(cs, 24)
        g = series.reversion(f)
        return series.reversion(g) == f and f @ g == series.GreekLetter.identity(24), {"coeffs": cs}

    for _ in range(_n(size, 10, 100)):
        cs = [0, 1] + [rng.randint(-9, 9) for _ in range(23)]
        cases.append(("reversion involution", lambda cs=cs: involution(cs)))

    D = 16

    def pi1_matrix():
        a = series.letter_matrix(series.pi_letter(1, D), D)
        return all(a[k][d] == series.pi1_matrix_entry(k, d) for d in range(1, D + 1) for k in range(1, d + 1))

    def step_matrix(n):
        a = series.letter_matrix(series.catalan_step(n, D), D)
        b = series.letter_matrix(series.quadratic_step(n, D), D)
        ok = all(a[k][d] == series.catalan_step_matrix_entry(n, k, d) for d in range(1, D + 1) for k in range(1, d + 1))
        return ok and all(
            b[k][d] == series.quadratic_step_matrix_entry(n, k, d) for d in range(1, D + 1) for k in range(1, d + 1)
        ), {"n": n}

    cases.append(("pi_1 letter matrix", pi1_matrix))
    for n in range(1, 5):
        cases.append((f"step letter matrices n={n}", lambda n=n: step_matrix(n)))

    def ring_laws(f, g, h):
        return f * g == g * f and (f * g) * h == f * (g * h)

    for _ in range(_n(size, 10, 50)):
        f, g, h = (series.Series.from_list([rng.randint(-9, 9) for _ in range(13)], 12) for _ in range(3))
        cases.append(("series_mul ring laws", lambda f=f, g=g, h=h: ring_laws(f, g, h)))
    return cases


# ---------------------------------------------------------------- greek


def greek_cases(rng: random.Random, size: str) -> list:
    cases = []
    GW = greek.GW
    D = 6
    letters = {
        "lambda": series.lambda_letter(D),
        "gamma": series.gamma_letter(D),
        "pi_1": series.pi_letter(1, D),
        "pi_2": series.pi_letter(2, D),
    }

    def addition(name, x, y):
        a = letters[name]
        ax, ay, axy = (greek.alpha_ops(GW, a, D, z) for z in (x, y, x + y))
        ok = all(
            gw_equal(axy[d], sum((ax[k] * ay[d - k] for k in range(d + 1)), GWElem.zero())) for d in range(D + 1)
        )
        return ok, {"letter": name, "x": repr(x), "y": repr(y)}

    for _ in range(_n(size, 8, 50)):
        x, y = _virtual(rng), _virtual(rng)
        name = rng.choice(sorted(letters))
        cases.append((f"addition law {name}", lambda name=name, x=x, y=y: addition(name, x, y)))

    def change_of_letter(tau_cs, x):
        D8 = 8
        tau = series.GreekLetter.from_coeffs(tau_cs, D8)
        beta = series.pi_letter(1, D8)
        alpha = beta @ tau
        a = series.letter_matrix(tau, D8)
        lhs = greek.alpha_ops(GW, alpha, D8, x)
        rhs = greek.alpha_ops(GW, beta, D8, x)
        ok = all(
            gw_equal(lhs[d], sum((rhs[k] * a[k][d] for k in range(1, d + 1)), GWElem.zero()))
            for d in range(1, D8 + 1)
        )
        return ok, {"tau": tau_cs, "x": repr(x)}

    for _ in range(_n(size, 4, 20)):
        tau_cs = [0, 1] + [rng.randint(-3, 3) for _ in range(7)]
        x = _virtual(rng)
        cases.append(("change of letter", lambda t=tau_cs, x=x: change_of_letter(t, x)))

    def sym_sum(n, r, d, entries):
        xs = [pfister(*es) for es in entries]
        got = greek.sym_sum_apply(GW, series.pi_letter(n, d), d, xs)
        return gw_equal(got, greek.sym_sum_brute(GW, xs, d)), {"n": n, "d": d, "pfister": entries}

    for _ in range(_n(size, 6, 30)):
        n, r = rng.randint(1, 2), rng.randint(0, 3)
        d = rng.randint(1, r + 2)
        entries = [_entries(rng, n) for _ in range(r)]
        cases.append(("symmetric sum", lambda n=n, r=r, d=d, e=entries: sym_sum(n, r, d, e)))

    def pfister_predicate(a):
        good, _ = greek.is_pfister(GW, pfister(a), 1, 8)
        bad, _ = greek.is_pfister(GW, GWElem.of(a), 1, 8)
        return good and not bad, {"a": a}

    for a in _entries(rng, _n(size, 3, 10)):
        cases.append(("Pfister predicate", lambda a=a: pfister_predicate(a)))

    def scaled(n, d, a, es):
        greek.pi_scaled_pfister(n, d, a, pfister(*es))
        return True, {"n": n, "d": d, "a": a, "pfister": es}

    for _ in range(_n(size, 4, 20)):
        n, d = rng.randint(1, 2), rng.randint(2, 4)
        a, es = rng.choice(ENTRY_POOL), _entries(rng, n)
        cases.append(("pi on a scaled Pfister", lambda n=n, d=d, a=a, es=es: scaled(n, d, a, es)))
    return cases


# ---------------------------------------------------------------- qform


def qform_cases(rng: random.Random, size: str) -> list:
    cases = []

    def reciprocity(a, b):
        places = relevant_places([sq(a), sq(b)])
        prod = 1
        for p in places:
            prod *= hilbert_symbol(a, b, p)
        return prod == 1, {"a": a, "b": b}

    for _ in range(_n(size, 20, 100)):
        a, b = rng.randint(-60, 60) or 1, rng.randint(-60, 60) or 1
        cases.append(("Hilbert reciprocity", lambda a=a, b=b: reciprocity(a, b)))

    def congruence(x, y, c):
        x2 = x + GWElem.of(c, -c) + GWElem.of(1, 1) - GWElem.of(2, 2)
        ok = witt_equal(x, x2) and witt_equal(x + y, x2 + y) and witt_equal(x * y, x2 * y)
        return ok, {"x": repr(x), "y": repr(y), "c": c}

    for _ in range(_n(size, 20, 100)):
        x, y, c = _virtual(rng), _virtual(rng), rng.choice(ENTRY_POOL)
        cases.append(("Witt congruence", lambda x=x, y=y, c=c: congruence(x, y, c)))

    def lambda_addition(x, y):
        D = 6
        lx, ly, lxy = lambda_all(x, D), lambda_all(y, D), lambda_all(x + y, D)
        ok = all(
            gw_equal(lxy[d], sum((lx[k] * ly[d - k] for k in range(d + 1)), GWElem.zero())) for d in range(D + 1)
        )
        return ok, {"x": repr(x), "y": repr(y)}

    for _ in range(_n(size, 10, 50)):
        x, y = _virtual(rng), _virtual(rng)
        cases.append(("lambda addition", lambda x=x, y=y: lambda_addition(x, y)))

    def clifford_table(a, b):
        expected = {p for p in relevant_places([sq(a), sq(b)]) if hilbert_symbol(a, b, p) == -1}
        return e_n(pfister(a, b), 2) == RatCoh.ramification(expected), {"a": a, "b": b}

    for _ in range(_n(size, 10, 50)):
        a, b = rng.choice(ENTRY_POOL), rng.choice(ENTRY_POOL)
        cases.append(("e_2 of a 2-Pfister", lambda a=a, b=b: clifford_table(a, b)))

    def unramified(p, entries, n):
        q = GWElem.of(*entries)
        vals = greek.alpha_ops(greek.GW, series.pi_letter(n, 4), 4, q)
        return all(second_residue(v, p).is_zero() for v in vals[1:]), {"p": p, "q": entries, "n": n}

    for _ in range(_n(size, 10, 50)):
        p = rng.choice((3, 5, 7))
        entries = tuple(a for a in _entries(rng, rng.randint(1, 5)) if a % p)
        n = rng.randint(1, 2)
        cases.append(("non-ramification", lambda p=p, e=entries, n=n: unramified(p, e, n)))

    def hat_lambda(entries):
        r = len(entries) // 2
        q = DiagForm.of(*entries).gw()
        lam, hat = lambda_all(q, 8), hat_lambda_all(q, 8)
        ok = all(
            witt_equal(lambda_from_hat(r, hat, d), lam[d]) and witt_equal(hat_from_lambda(r, lam, d), hat[d])
            for d in range(9)
        )
        return ok, {"q": entries}

    for _ in range(_n(size, 4, 20)):
        entries = _entries(rng, 2 * rng.randint(1, 4))
        cases.append(("hat-lambda conversion", lambda e=entries: hat_lambda(e)))
    return cases


# ---------------------------------------------------------------- cohom


def cohom_cases(rng: random.Random, size: str) -> list:
    cases = []

    def sw_rational(entries):
        ok = all(sw(entries, d) == e_n(P_d(entries, d), d) for d in range(1, min(3, len(entries)) + 1))
        return ok, {"q": entries}

    for _ in range(_n(size, 20, 200)):
        entries = _entries(rng, rng.randint(1, 8))
        cases.append(("w_d = e_d P^d (rational)", lambda e=entries: sw_rational(e)))

    def sw_symbolic(k):
        xs = [SymSquare.var(i) for i in range(1, k + 1)]
        bk = CohBackend("symbolic")
        ok = True
        for d in range(1, k + 1):
            rep = PfisterSum(d, tuple((1, S) for S in combinations(xs, d)))
            ok = ok and (e_n_pfister_sum(rep, bk) - sw(xs, d, bk)).is_zero()
        return ok, {"dim": k}

    for k in range(1, _n(size, 5, 8) + 1):
        cases.append((f"w_d = e_d P^d (symbolic, dim {k})", lambda k=k: sw_symbolic(k)))

    def cup_reciprocity(a, b):
        c = cup(RatCoh.square(a), RatCoh.square(b))
        places = c.component(2) or frozenset()
        return len(places) % 2 == 0, {"a": a, "b": b}

    for _ in range(_n(size, 20, 100)):
        a, b = rng.randint(-40, 40) or 1, rng.randint(-40, 40) or 1
        cases.append(("degree-2 reciprocity", lambda a=a, b=b: cup_reciprocity(a, b)))

    def monomial_law(S, T, cap):
        lhs = SymCoh.monomial(0, S, cap) * SymCoh.monomial(0, T, cap)
        rhs = SymCoh.monomial(len(S & T), S | T, cap)
        return (lhs - rhs).is_zero(), {"S": sorted(S), "T": sorted(T), "rho_cap": cap}

    for _ in range(_n(size, 20, 100)):
        S = frozenset(i for i in range(1, 7) if rng.random() < 0.5)
        T = frozenset(i for i in range(1, 7) if rng.random() < 0.5)
        cap = rng.choice((None, 2, 4))
        cases.append(("x_S x_T normal form", lambda S=S, T=T, c=cap: monomial_law(S, T, c)))

    def e_n_agree(x):
        return e_n_pfister_sum(x) == e_n(x.to_gw(), x.level), {"pfister_sum": x.to_json()}

    for _ in range(_n(size, 20, 100)):
        x = _pfister_sum(rng, rng.randint(1, 3), rng.randint(1, 3))
        cases.append(("e_n on Pfister sums", lambda x=x: e_n_agree(x)))
    return cases


# ---------------------------------------------------------------- invariants


def invariants_cases(rng: random.Random, size: str) -> list:
    cases = []
    size_bc = _n(size, 10, 21)

    def basis_change(n):
        A = basis_change_matrix("g_from_f", size_bc, n)
        B = basis_change_matrix("f_from_g", size_bc, n)
        ok = is_unitriangular(A) and is_unitriangular(B)
        return ok and is_identity(rho_matrix_product(A, B)) and is_identity(rho_matrix_product(B, A)), {"n": n}

    for n in (1, 2, 3):
        cases.append((f"f/g basis change n={n}", lambda n=n: basis_change(n)))

    def symmetric_sum(n, entries):
        q = PfisterSum(n, tuple((1, es) for es in entries))
        cod = WittCharCodomain.for_entries([a for es in entries for a in es])
        D = len(entries) + 2
        fv = f_values(cod, n, D, q)
        e = [cod.one()] + [cod.zero()] * D
        for es in entries:
            x = cod.symbol(es)
            for k in range(D, 0, -1):
                e[k] = e[k] + e[k - 1] * x
        ok = all(cod.equal(fv[d], e[d]) for d in range(D + 1))
        return ok, {"n": n, "pfister": entries}

    for _ in range(_n(size, 6, 40)):
        n, r = rng.randint(1, 3), rng.randint(1, _n(size, 3, 5))
        entries = [_entries(rng, n) for _ in range(r)]
        cases.append(("Pfister symmetric sum", lambda n=n, e=entries: symmetric_sum(n, e)))

    def g_bound(q):
        cod = WittCharCodomain.for_entries([a.value for _, es in q.terms for a in es])
        return check_g_bound(cod, q.level, q, 2 * len(q.terms) + 2), {"pfister_sum": q.to_json()}

    for _ in range(_n(size, 4, 20)):
        q = _pfister_sum(rng, rng.randint(1, 2), rng.randint(1, 3))
        cases.append(("g degree bound", lambda q=q: g_bound(q)))

    def product(q, which):
        cod = COH if which == "coh" else WittCharCodomain.for_entries([a.value for _, es in q.terms for a in es])
        return check_product_formula(cod, q.level, q, 4, 4), {"pfister_sum": q.to_json(), "codomain": which}

    for _ in range(_n(size, 3, 50)):
        q = _pfister_sum(rng, rng.randint(1, 2), rng.randint(1, 3))
        for which in ("witt", "coh"):
            cases.append(("product formula", lambda q=q, w=which: product(q, w)))

    def parity(m_max):
        return all(
            multinomial_parity(s, t, m) == int(m == s | t)
            for s in range(m_max + 1)
            for t in range(m_max + 1)
            for m in range(max(s, t), s + t + 1)
        )

    cases.append(("multinomial parity", lambda: parity(_n(size, 16, 64))))

    def restriction(q, which):
        cod = COH if which == "coh" else WittCharCodomain.for_entries([a.value for _, es in q.terms for a in es])
        return check_restriction(cod, q.level - 1, q, 6), {"pfister_sum": q.to_json(), "codomain": which}

    for _ in range(_n(size, 3, 50)):
        q = _pfister_sum(rng, rng.randint(2, 3), rng.randint(1, 2))
        for which in ("witt", "coh"):
            cases.append(("restriction", lambda q=q, w=which: restriction(q, w)))

    def fixed_dim(entries):
        cod = WittCharCodomain.for_entries(entries)
        D = 8
        fv = f_values(cod, 1, D, list(entries))
        gv = g_from_f(cod, 1, fv)
        h = h_values(cod, entries, D)
        fc = f_values(COH, 1, D, list(entries))
        gc = g_from_f(COH, 1, fc)
        hc = h_values(COH, entries, D)
        ok = all(
            cod.equal(fv[d], f1_fixed_dim(cod, entries, d, h))
            and cod.equal(gv[d], g1_fixed_dim(cod, entries, d, h))
            and COH.equal(fc[d], f1_fixed_dim(COH, entries, d, hc))
            and COH.equal(gc[d], g1_fixed_dim(COH, entries, d, hc))
            for d in range(D + 1)
        )
        return ok, {"q": entries}

    for _ in range(_n(size, 6, 40)):
        entries = tuple(rng.choice((1, -1, 2, -2, 3, -3, 5, -5)) for _ in range(2 * rng.randint(1, 4)))
        cases.append(("fixed-dimension formulas", lambda e=entries: fixed_dim(e)))

    def identities(q, phi, lam, d, psi, which):
        cod = COH if which == "coh" else WITT
        rep = pointwise_identities(cod, q, phi, lam, q.level, d, psi)
        return rep.ok, {"failure": rep.first_failure, "codomain": which}

    for _ in range(_n(size, 4, 20)):
        n = rng.randint(1, 2)
        q = _pfister_sum(rng, n, rng.randint(1, 2))
        phi, psi = _entries(rng, n), _entries(rng, n + 1)
        lam, d = rng.choice(ENTRY_POOL), rng.randint(0, 4)
        for which in ("witt", "coh"):
            cases.append(("pointwise identities", lambda q=q, p=phi, l=lam, d=d, s=psi, w=which: identities(q, p, l, d, s, w)))

    def a3(entries):
        r = a3_a4(list(entries))
        ok = q_tau_representation_matches(list(entries))
        ok = ok and (r.a3 - g_values(COH, 1, 3, list(entries))[3]).is_zero()
        return ok, {"q": entries}

    for _ in range(_n(size, 5, 50)):
        entries = _entries(rng, 6)
        cases.append(("a_3 over Q", lambda e=entries: a3(e)))
    return cases


# ---------------------------------------------------------------- hermitian


def hermitian_cases(rng: random.Random, size: str) -> list:
    from . import hermitian as H

    algebras = [H.QuaternionAlgebra(a, b) for a, b in ((-1, -1), (1, 5), (2, 3), (-1, 3), (3, -7), (-2, -5))]
    split = [H.QuaternionAlgebra(a, b) for a, b in ((1, 5), (1, -3), (4, 7), (2, -2))]
    cases = []

    def pure(Q, bound=3):
        while True:
            z = Q.elem(0, *[rng.randint(-bound, bound) for _ in range(3)])
            if z.nrd != 0:
                return z

    def product(z1, z2):
        r = H.diag_product(z1, z2)
        sym = witt_equal(r.formula.gw(), H.diag_product(z2, z1).formula.gw())
        return r.agrees and sym, {"z1": z1.to_json(), "z2": z2.to_json()}

    for _ in range(_n(size, 20, 200)):
        Q = rng.choice(algebras)
        z1, z2 = pure(Q), pure(Q)
        cases.append(("product formula vs Gram", lambda z1=z1, z2=z2: product(z1, z2)))

    def scalar_law(Q, a, b):
        r = H.diag_product(Q.scalar(a), Q.scalar(b))
        return r.agrees and witt_equal(r.formula.gw(), H.norm_form(Q).gw().scaled(2 * a * b)), {"a": a, "b": b}

    for _ in range(_n(size, 10, 50)):
        Q = rng.choice(algebras)
        a, b = rng.choice(ENTRY_POOL), rng.choice(ENTRY_POOL)
        cases.append(("scalar product law", lambda Q=Q, a=a, b=b: scalar_law(Q, a, b)))

    def phi_mult(z1, z2, z3):
        lhs = H.phi_form([z1, z2]) * pfister(z3.square_scalar)
        return witt_equal(lhs, H.phi_form([z1, z2, z3])), {"z": [z.to_json() for z in (z1, z2, z3)]}

    for _ in range(_n(size, 10, 50)):
        Q = rng.choice(algebras)
        zs = [pure(Q) for _ in range(3)]
        cases.append(("phi multiplicativity", lambda zs=zs: phi_mult(*zs)))

    def psi_laws(a, b, c):
        comm = (a * b).equals(b * a)
        assoc = ((a * b) * c).equals(a * (b * c))
        back = H.SplitMixedElem.from_group_ring(*a.to_group_ring()).equals(a)
        return comm and assoc and back

    for _ in range(_n(size, 10, 50)):
        a, b, c = (H.SplitMixedElem(_virtual(rng), _virtual(rng)) for _ in range(3))
        cases.append(("split mixed ring laws", lambda a=a, b=b, c=c: psi_laws(a, b, c)))

    def g_sym(zs, d):
        a = H.g_sym_component(zs, d)
        ok = witt_equal(a, H.g_sym_component_lambda(zs, d))
        if d > len(zs):
            ok = ok and witt_equal(a, 0)
        if d in (2, 3):
            ok = ok and e_n(a, d) == H.g_sym_expected_e(zs[0].alg, len(zs), d)
        return ok, {"z": [z.to_json() for z in zs], "d": d}

    for _ in range(_n(size, 8, 40)):
        Q = rng.choice(algebras)
        zs = [pure(Q) for _ in range(rng.randint(1, 4))]
        d = rng.randint(0, len(zs) + 1)
        cases.append(("g_sym component", lambda zs=zs, d=d: g_sym(zs, d)))

    def filtration(zs, d):
        return H.ind2_filtration_check(zs, d).ok, {"z": [z.to_json() for z in zs], "d": d}

    for _ in range(_n(size, 6, 30)):
        Q = rng.choice(algebras)
        zs = [pure(Q) for _ in range(rng.randint(1, 4))]
        cases.append(("filtration", lambda zs=zs, d=rng.randint(1, 6): filtration(zs, d)))

    def split_oracle(zs, d):
        return H.g_sym_split_oracle(zs, d), {"z": [z.to_json() for z in zs], "d": d}

    for _ in range(_n(size, 4, 20)):
        Q = rng.choice(split)
        zs = [pure(Q) for _ in range(rng.randint(1, 3))]
        cases.append(("split Morita oracle", lambda zs=zs, d=rng.randint(0, len(zs) + 1): split_oracle(zs, d)))

    def graded(z1, z2, z3, z4):
        x = H.MixedWittElem.anti_hermitian(z1.alg, z1, z2)
        y = H.MixedWittElem.anti_hermitian(z1.alg, z3, z4)
        return in_In((x * y).scalar_part(), 2), {"z": [z.to_json() for z in (z1, z2, z3, z4)]}

    for _ in range(_n(size, 6, 30)):
        Q = rng.choice(algebras)
        zs = [pure(Q) for _ in range(4)]
        cases.append(("graded products in I^2", lambda zs=zs: graded(*zs)))

    def t_tau(Q, seed):
        local = random.Random(seed)
        for _ in range(50):
            zs = [Q.elem(0, *[local.randint(-4, 4) for _ in range(3)]) for _ in range(3)]
            if any(z.nrd == 0 for z in zs):
                continue
            try:
                rep = H.t_tau_check(zs)
            except ValueError:
                continue
            return rep.ok, {"z": [z.to_json() for z in zs]}
        return False, {"error": "no admissible triple"}

    for _ in range(_n(size, 3, 20)):
        Q = rng.choice(algebras)
        cases.append(("T_tau = 1 + lambda^4", lambda Q=Q, s=rng.randrange(10**6): t_tau(Q, s)))
    return cases


# ---------------------------------------------------------------- clifford


def random_d3_input(rng: random.Random, algebras=None, bound: int = 3) -> list:
    """Three pure invertible quaternions accepted by :func:`~wittforge.clifford.d3_generators`."""
    from . import clifford as C
    from . import hermitian as H

    algebras = algebras or [H.QuaternionAlgebra(a, b) for a, b in ((-1, -1), (2, 3), (-1, 3), (1, 5), (3, -7))]
    while True:
        Q = rng.choice(algebras)
        zs = [Q.elem(0, *[rng.randint(-bound, bound) for _ in range(3)]) for _ in range(3)]
        if any(z.nrd == 0 for z in zs):
            continue
        try:
            C.d3_generators(zs)
        except ValueError:
            continue
        return zs


def clifford_cases(rng: random.Random, size: str) -> list:
    from . import clifford as C
    from .fields import QuadField

    cases = []

    def d3(zs):
        g = C.d3_generators(zs)
        return g.ok, {"z": [z.to_json() for z in zs], "failures": g.failures()[:5]}

    for _ in range(_n(size, 5, 20)):
        zs = random_d3_input(rng)
        cases.append(("A3 -> D3 relations", lambda zs=zs: d3(zs)))

    def algebra_laws(c, b, seed):
        alg = C.build_clifford(QuadField(c), *b)
        local = random.Random(seed)
        ok = C.associativity_check(alg, trials=3, seed=seed)
        for _ in range(3):
            x, y = alg.random_elem(local), alg.random_elem(local)
            ok = ok and (x * y).reverse() == y.reverse() * x.reverse()
        return ok, {"c": c, "b": b}

    for _ in range(_n(size, 2, 5)):
        c = rng.choice((-1, 2, 3, -5))
        b = [rng.choice((1, -1, 2, 3, -3)) for _ in range(6)]
        cases.append(("Clifford associativity", lambda c=c, b=b, s=rng.randrange(10**6): algebra_laws(c, b, s)))

    def a3d3(seed):
        rep = C.a3d3_verify(C.a3d3_instance(seed))
        fails = [c.name for c in rep.failures()]
        return rep.ok, {"seed": seed, "failures": fails[:5]}

    for _ in range(_n(size, 3, 10)):
        cases.append(("D3 -> A3 cocycles", lambda s=rng.randrange(10**6): a3d3(s)))

    def h90(seed, g):
        inst = C.a3d3_instance(seed)
        local = random.Random(seed)
        x = inst.L.random_elem(local)
        while not x.is_unit():
            x = inst.L.random_elem(local)
        c = x * x.galois(g).inverse()
        y = C.hilbert90_solve(c, g, rng=local)
        return c * y.galois(g) == y, {"seed": seed, "g": g}

    for _ in range(_n(size, 3, 10)):
        cases.append(("Hilbert 90", lambda s=rng.randrange(10**6), g=rng.choice((1, 2, 4, 7)): h90(s, g)))
    return cases


BUILDERS: dict[str, Callable] = {
    "series": series_cases,
    "greek": greek_cases,
    "qform": qform_cases,
    "cohom": cohom_cases,
    "invariants": invariants_cases,
    "hermitian": hermitian_cases,
    "clifford": clifford_cases,
}


def run_suite(name: str, seed: int = 0, size: str = "full") -> SuiteReport:
    if name not in BUILDERS:
        raise KeyError(name)
    if size not in SIZES:
        raise ValueError(f"size must be one of {SIZES}")
    rng = random.Random(f"{seed}:{name}")
    return run_cases(name, BUILDERS[name](rng, size))


def run_suites(names: Iterable[str], seed: int = 0, size: str = "full") -> list:
    return [run_suite(n, seed, size) for n in names]


__all__ = ["SUITES", "SIZES", "SuiteReport", "random_d3_input", "run_cases", "run_suite", "run_suites"]
