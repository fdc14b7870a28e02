import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles as O
from wittforge.cohom import MembershipError, PfisterSum, RatCoh, SymCoh, SymSquare, sw
from wittforge.greek import PropertyViolation
from wittforge.invariants import (
    COH,
    WITT,
    InvariantSpec,
    P_d,
    P_d_pfister,
    RhoMonomial,
    WittCharCodomain,
    a3_a4,
    a4_defect_identity,
    basis_change_matrix,
    check_g_bound,
    check_product_formula,
    check_restriction,
    delta_31,
    delta_31_consistent,
    disc_check,
    eval_invariant,
    f1_fixed_dim,
    f_from_g,
    f_values,
    g1_fixed_dim,
    g1_from_lambda,
    g_from_f,
    g_values,
    hat_from_lambda,
    hat_lambda_all,
    is_identity,
    is_unitriangular,
    lambda_from_hat,
    multinomial_parity,
    pointwise_identities,
    product_coeffs,
    q_tau_representation_matches,
    restrict_coeffs,
    rho_matrix_product,
    symbolic_coh,
)
from wittforge.qform import HYPERBOLIC, GWElem, gw_equal, in_In, lambda_all, pfister, witt_equal

entry = st.sampled_from([-1, 2, 3, -2, 5, -3, 6, -5, 7, 10])


def psum(n, *terms):
    return PfisterSum(n, tuple(terms))


def terms_str(pairs):
    return [(d, str(c)) for d, c in pairs]


# ---------------------------------------------------------------- tables


def test_product_coeff_examples():
    assert terms_str(product_coeffs(1, 1, 1)) == [(1, "{-1}"), (2, "2")]
    assert terms_str(product_coeffs(1, 1, 2)) == [(1, "{-1}^2"), (2, "2")]
    assert terms_str(product_coeffs(1, 2, 1, char2=True)) == [(3, "1")]
    assert terms_str(product_coeffs(1, 1, 3, char2=True)) == [(1, "{-1}^3")]
    assert product_coeffs(0, 3, 1) == [(3, RhoMonomial(1, 0))]


@given(st.integers(0, 12), st.integers(0, 12), st.integers(1, 3))
def test_product_coeffs_are_multinomials(s, t, n):
    table = dict(product_coeffs(s, t, n))
    for d in range(max(s, t), s + t + 1):
        c = O.multinomial(d, (s + t - d, d - s, d - t))
        assert table.get(d, RhoMonomial(0)).coeff == c
        if c:
            assert table[d].power == n * (s + t - d)


def test_multinomial_parity_examples():
    assert multinomial_parity(1, 1, 1) == 1
    assert multinomial_parity(1, 1, 2) == 0
    assert multinomial_parity(2, 1, 3) == 1
    assert multinomial_parity(2, 1, 9) == 0


@given(st.integers(0, 64), st.integers(0, 64), st.data())
def test_multinomial_parity_is_or(s, t, data):
    m = data.draw(st.integers(max(s, t), s + t))
    assert multinomial_parity(s, t, m) == int(m == s | t)


def test_restrict_examples():
    assert restrict_coeffs(1, 3, 0) == []
    assert terms_str(restrict_coeffs(1, 2, 0)) == [(1, "1")]
    assert terms_str(restrict_coeffs(2, 2, 1)) == [(1, "{-1}"), (2, "1")]
    assert terms_str(restrict_coeffs(1, 2, 1)) == [(1, "1"), (2, "1")]
    assert terms_str(restrict_coeffs(3, 4, 0)) == [(2, "{-1}^4")]
    with pytest.raises(ValueError):
        restrict_coeffs(1, 0, 1)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_basis_change_inverse(n):
    A = basis_change_matrix("g_from_f", 21, n)
    B = basis_change_matrix("f_from_g", 21, n)
    assert is_unitriangular(A) and is_unitriangular(B)
    assert is_identity(rho_matrix_product(A, B)) and is_identity(rho_matrix_product(B, A))


# ---------------------------------------------------------------- evaluation


def test_invariant_spec_validation():
    with pytest.raises(ValueError):
        InvariantSpec("h", 1, 1)
    with pytest.raises(ValueError):
        InvariantSpec("f", 0, 1)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_single_pfister_is_dimension_one(n):
    phi = pfister(*[2, 3, 5][:n])
    for d in range(2, 5):
        assert witt_equal(eval_invariant(InvariantSpec("f", n, d), phi), 0)
    assert witt_equal(eval_invariant(InvariantSpec("f", n, 1), phi), phi)
    assert witt_equal(eval_invariant(InvariantSpec("f", n, 0), phi), 1)


def test_g_example_n1_d3():
    q = psum(1, (1, (2,)), (1, (3,)), (-1, (5,)))
    f = f_values(WITT, 1, 3, q)
    g3 = eval_invariant(InvariantSpec("g", 1, 3), q)
    assert witt_equal(g3, f[3] + pfister(-1) * f[2])
    fc = f_values(COH, 1, 3, q)
    assert eval_invariant(InvariantSpec("g", 1, 3, COH), q) == fc[3] + RatCoh.minus_one() * fc[2]


def test_membership_errors():
    with pytest.raises(MembershipError):
        eval_invariant(InvariantSpec("f", 1, 2), [1, 2, 3])
    with pytest.raises(MembershipError):
        eval_invariant(InvariantSpec("f", 2, 2), [1, 2])
    with pytest.raises(MembershipError):
        eval_invariant(InvariantSpec("f", 3, 1), psum(2, (1, (2, 3))))


def test_e_n_of_f_matches_coh_codomain():
    q = psum(1, (1, (2,)), (1, (-3,)), (-1, (5,)), (1, (7,)))
    fw = f_values(WITT, 1, 4, q)
    fc = f_values(COH, 1, 4, q)
    from wittforge.cohom import e_n

    for d in range(1, 5):
        assert e_n(fw[d], d) == fc[d]


@given(st.lists(st.tuples(st.sampled_from([1, -1]), entry), min_size=1, max_size=4), st.integers(1, 6))
def test_symbolic_and_rational_routes_agree_in_shape(terms, d):
    q = psum(1, *[(e, (a,)) for e, a in terms])
    g = g_values(COH, 1, d, q)
    f = f_from_g(COH, 1, g)
    assert f == f_values(COH, 1, d, q)


@given(st.lists(st.tuples(st.sampled_from([1, -1]), st.tuples(entry, entry)), min_size=1, max_size=3))
def test_g_round_trip_witt(terms):
    q = psum(2, *terms)
    f = f_values(WITT, 2, 6, q)
    back = f_from_g(WITT, 2, g_from_f(WITT, 2, f))
    assert all(witt_equal(a, b) for a, b in zip(f, back))


def test_char_codomain_matches_gw():
    q = psum(1, (1, (2,)), (-1, (3,)), (1, (-5,)))
    cod = WittCharCodomain.for_entries([2, 3, -5])
    fa = f_values(WITT, 1, 6, q)
    fb = f_values(cod, 1, 6, q)
    assert all(witt_equal(a, b.to_gw()) for a, b in zip(fa, fb))


# ---------------------------------------------------------------- identities


@given(
    st.lists(st.tuples(st.sampled_from([1, -1]), st.tuples(entry, entry)), min_size=1, max_size=3),
    st.tuples(entry, entry),
    entry,
    st.integers(1, 5),
    st.sampled_from(["witt", "coh"]),
)
def test_pointwise_identities_level2(terms, phi, lam, d, codomain):
    cod = WITT if codomain == "witt" else COH
    rep = pointwise_identities(cod, psum(2, *terms), phi, lam, 2, d, psi=(2, 3, 5))
    assert rep.ok, rep.first_failure


def test_pointwise_identities_symbolic():
    x = [SymSquare.var(i) for i in range(1, 7)]
    q = psum(1, (1, (x[0],)), (-1, (x[1],)), (1, (x[2],)))
    for d in range(1, 5):
        rep = pointwise_identities(symbolic_coh(), q, (x[3],), x[4], 1, d, psi=(x[4], x[5]))
        assert rep.ok, rep.first_failure


@given(st.lists(st.tuples(st.sampled_from([1, -1]), st.tuples(entry, entry)), min_size=1, max_size=3))
def test_product_formula_both_codomains(terms):
    q = psum(2, *terms)
    assert check_product_formula(WITT, 2, q, 3, 3)
    assert check_product_formula(COH, 2, q, 3, 3)


@given(st.lists(st.tuples(st.sampled_from([1, -1]), st.tuples(entry, entry)), min_size=1, max_size=3))
def test_restriction_both_regimes(terms):
    q = psum(2, *terms)
    assert check_restriction(WITT, 1, q, 5)
    assert check_restriction(COH, 1, q, 5)


@given(st.integers(0, 3), st.integers(0, 3), st.lists(st.tuples(entry, entry), min_size=6, max_size=6))
def test_g_bound(s, t, pairs):
    if s + t == 0:
        return
    terms = [(1, pairs[i]) for i in range(s)] + [(-1, pairs[3 + i]) for i in range(t)]
    q = psum(2, *terms)
    assert check_g_bound(WITT, 2, q, 2 * max(s, t) + 2)
    assert check_g_bound(COH, 2, q, 2 * max(s, t) + 2)


# ---------------------------------------------------------------- fixed dimension


def test_P_d_examples():
    assert gw_equal(P_d([2, 3], 0), 1)
    assert gw_equal(P_d([2, 3], 1), pfister(2) + pfister(3))
    assert witt_equal(P_d([1, 1], 2), 0)


@given(st.lists(entry, min_size=1, max_size=6), st.integers(0, 6))
def test_P_d_is_sum_of_pfister_forms(es, d):
    assert witt_equal(P_d(es, d), P_d_pfister(es, d))


def test_g1_two_example():
    # g_1^2(<a, b>) = 1 - <a, b> + <ab>
    for a, b in [(2, 3), (-1, 5), (3, -6)]:
        want = GWElem.one() - GWElem.of(a, b) + GWElem.of(a * b)
        assert witt_equal(g1_fixed_dim(WITT, [a, b], 2), want)
        assert witt_equal(g1_from_lambda([a, b], 2), want)


def test_fixed_dim_hyperbolic():
    for m in (1, 2):
        q = [1, -1] * m
        for d in range(1, 6):
            assert witt_equal(g1_fixed_dim(WITT, q, d), 0)
            assert witt_equal(f1_fixed_dim(WITT, q, d), 0)
    assert witt_equal(f1_fixed_dim(WITT, [2, 3], 0), 1)
    with pytest.raises(ValueError):
        f1_fixed_dim(WITT, [2, 3, 5], 1)


@given(st.lists(entry, min_size=1, max_size=3).map(lambda xs: xs * 2 if len(xs) % 2 else xs), st.integers(1, 6))
def test_fixed_dim_matches_direct(es, d):
    if len(es) % 2:
        es = es + [1]
    fw, gw = f_values(WITT, 1, d, es), g_values(WITT, 1, d, es)
    assert witt_equal(f1_fixed_dim(WITT, es, d), fw[d])
    assert witt_equal(g1_fixed_dim(WITT, es, d), gw[d])
    assert witt_equal(g1_from_lambda(es, d), gw[d])
    fc, gc = f_values(COH, 1, d, es), g_values(COH, 1, d, es)
    assert f1_fixed_dim(COH, es, d) == fc[d]
    assert g1_fixed_dim(COH, es, d) == gc[d]


@given(st.lists(entry, min_size=2, max_size=6).filter(lambda xs: len(xs) % 2 == 0))
def test_g1_vanishes_above_dimension(es):
    r = len(es) // 2
    g = g_values(WITT, 1, 2 * r + 2, es)
    assert witt_equal(g[2 * r + 1], 0) and witt_equal(g[2 * r + 2], 0)


@given(st.lists(entry, min_size=2, max_size=6).filter(lambda xs: len(xs) % 2 == 0), st.integers(0, 6))
def test_hat_lambda_conversions(es, d):
    r = len(es) // 2
    lam = lambda_all(GWElem.of(*es), d)
    hat = hat_lambda_all(GWElem.of(*es), d)
    # only a Witt identity: lambda_t(H) = 1 + H t + <-1> t^2 in GW
    assert witt_equal(lambda_from_hat(r, hat, d), lam[d])
    assert witt_equal(hat_from_lambda(r, lam, d), hat[d])


def test_disc_check():
    agrees, stable = disc_check([2, 3])
    assert stable and agrees
    agrees, stable = disc_check([1, -1, 2, 5])
    assert stable and agrees


# ---------------------------------------------------------------- Delta and a3/a4


def test_delta_31_examples():
    assert delta_31(1, pfister(2, 3), 2).is_zero()
    assert delta_31(5, pfister(2, 3), 2).is_zero()
    q = pfister(2, 3) + pfister(-1, 5)
    assert delta_31_consistent(7, q, 7, q + pfister(7, -1), 1)
    with pytest.raises(ValueError):
        delta_31_consistent(2, pfister(-1, -1), -1, pfister(-1, -1), 1)


def test_a3_a4_examples():
    res = a3_a4([1, -1] * 3)
    assert res.a3.is_zero()
    assert res.a4 is not None and res.a4.is_zero()
    with pytest.raises(ValueError):
        a3_a4([1, 2, 3])


def test_a3_symbolic_generic():
    x = [SymSquare.var(i) for i in range(1, 7)]
    res = a3_a4(x)
    rho = SymCoh.rho()
    assert res.a3 == sw(x, 3) + rho * rho * sw(x, 1)
    assert res.a4 is None


def test_a4_identity_symbolic():
    v = SymSquare.var
    assert a4_defect_identity([v(i) for i in range(1, 7)])
    # three degenerate generic forms on which a3 vanishes
    cases = [
        [v(1), v(1), v(2), v(2), v(3), v(3)],
        [v(1), -v(1), v(2), -v(2), v(3), -v(3)],
        [v(1), v(2), v(1) * v(2), v(3), v(4), v(3) * v(4)],
    ]
    for y in cases:
        res = a3_a4(y)
        assert res.a3.is_zero()
        assert res.a4 == g_values(symbolic_coh(), 1, 4, y)[4]


@given(st.lists(entry, min_size=6, max_size=6))
def test_q_tau_in_I3(es):
    res = a3_a4(es)
    assert in_In(res.q_tau, 3)
    assert q_tau_representation_matches(es)
    assert a4_defect_identity(es)


def test_hyperbolic_lift_invariance():
    q = GWElem.of(2, 3, 5, 7)
    assert all(witt_equal(a, b) for a, b in zip(f_values(WITT, 1, 4, q), f_values(WITT, 1, 4, q + HYPERBOLIC)))
    assert not (PropertyViolation is None)
