from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

import oracles as O
from wittforge.cohom import RatCoh, e_n
from wittforge.hermitian import (
    HAMILTON,
    MixedWittElem,
    NotSplitError,
    QuaternionAlgebra,
    SplitMixedElem,
    anticommuting,
    diag_product,
    diag_product_form,
    diag_product_witt,
    g_sym_component,
    g_sym_component_lambda,
    g_sym_component_phi,
    g_sym_expected_e,
    g_sym_split_oracle,
    group_ring_mul,
    ind2_filtration_check,
    norm_form,
    phi_form,
    phi_is_pfister,
    split_mixed_mul,
    split_morita,
    t_tau_check,
    trace_form_involution,
)
from wittforge.qform import INF, GWElem, gw_equal, in_In, pfister, witt_equal

ALGEBRAS = [HAMILTON, QuaternionAlgebra(2, 3), QuaternionAlgebra(-1, 3), QuaternionAlgebra(1, 5), QuaternionAlgebra(-2, 5)]
coord = st.integers(-3, 3)


def pure(alg, draw_coords):
    x, y, z = draw_coords
    return alg.elem(0, x, y, z)


pure_coords = st.tuples(coord, coord, coord).filter(lambda t: any(t))


def test_quaternion_arithmetic():
    i, j, k = HAMILTON.i, HAMILTON.j, HAMILTON.k
    assert i * j == k and j * i == -k
    assert i * i == HAMILTON.scalar(-1)
    x = HAMILTON.elem(1, 2, 3, 4)
    assert x.nrd == 30 and x.trd == 2
    assert x * x.inverse() == HAMILTON.one
    assert (x * j).conj() == j.conj() * x.conj()
    assert i.square_scalar == -1


@given(st.sampled_from(ALGEBRAS), st.tuples(coord, coord, coord, coord), st.tuples(coord, coord, coord, coord))
def test_quaternion_laws(alg, a, b):
    x, y = alg.elem(*a), alg.elem(*b)
    assert (x * y).nrd == x.nrd * y.nrd
    assert (x * y).trd == (y * x).trd
    assert (x * y).conj() == y.conj() * x.conj()
    assert tuple(x.c) and (x * y).c == O.qmul(alg.a, alg.b, x.c, y.c)
    # Trd^2 - 4 Nrd = 4 z_0^2 where z_0 is the pure part squared
    assert x.trd ** 2 - 4 * x.nrd == 4 * x.pure_part.square_scalar


def test_norm_form_examples():
    assert [a.value for a in norm_form(HAMILTON).entries] == [1, 1, 1, 1]
    assert witt_equal(norm_form(QuaternionAlgebra(1, 7)).gw(), 0)
    nq = norm_form(QuaternionAlgebra(2, 3))
    assert [a.value for a in nq.entries] == [1, -2, -3, 6]
    assert e_n(nq.gw(), 2) == RatCoh.square(2) * RatCoh.square(3)
    assert HAMILTON.ramification() == frozenset({2, INF})
    assert QuaternionAlgebra(1, 5).is_split()


def test_phi_examples():
    i, j = HAMILTON.i, HAMILTON.j
    assert witt_equal(phi_form([i, j]), 0)
    assert witt_equal(phi_form([i, i]), 0)
    with pytest.raises(ValueError):
        phi_form([i])


@given(st.sampled_from(ALGEBRAS), pure_coords, pure_coords, pure_coords)
def test_phi_properties(alg, a, b, c):
    z1, z2, z3 = pure(alg, a), pure(alg, b), pure(alg, c)
    assume(z1.nrd != 0 and z2.nrd != 0 and z3.nrd != 0)
    assert phi_is_pfister([z1, z2])
    assert witt_equal(phi_form([z1, z2]) * pfister(z3.square_scalar), phi_form([z1, z2, z3]))
    assert in_In(phi_form([z1, z2]), 2)


def test_diag_product_examples():
    i, j = HAMILTON.i, HAMILTON.j
    assert witt_equal(diag_product_form(i, j).gw(), 0)
    res = diag_product(i, i)
    assert res.agrees and witt_equal(res.formula.gw(), 0) and res.formula.dim == 4
    two = diag_product(HAMILTON.scalar(1), HAMILTON.scalar(1))
    assert two.agrees and gw_equal(two.formula.gw(), GWElem.of(2, 2, 2, 2))
    with pytest.raises(ValueError):
        diag_product_form(HAMILTON.scalar(1), i)


@given(st.sampled_from(ALGEBRAS), pure_coords, pure_coords)
def test_diag_product_against_gram_oracle(alg, a, b):
    z1, z2 = pure(alg, a), pure(alg, b)
    assume(z1.nrd != 0 and z2.nrd != 0)
    res = diag_product(z1, z2)
    assert res.agrees
    G = O.product_gram(alg.a, alg.b, z1.c, z2.c)
    oracle = O.diagonalize(G)
    formula = [a.value for a in res.formula.entries]
    assert O.witt_same(formula, [], oracle, [])
    assert witt_equal(res.formula.gw(), diag_product_witt(z1, z2))
    assert witt_equal(res.formula.gw(), diag_product_form(z2, z1).gw())


@given(st.sampled_from(ALGEBRAS), st.integers(-6, 6).filter(bool), st.integers(-6, 6).filter(bool))
def test_scalar_product_law(alg, a, b):
    res = diag_product(alg.scalar(a), alg.scalar(b))
    assert res.agrees
    assert gw_equal(res.formula.gw(), norm_form(alg).gw().scaled(2 * a * b))


def test_trace_form_examples():
    t = trace_form_involution([HAMILTON.one], "+")
    assert t.dim == 1 and t.involution == "symplectic"
    assert gw_equal(t.form.gw(), GWElem.of(2))
    full = trace_form_involution([HAMILTON.one], "full")
    assert gw_equal(full.form.gw(), GWElem.of(2, 2, 2, 2))
    split = QuaternionAlgebra(1, 1)
    minus = trace_form_involution([split.one], "-")
    assert minus.dim == 3
    t2 = trace_form_involution([HAMILTON.one, HAMILTON.scalar(3)], "+")
    assert t2.dim == 6
    o = trace_form_involution([HAMILTON.i, HAMILTON.j], "+")
    assert o.dim == 10 and o.involution == "orthogonal"


def test_split_mixed_examples():
    x, y = GWElem.of(2), GWElem.of(3)
    one = SplitMixedElem.one()
    e = SplitMixedElem(x, y)
    assert (e * one).equals(e)
    assert (SplitMixedElem(x, GWElem.zero()) * SplitMixedElem(y, GWElem.zero())).equals(SplitMixedElem(x * y, GWElem.zero()))
    got = SplitMixedElem(GWElem.zero(), x) * SplitMixedElem(GWElem.zero(), y)
    assert got.equals(SplitMixedElem(GWElem.zero(), x * y * 2))


gw_small = st.lists(st.sampled_from([1, -1, 2, 3, -5]), min_size=1, max_size=3).map(lambda es: GWElem.of(*es))


@given(gw_small, gw_small, gw_small, gw_small, gw_small, gw_small)
def test_split_mixed_ring_laws(x1, y1, x2, y2, x3, y3):
    a, b, c = SplitMixedElem(x1, y1), SplitMixedElem(x2, y2), SplitMixedElem(x3, y3)
    assert split_mixed_mul(a, b).equals(split_mixed_mul(b, a))
    assert ((a * b) * c).equals(a * (b * c))
    g = a.to_group_ring()
    assert SplitMixedElem.from_group_ring(*g).equals(a)
    prod = group_ring_mul(a.to_group_ring(), b.to_group_ring())
    assert SplitMixedElem.from_group_ring(*prod).equals(a * b)


def test_mixed_witt_products():
    i, j, k = HAMILTON.i, HAMILTON.j, HAMILTON.k
    h = MixedWittElem.anti_hermitian(HAMILTON, i, j)
    sq_ = h * h
    assert not sq_.h_plus and not sq_.h_minus
    # two even-dimensional quaternionic pieces multiply into I^2
    assert in_In(sq_.scalar_part() - GWElem.of(1, -1) * 8, 2)
    h2 = MixedWittElem.hermitian(HAMILTON, 1, 3)
    assert in_In((h2 * h2).scalar_part() - GWElem.of(1, -1) * 8, 2)
    mixed = MixedWittElem.scalar(HAMILTON, [2]) * MixedWittElem.anti_hermitian(HAMILTON, k)
    assert mixed.h_minus[0][0] == k * 2
    with pytest.raises(ValueError):
        MixedWittElem.anti_hermitian(HAMILTON, HAMILTON.one)


def test_g_sym_degree_bound_and_routes():
    Q = QuaternionAlgebra(2, 3)
    # pairwise nonzero reduced traces, as the phi regrouping needs
    zs = [Q.i, Q.i + Q.j, Q.i + Q.k]
    for d in range(4, 6):
        assert witt_equal(g_sym_component(zs, d), 0)
    for d in range(0, 4):
        assert witt_equal(g_sym_component(zs, d), g_sym_component_lambda(zs, d))
    for d in range(2, 4):
        assert witt_equal(g_sym_component(zs, d), g_sym_component_phi(zs, d))


def test_g_sym_expected_e():
    H = HAMILTON
    assert g_sym_expected_e(H, 2, 2) == RatCoh.ramification([2, INF])
    assert g_sym_expected_e(H, 4, 2).is_zero()
    assert g_sym_expected_e(H, 3, 3) == RatCoh.real(3, 1)
    assert g_sym_expected_e(QuaternionAlgebra(2, 3), 3, 3).is_zero()
    with pytest.raises(ValueError):
        g_sym_expected_e(H, 3, 4)


def test_g_sym_e2_matches():
    for Q in (HAMILTON, QuaternionAlgebra(2, 3), QuaternionAlgebra(-1, 3)):
        zs = [Q.i, Q.j, Q.i + Q.k]
        for d in (2, 3):
            comp = g_sym_component(zs, d)
            assert e_n(comp, d) == g_sym_expected_e(Q, 3, d)


def test_filtration_examples():
    i, j = HAMILTON.i, HAMILTON.j
    assert ind2_filtration_check([i, j], 2).ok
    rep = ind2_filtration_check([i, j], 4)
    assert rep.ok and rep.level == 2
    assert ind2_filtration_check([i, j, i + j], 6).ok


def test_split_morita():
    Q = QuaternionAlgebra(1, 5)
    z = Q.j + 2 * Q.k
    res = split_morita([z])
    assert res.verified and res.form.dim == 2
    res2 = split_morita([z, Q.j * 3, Q.i + Q.j])
    assert res2.verified and res2.form.dim == 6
    with pytest.raises(NotSplitError):
        split_morita([HAMILTON.i])


def test_split_oracle():
    Q = QuaternionAlgebra(1, 5)
    zs = [Q.j, Q.i + Q.k, Q.i + 2 * Q.j]
    for d in range(0, 4):
        assert g_sym_split_oracle(zs, d)


def test_t_tau():
    for Q in (HAMILTON, QuaternionAlgebra(2, 3)):
        assert t_tau_check([Q.i, Q.j, Q.i + Q.j + Q.k]).ok
    with pytest.raises(ValueError):
        t_tau_check([HAMILTON.i, HAMILTON.i * 2, HAMILTON.j])


def test_anticommuting():
    z = HAMILTON.i + HAMILTON.j
    w = anticommuting(z)
    assert z * w == -(w * z) and w.nrd != 0


def test_json_shapes():
    assert HAMILTON.to_json() == {"a": "-1", "b": "-1"}
    assert QuaternionAlgebra.from_json(HAMILTON.to_json()) == HAMILTON
    assert HAMILTON.elem(0, 1, Fraction(1, 2), 0).to_json() == {"c": ["0", "1", "1/2", "0"]}
