import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wittforge import etale as E
from wittforge.clifford import (
    associativity_check,
    build_clifford,
    d3_generators,
    hilbert90_solve,
    relation_e_coefficients,
)
from wittforge.fields import QuadField
from wittforge.hermitian import HAMILTON, QuaternionAlgebra
from wittforge.suites import random_d3_input


def test_small_clifford_algebras():
    cl = build_clifford(None, 3)
    e = cl.gen(0)
    assert e * e == cl.one * 3
    assert cl.dim == 2

    cl = build_clifford(None, 1, -1)
    e1, e2 = cl.gen(0), cl.gen(1)
    assert e1 * e2 == -(e2 * e1)
    assert (e1 * e2) * (e1 * e2) == cl.one  # -b1 b2
    assert e1.reverse() == e1
    assert (e1 * e2).reverse() == -(e1 * e2)
    assert len(cl.basis()) == 4


def test_non_invertible_entry():
    with pytest.raises(ValueError):
        build_clifford(None, 1, 0)
    K = QuadField(-1)
    with pytest.raises(ValueError):
        build_clifford(K, K.elem(0, 0), 1)


def test_monomial_signs():
    cl = build_clifford(None, 2, 3, 5)
    # e_2 e_1 = -e_1 e_2 and e_1 e_1 = 2
    assert cl.monomial_product(0b10, 0b01) == (-1, 0b11)
    assert cl.monomial_product(0b01, 0b01) == (2, 0)


@pytest.mark.parametrize("c", [-1, 2, -5])
def test_associativity_dimension_64(c):
    K = QuadField(c)
    cl = build_clifford(K, 1, -1, 2, 3, K.elem(1, 1), -3)
    assert cl.dim == 64
    assert associativity_check(cl, trials=3, seed=c)


def test_hamilton_generators():
    Q = HAMILTON
    zs = [Q.i, Q.j, Q.i + Q.j + Q.k]
    g = d3_generators(zs)
    assert g.ok, g.failures()
    assert [x * x for x in g.xi] == [g.cl.one * v for v in (-1, -1, -3)]
    u12 = g.u_pair(1, 0)
    assert u12 * u12 == g.xi[0] * g.xi[1] * -2  # Trd(ij) = 0
    assert relation_e_coefficients(zs, 2, 0, 1) == [0, 1, 1, 1]


def test_generator_input_checks():
    Q = HAMILTON
    with pytest.raises(ValueError):
        d3_generators([Q.i, Q.i * 2, Q.j])
    with pytest.raises(ValueError):
        d3_generators([Q.one + Q.i, Q.j, Q.k])
    with pytest.raises(ValueError):
        d3_generators([Q.i])


def test_generators_random_algebras():
    rng = random.Random(5)
    for _ in range(4):
        g = d3_generators(random_d3_input(rng))
        assert g.ok, g.failures()


def test_generators_with_four_quaternions():
    Q = QuaternionAlgebra(2, 3)
    zs = [Q.i, Q.j, Q.i + Q.k, Q.j + 2 * Q.k]
    g = d3_generators(zs)
    assert g.ok, g.failures()
    assert len(g.relations["c"]) == 3


def _unit(L, rng):
    x = L.random_elem(rng)
    while not x.is_unit():
        x = L.random_elem(rng)
    return x


def test_hilbert90_examples():
    L = E.EtaleAlgebra(Fraction(2), Fraction(3), Fraction(5))
    assert hilbert90_solve(L.one, E.S_FLIP) == L.scalar(2)
    x = hilbert90_solve(-L.one, E.S_FLIP)
    assert x == L.gen(E.XI1) * 2
    assert -x.galois(E.S_FLIP) == x
    with pytest.raises(ValueError):
        hilbert90_solve(L.scalar(2), E.S_FLIP)


def test_hilbert90_random():
    L = E.EtaleAlgebra(Fraction(-1), Fraction(3), Fraction(7))
    rng = random.Random(11)
    for g in (E.S_FLIP, E.T_FLIP, E.TAU_FLIP, E.ST):
        w = _unit(L, rng)
        c = w / w.galois(g)
        x = hilbert90_solve(c, g, rng=rng)
        assert x == c * x.galois(g)


def test_hilbert90_with_fixed_group():
    L = E.EtaleAlgebra(Fraction(-1), Fraction(3), Fraction(7))
    rng = random.Random(3)
    w = E.trace(_unit(L, rng), E.subgroup(E.TAU_FLIP))
    c = w / w.galois(E.S_FLIP)
    x = hilbert90_solve(c, E.S_FLIP, (E.TAU_FLIP,), rng)
    assert x == c * x.galois(E.S_FLIP)
    assert x.is_fixed_by(E.TAU_FLIP)


def test_etale_basics():
    L = E.EtaleAlgebra(Fraction(2), Fraction(3), Fraction(5))
    assert L.is_field()
    assert not E.EtaleAlgebra(Fraction(2), Fraction(3), Fraction(6)).is_field()
    xi = L.gen(E.XI)
    assert xi * xi == 2
    assert xi.galois(E.TAU_FLIP) == -xi
    assert xi.galois(E.S_FLIP) == xi
    assert sorted(E.subgroup(E.T_FLIP, E.S_FLIP ^ E.TAU_FLIP)) == sorted({0, E.T_FLIP, E.S_FLIP ^ E.TAU_FLIP, E.S_FLIP ^ E.TAU_FLIP ^ E.T_FLIP})
    y = L.elem([1, 2, 0, 1, 0, 0, 3, 1])
    assert E.norm(y, E.subgroup(E.XI, E.XI1, E.XI2)).is_rational()
    assert (y * y.inverse()) == 1


@given(st.lists(st.integers(-4, 4), min_size=16, max_size=16), st.sampled_from([1, 2, 4, 3, 6, 7]))
def test_galois_is_a_ring_map(cs, g):
    L = E.EtaleAlgebra(Fraction(-3), Fraction(2), Fraction(5))
    x, y = L.elem(cs[:8]), L.elem(cs[8:])
    assert (x * y).galois(g) == x.galois(g) * y.galois(g)
    assert (x + y).galois(g) == x.galois(g) + y.galois(g)
    assert x.galois(g).galois(g) == x


def test_galois_commutes_with_matrix_products():
    inst = E.a3d3_instance(2)
    m = E.a3d3_matrices(inst)
    for g in (E.S_FLIP, E.T_FLIP, E.TAU_FLIP):
        assert (m.Q_s * m.Y).galois(g) == m.Q_s.galois(g) * m.Y.galois(g)
        assert m.Y.inverse().galois(g) == m.Y.galois(g).inverse()


def test_exterior_square_is_multiplicative():
    inst = E.a3d3_instance(4)
    m = E.a3d3_matrices(inst)
    P, R = m.P_s, m.P_t
    assert E.exterior_square(P * R) == E.exterior_square(P) * E.exterior_square(R)


@pytest.mark.parametrize("seed", range(3))
def test_a3d3_instances(seed):
    inst = E.a3d3_instance(seed)
    assert all(inst.relations().values())
    assert E.A3D3Instance.from_json(inst.to_json()) == inst
    rep = E.a3d3_verify(inst)
    assert rep.ok, [c.name for c in rep.failures()]
    alpha, beta = rep.quaternion
    assert alpha == inst.L.delta * inst.L.delta1
    for z in rep.z:
        assert z[0] == 0
        assert -alpha * z[1] ** 2 - beta * z[2] ** 2 + alpha * beta * z[3] ** 2 != 0


def test_bare_third_block_breaks_the_t_identity():
    # without its xi xi_2 factor the third block of Y breaks the t identity
    inst = E.a3d3_instance(0)
    t = E.T_FLIP
    for bare, expect in ((False, True), (True, False)):
        m = E.a3d3_matrices(inst, bare_y3=bare)
        lhs = m.Y.inverse() * m.Q_t * m.Y.galois(t)
        assert (lhs == E.EtaleMatrix.identity(inst.L, 6) * m.c[t]) is expect


def test_descent_is_informational():
    rep = E.a3d3_verify(E.a3d3_instance(1))
    assert rep.descent_matches()[:2] == [True, True]
    assert rep.descent_matches()[2] is False
    assert "descent_matches_z" in rep.to_json()
