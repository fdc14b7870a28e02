from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wittforge.greek import (
    CHARS,
    GW,
    INTEGERS,
    PropertyViolation,
    alpha_op,
    alpha_ops,
    certify_pfister_gw,
    elementary_symmetric,
    is_pfister,
    pi_scaled_pfister,
    sym_sum_apply,
    sym_sum_brute,
)
from wittforge.qform import CharVector, GWElem, gw_equal, one_dim, pfister
from wittforge.series import GreekLetter, Series, inverse, gamma_letter, lambda_letter, pi_letter

T = 10


def test_integer_lambda():
    assert alpha_op(INTEGERS, lambda_letter(T), 3, 5) == 10
    assert INTEGERS.lam(2, -1) == 1
    assert INTEGERS.lam(3, -2) == -4
    # gamma^d(n) = binom(n+d-1, d)
    assert [alpha_op(INTEGERS, gamma_letter(T), d, 3) for d in range(5)] == [comb(d + 2, d) for d in range(5)]


def test_pi_on_integers():
    assert alpha_op(INTEGERS, pi_letter(1, T), 2, 1) == -1
    assert alpha_op(INTEGERS, pi_letter(1, T), 1, 7) == 7
    assert alpha_ops(INTEGERS, gamma_letter(T), 4, 1) == [1, 1, 1, 1, 1]


def test_degree_bound():
    with pytest.raises(ValueError):
        alpha_ops(INTEGERS, pi_letter(1, 3), 4, 2)


def test_lambda_on_forms():
    q = GWElem.of(1, 2, 3)
    assert gw_equal(alpha_op(GW, lambda_letter(T), 2, q), GWElem.of(2, 3, 6))
    assert gw_equal(alpha_op(GW, lambda_letter(T), 3, q), GWElem.of(6))
    assert gw_equal(alpha_op(GW, lambda_letter(T), 4, q), 0)


def test_is_pfister_examples():
    assert is_pfister(GW, pfister(2))[0]
    assert is_pfister(GW, pfister(-1))[0]
    assert is_pfister(GW, GWElem.zero())[0]
    ok, reason = is_pfister(GW, GWElem.of(1, 1))
    assert not ok and "lambda^2" in reason
    ok, _ = is_pfister(GW, GWElem.one())
    assert not ok
    with pytest.raises(ValueError):
        is_pfister(GW, pfister(2), n=2)


def test_pfister_certificates():
    cert = certify_pfister_gw(-1, 2, 3)
    assert cert.level == 3 and len(cert.factors) == 3
    assert gw_equal(cert.element, pfister(-1, 2, 3))


def test_pi_scaled_pfister_example():
    assert gw_equal(pi_scaled_pfister(1, 2, -1, pfister(2)), pfister(-1, 2))
    with pytest.raises(ValueError):
        pi_scaled_pfister(1, 1, -1, pfister(2))


def test_pi_scaled_pfister_rejects_non_pfister():
    # <1,1> - <2> - <3> is not Pfister; the closed form must fail
    with pytest.raises(PropertyViolation):
        pi_scaled_pfister(1, 2, -1, GWElem.of(1, 1) - GWElem.of(2, 3))


def test_elementary_symmetric_integers():
    assert elementary_symmetric(INTEGERS, [1, 2, 3], 2) == 11
    assert sym_sum_brute(INTEGERS, [1, 2, 3, 4], 3) == 50


def test_char_provider_matches_gw():
    x = GWElem.of(1, -2, 3) - GWElem.of(6)
    cv = CharVector.from_gw(x)
    for letter in (lambda_letter(T), gamma_letter(T), pi_letter(2, T)):
        via_gw = alpha_ops(GW, letter, 6, x)
        via_chars = alpha_ops(CHARS, letter, 6, cv)
        assert all(gw_equal(a, b.to_gw()) for a, b in zip(via_gw, via_chars))


classes = st.sampled_from([1, -1, 2, -2, 3, -3, 5, 6, -6, 7, 10])


@given(st.lists(classes, min_size=1, max_size=5), st.integers(1, 6))
def test_lambda_of_sum_of_lines(entries, d):
    xs = [one_dim(a) for a in entries]
    got = sym_sum_apply(GW, lambda_letter(T), d, xs)
    assert gw_equal(got, sym_sum_brute(GW, xs, d))


@given(st.lists(classes, min_size=1, max_size=4), st.integers(1, 6), st.integers(1, 3))
def test_pi_of_sum_of_pfister_elements(entries, d, n):
    # pi_n^d is additive in the right sense: on sums of n-Pfister elements it is e_d
    xs = [pfister(a, *[-1] * (n - 1)) for a in entries]
    got = sym_sum_apply(GW, pi_letter(n, T), d, xs)
    assert gw_equal(got, elementary_symmetric(GW, xs, d))


@given(classes, st.integers(2, 6), st.integers(1, 3), st.lists(classes, min_size=1, max_size=3))
def test_pi_scaled_closed_form(a, d, n, gens):
    x = pfister(*(gens + [-1] * n)[:n])
    pi_scaled_pfister(n, d, a, x)


@given(st.lists(classes, min_size=1, max_size=6), st.lists(classes, max_size=3), st.integers(1, 6))
def test_lambda_total_is_multiplicative(pos, neg, d):
    x = GWElem.of(*pos) - (GWElem.of(*neg) if neg else GWElem.zero())
    y = GWElem.of(3, -5)
    lx = alpha_ops(GW, lambda_letter(T), d, x)
    ly = alpha_ops(GW, lambda_letter(T), d, y)
    lxy = alpha_ops(GW, lambda_letter(T), d, x + y)
    conv = GWElem.zero()
    for i in range(d + 1):
        conv = conv + lx[i] * ly[d - i]
    assert gw_equal(lxy[d], conv)


@given(st.lists(st.integers(-3, 3), min_size=5, max_size=5), st.integers(-4, 6), st.integers(1, 5))
def test_integer_alpha_is_power_of_one_plus_letter(tail, m, d):
    # on the integers every element is a sum of lines, so alpha_t(m) = (1 + alpha(t))^m
    letter = GreekLetter.from_coeffs([0, 1] + tail, 6)
    base = Series.one(6) + letter.series
    s = Series.one(6)
    for _ in range(abs(m)):
        s = s * base
    if m < 0:
        s = inverse(s)
    assert alpha_op(INTEGERS, letter, d, m) == s.coeffs[d]
