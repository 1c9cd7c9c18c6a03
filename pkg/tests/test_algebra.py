from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import P
from zerocenter.algebra import (
    Deformation,
    GaussRational,
    Polynomial,
    affine_in,
    bad_epsilons,
    common_right_factors,
    compose,
    derivative,
    discriminant_t,
    eval_poly,
    express_in,
    parse_coefficient,
    poly_gcd,
    right_factors,
)
from zerocenter.errors import CoefficientParseError

I = GaussRational(0, 1)


@pytest.mark.parametrize(
    "text, expected",
    [
        ("3", GaussRational(3)),
        ("-1/2", GaussRational(Fraction(-1, 2))),
        ("1/2+3/4i", GaussRational(Fraction(1, 2), Fraction(3, 4))),
        ("-i", GaussRational(0, -1)),
        ("2i", GaussRational(0, 2)),
        ("1/2i", GaussRational(0, Fraction(1, 2))),
        ("1-i", GaussRational(1, -1)),
    ],
)
def test_parse_coefficient(text, expected):
    assert parse_coefficient(text) == expected


@pytest.mark.parametrize("bad", ["0.5", "1e3", "", "1/0", "abc", "1/2+0.5i"])
def test_parse_rejects(bad):
    with pytest.raises(CoefficientParseError):
        parse_coefficient(bad)


def test_gauss_arithmetic():
    a = GaussRational(1, 2)
    b = GaussRational(Fraction(1, 3), -1)
    assert (a * b) / b == a
    assert a - a == GaussRational(0)
    assert I * I == GaussRational(-1)
    assert complex(a) == 1 + 2j


def test_eval():
    p = P(1, 0, 1)
    assert eval_poly(p, GaussRational(2)) == GaussRational(5)
    assert eval_poly(p, I) == GaussRational(0)
    assert eval_poly(P(0, 0, 0, 0, 0, 0, 1), 1) == 1
    assert abs(p(1j)) < 1e-15


def test_derivative():
    assert derivative(P(0, 0, 0, 0, 0, 0, 1)) == P(0, 0, 0, 0, 0, 6)
    assert derivative(P(7)).is_zero()
    assert derivative(P(0, 0, 1, 1)) == P(0, 2, 3)


def test_compose():
    assert compose(P(0, 0, 1), P(0, 0, 0, 1)) == P(0, 0, 0, 0, 0, 0, 1)
    q = P(1, 2, 3)
    assert compose(P(0, 1), q) == q
    assert compose(P(5, 3, 2), P(0, 0, 1)) == P(5, 0, 3, 0, 2)


def test_right_factors():
    assert right_factors(P(0, 0, 0, 0, 0, 0, 1)) == [P(0, 0, 1), P(0, 0, 0, 1)]
    assert right_factors(P(0, 0, 0, 0, 1)) == [P(0, 0, 1)]
    assert right_factors(P(0, 1, 0, 0, 0, 1)) == []


def test_express_in():
    assert express_in(P(5, 0, 3, 0, 2), P(0, 0, 1)) == P(5, 3, 2)
    assert express_in(P(0, 0, 0, 0, 0, 0, 1), P(0, 0, 0, 1)) == P(0, 0, 1)
    assert express_in(P(0, 0, 1, 1), P(0, 0, 1)) is None


def test_common_right_factors():
    assert common_right_factors(P(0, 0, 0, 0, 0, 0, 1), P(0, 0, 1, 1)) == []
    assert common_right_factors(P(0, 0, 0, 0, 1), P(1, 0, 1, 0, 1)) == [P(0, 0, 1)]
    assert common_right_factors(P(0, 0, 0, 0, 1), P(3, 0, 0, 0, 2)) == [P(0, 0, 1), P(0, 0, 0, 0, 1)]


def test_affine_in():
    assert affine_in(P(3, 0, 0, 0, 2), P(0, 0, 0, 0, 1)) == (GaussRational(2), GaussRational(3))
    assert affine_in(P(0, 0, 1), P(0, 0, 0, 0, 1)) is None


def test_discriminant_examples():
    D = discriminant_t(Deformation(P(0, 0, 1), P(0)))
    p = D.at_eps(0)
    assert p.degree == 1 and p.coeff(0) == GaussRational(0)
    D = discriminant_t(Deformation(P(0, -3, 0, 1), P(0)))
    p = D.at_eps(0)
    assert p(GaussRational(2)) == 0 and p(GaussRational(-2)) == 0 and p.degree == 2
    D = discriminant_t(Deformation(P(0, 0, 0, 0, 1), P(0, 0, 1)))
    assert D.at_eps(0)(GaussRational(0)) == 0


def test_bad_epsilons_examples():
    bad = bad_epsilons(Deformation(P(0, 0, 0, 0, 1), P(0, 0, 1, 0, 1)))
    assert bad.leading_vanishing == (GaussRational(-1),) or list(bad.leading_vanishing) == [GaussRational(-1)]
    assert any(abs(e) < 1e-9 for e in bad.degenerate)
    bad = bad_epsilons(Deformation(P(0, 0, 1), P(0)))
    assert not bad.leading_vanishing and not bad.degenerate
    bad = bad_epsilons(Deformation(P(0, -3, 0, 1), P(0, 1)))
    # critical values of z^3 + (eps - 3) z collide when eps = 3
    assert any(abs(e - 3) < 1e-9 for e in bad.degenerate)


# --- properties ----------------------------------------------------------------
small = st.integers(-3, 3)


def polys(min_deg=0, max_deg=3):
    return st.lists(small, min_size=min_deg + 1, max_size=max_deg + 1).map(lambda c: P(*c))


def nonconst(max_deg=3):
    return st.builds(
        lambda c, top: P(*(c + [top])),
        st.lists(small, min_size=1, max_size=max_deg),
        st.sampled_from([-2, -1, 1, 2, 3]),
    )


@settings(max_examples=40, deadline=None)
@given(polys(), nonconst())
def test_express_compose_round_trip(outer, h):
    p = compose(outer, h)
    q = express_in(p, h)
    assert q is not None and compose(q, h) == p


@settings(max_examples=40, deadline=None)
@given(polys(), polys())
def test_chain_rule(a, b):
    assert derivative(compose(a, b)) == compose(derivative(a), b) * derivative(b)


@settings(max_examples=30, deadline=None)
@given(nonconst(3), nonconst(2))
def test_right_factor_invariants(outer, inner):
    p = compose(outer, inner)
    if p.degree < 2:
        return
    fs = right_factors(p)
    assert len(set(fs)) == len(fs)
    for h in fs:
        assert 1 < h.degree < p.degree and p.degree % h.degree == 0
        assert h.lc() == GaussRational(1) and h.coeff(0) == GaussRational(0)
        assert compose(express_in(p, h), h) == p
    if 1 < inner.degree < p.degree:
        assert inner.normalized() in fs


@settings(max_examples=20, deadline=None)
@given(nonconst(3), polys(0, 2), small, small)
def test_discriminant_matches_gcd(f, g, t, e):
    d = Deformation(f, g)
    D = discriminant_t(d)
    F = d.at(GaussRational(e))
    if F.degree < d.n or F.degree < 1:
        return
    G = F - Polynomial.constant(GaussRational(t))
    repeated = poly_gcd(G, G.derivative()).degree >= 1
    assert (D(GaussRational(t), GaussRational(e)) == 0) == repeated
