from __future__ import annotations

from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vertexdescent.diffring import (
    CommutativeVertexRing,
    FracLaurent,
    LaurentRing,
    cvr_nproduct,
    diffring_aut_test,
    galois_apply,
    parse_laurent,
    parse_ring,
    t_power,
    vacuum_kernel_test,
)
from vertexdescent.exactnum import binom_frac, zeta_power
from vertexdescent.vacore import borcherds_check, commutativity_check, creation_check


def d_dt(f: FracLaurent) -> FracLaurent:
    """Oracle: the ordinary derivative term by term."""
    return FracLaurent({q - 1: q * c for q, c in f.terms.items() if q}, f.m)


def d_dt_power(f: FracLaurent, i: int) -> FracLaurent:
    for _ in range(i):
        f = d_dt(f)
    return f * Fraction(1, factorial(i))


@st.composite
def laurent(draw, m=6):
    n = draw(st.integers(min_value=0, max_value=3))
    terms = {}
    for _ in range(n):
        q = Fraction(draw(st.integers(min_value=-3 * m, max_value=3 * m)), m)
        terms[q] = draw(st.fractions(min_value=-4, max_value=4, max_denominator=3))
    return FracLaurent(terms, m)


def test_ring_tags():
    assert parse_ring("R").m == 1
    assert parse_ring("S6").m == 6
    with pytest.raises(ValueError):
        parse_ring("T2")


def test_monomials_and_membership():
    S2 = LaurentRing(2)
    ms = S2.monomials(-1, 1)
    assert [next(iter(x.terms)) for x in ms] == [Fraction(k, 2) for k in range(-2, 3)]
    assert S2.contains(t_power(Fraction(1, 2)))
    assert not LaurentRing(1).contains(t_power(Fraction(1, 2)))
    with pytest.raises(ValueError):
        LaurentRing(1).t(Fraction(1, 3))


def test_parse_and_format_roundtrip():
    f = parse_laurent("3*t^(1/2) - t^-1 + 2", 2)
    assert f == FracLaurent({Fraction(1, 2): 3, Fraction(-1): -1, Fraction(0): 2}, 2)
    assert parse_laurent(str(f), 2) == f
    assert parse_laurent("Z4[0,1]*t", 1) == t_power(1, zeta_power(4, 1))
    with pytest.raises(ValueError):
        parse_laurent("t^", 1)


def test_arithmetic_promotes_denominators():
    f = t_power(Fraction(1, 2), m=2) * t_power(Fraction(1, 3), m=3)
    assert f.m == 6 and f == t_power(Fraction(5, 6), m=6)
    assert (t_power(2) + t_power(2) * -1) == 0
    assert t_power(3).inverse() == t_power(-3)
    with pytest.raises(ZeroDivisionError):
        (t_power(1) + 1).inverse()


@settings(max_examples=80, deadline=None)
@given(laurent(), st.integers(min_value=0, max_value=6))
def test_hasse_schmidt_matches_divided_powers(f, i):
    assert f.hs(i) == d_dt_power(f, i)


@settings(max_examples=60, deadline=None)
@given(laurent(), laurent(), st.integers(min_value=0, max_value=6))
def test_leibniz_rule(f, g, m):
    rhs = FracLaurent({}, 6)
    for i in range(m + 1):
        rhs = rhs + f.hs(i) * g.hs(m - i)
    assert (f * g).hs(m) == rhs


@settings(max_examples=60, deadline=None)
@given(laurent(), st.integers(min_value=0, max_value=6), st.integers(min_value=0, max_value=6))
def test_iterativity(f, i, j):
    assert f.hs(j).hs(i) == f.hs(i + j) * binom_frac(i + j, i)


def test_constants_are_the_vacuum_kernel():
    assert vacuum_kernel_test(FracLaurent.const(Fraction(7)))
    assert not vacuum_kernel_test(t_power(Fraction(1, 2), m=2))


def test_cvr_products():
    r, s = t_power(2), t_power(-1)
    assert cvr_nproduct(r, -1, s) == t_power(1)
    assert cvr_nproduct(r, -2, s) == FracLaurent.const(Fraction(2))
    assert not cvr_nproduct(r, 0, s)


def test_commutative_vertex_ring_axioms_on_s2_sample():
    C = CommutativeVertexRing(2)
    B = C.basis(-1, 1)
    for u in B:
        assert creation_check(C, u)
        for v in B:
            assert commutativity_check(C, u, v)
            for w in B[:2]:
                for m, n, p in [(-1, -1, -1), (-2, -1, 0), (0, -2, -1), (-1, -2, -2)]:
                    assert borcherds_check(C, u, v, w, m, n, p)


def test_galois_action():
    f = t_power(Fraction(1, 4), m=4)
    assert galois_apply(1, f) == t_power(Fraction(1, 4), zeta_power(4, 1), 4)
    assert galois_apply(4, f) == f
    # gamma fixes R
    assert galois_apply(1, t_power(3), 4) == t_power(3)
    with pytest.raises(ValueError):
        galois_apply(1, t_power(Fraction(1, 3), m=3), 2)


def test_galois_commutes_with_derivation():
    f = parse_laurent("t^(1/2) + 3*t^(-3/2)", 2)
    for i in range(4):
        assert galois_apply(1, f.hs(i), 2) == galois_apply(1, f, 2).hs(i)


def test_only_identity_like_map_is_a_differential_automorphism():
    assert diffring_aut_test(1, 1)
    assert not diffring_aut_test(2, 1)
    assert not diffring_aut_test(1, -1)
    assert not diffring_aut_test(1, 2)
    with pytest.raises(ValueError):
        diffring_aut_test(0, 1)
