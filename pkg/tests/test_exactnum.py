from __future__ import annotations

import cmath
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vertexdescent.exactnum import (
    CycNum,
    Matrix,
    binom_frac,
    cyclotomic_poly,
    euler_phi,
    format_scalar,
    nullspace,
    parse_scalar,
    rank,
    solve_linear,
    zeta_power,
)


def to_complex(x) -> complex:
    """Numerical oracle: evaluate the power-basis coordinates at exp(2 pi i / m)."""
    if isinstance(x, CycNum):
        z = cmath.exp(2j * cmath.pi / x.m)
        return sum(complex(c) * z ** k for k, c in enumerate(x.coeffs))
    if isinstance(x, complex):
        return x
    return complex(Fraction(x))


CONDUCTORS = (3, 4, 5, 8, 12)
small = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def cyclotomic(draw):
    m = draw(st.sampled_from(CONDUCTORS))
    return CycNum(m, draw(st.lists(small, min_size=euler_phi(m), max_size=euler_phi(m))))


def close(a, b) -> bool:
    return abs(to_complex(a) - to_complex(b)) < 1e-9


def test_cyclotomic_polynomials_match_known_values():
    assert cyclotomic_poly(1) == (-1, 1)
    assert cyclotomic_poly(4) == (1, 0, 1)
    assert cyclotomic_poly(6) == (1, -1, 1)
    assert cyclotomic_poly(12) == (1, 0, -1, 0, 1)
    assert [euler_phi(m) for m in (1, 2, 3, 4, 5, 6, 12)] == [1, 1, 2, 2, 4, 2, 4]


def test_roots_of_unity_and_rational_collapse():
    i = zeta_power(4, 1)
    assert i * i == -1 and isinstance(i * i, Fraction)
    assert zeta_power(4, 4) == 1
    assert zeta_power(3, 1) + zeta_power(3, 2) == -1
    assert zeta_power(6, 3) == -1
    assert zeta_power(2, 1) == -1


def test_mixed_conductors_promote_to_lcm():
    x = zeta_power(4, 1) * zeta_power(6, 1)
    assert x.m == 12
    assert x == zeta_power(12, 5)
    assert close(x, cmath.exp(2j * cmath.pi * 5 / 12))


@settings(max_examples=60, deadline=None)
@given(cyclotomic(), cyclotomic(), cyclotomic())
def test_field_axioms_against_numerical_embedding(a, b, c):
    assert close(a + b, to_complex(a) + to_complex(b))
    assert close(a * b, to_complex(a) * to_complex(b))
    assert (a + b) * c == a * c + b * c
    assert a * (b * c) == (a * b) * c
    if a:
        assert a * (1 / a) == 1
        assert close(1 / a, 1 / to_complex(a))


@settings(max_examples=60, deadline=None)
@given(cyclotomic())
def test_scalar_text_roundtrip(a):
    assert parse_scalar(format_scalar(a)) == a


def test_parse_scalar_rejects_floats_and_garbage():
    with pytest.raises(ValueError):
        parse_scalar(0.5)
    with pytest.raises(ValueError):
        parse_scalar("1.5")
    assert parse_scalar("-3/2") == Fraction(-3, 2)


def test_generalized_binomials():
    assert binom_frac(5, 2) == 10
    assert binom_frac(-1, 3) == -1
    assert binom_frac(Fraction(1, 2), 2) == Fraction(-1, 8)
    assert binom_frac(3, 5) == 0
    assert binom_frac(3, -1) == 0


@settings(max_examples=80, deadline=None)
@given(st.fractions(min_value=-8, max_value=8, max_denominator=6), st.integers(min_value=1, max_value=7))
def test_pascal_rule_for_rational_top(q, i):
    assert binom_frac(q + 1, i) == binom_frac(q, i) + binom_frac(q, i - 1)


def test_matrix_inverse_and_solve():
    M = Matrix([[1, 2], [3, 4]])
    assert M.det() == -2
    assert M @ M.inverse() == Matrix.identity(2)
    sol = solve_linear(Matrix([[1, 1]]), Matrix([[2]]))
    assert sol.consistent and Matrix([[1, 1]]) @ sol.particular == Matrix([[2]])
    assert nullspace(Matrix([[1, 1]])) == ((-1, 1),)
    assert rank([[1, 2], [2, 4]]) == 1
    assert not solve_linear(Matrix([[0, 0]]), Matrix([[1]])).consistent
    with pytest.raises(ZeroDivisionError):
        Matrix([[1, 2], [2, 4]]).inverse()


def test_cyclotomic_linear_algebra():
    i = zeta_power(4, 1)
    M = Matrix([[i, 1], [0, -i]])
    assert M @ M.inverse() == Matrix.identity(2)
    assert (M ** 4) @ (M ** -4) == Matrix.identity(2)
    # (zeta_4, -1) spans the kernel of [1, zeta_4]
    (v,) = nullspace(Matrix([[1, i]]))
    assert v[0] + i * v[1] == 0
