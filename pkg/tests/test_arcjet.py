from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from vertexdescent.arcjet import (
    JetPresentation,
    Poly,
    adjunction_extend,
    collapses,
    expected_counts,
    groebner,
    ideal_member,
    iterativity_check,
    load_jet,
    parse_poly,
    prolong,
    stability_check,
)
from vertexdescent.diffring import FracLaurent, t_power


def test_free_ring_has_zero_ideal():
    ring, ideal = prolong(JetPresentation("k", ("x",), ()), 2)
    assert ring.names == ["x[0]", "x[1]", "x[2]"]
    assert ideal.generators == []
    assert not ideal_member(ring.var("x", 1), ideal)
    assert ideal_member(ring.var("x", 1), ideal).answer == "no"


def test_prolonged_relations():
    ring, ideal = prolong(JetPresentation("Z[t]", (), ("t",)), 1)
    assert [ring.format(g) for g in ideal.generators] == ["t", "1"]
    ring, ideal = prolong(JetPresentation("k", ("x",), ("x^2",)), 1)
    x0, x1 = ring.var("x", 0), ring.var("x", 1)
    assert ideal.generators == [x0 * x0, x0 * x1 * 2]


def test_membership_certificates():
    ring, ideal = prolong(JetPresentation("k", ("x",), ("x^2",)), 1)
    target = ring.var("x", 0) * ring.var("x", 1)
    mem = ideal_member(target, ideal)
    assert mem and mem.answer == "yes"
    assert mem.certificate[0] == Poly(ring.nvars)
    assert mem.certificate[1] == ring.const(Fraction(1, 2))
    assert not ideal_member(ring.var("x", 0), ideal)


def test_collapse_has_integral_certificate():
    p, N = load_jet("collapse.jet")
    assert N == 1
    ring, ideal = prolong(p, N)
    mem = collapses(ideal)
    assert mem.answer == "yes" and mem.integral
    total = sum((c * g for c, g in zip(mem.certificate, ideal.generators)), Poly(ring.nvars))
    assert total == ring.const(1)


def test_resource_limit_is_inconclusive():
    ring, ideal = prolong(JetPresentation("k", ("x", "y"), ("x^3 - y^2", "x*y - 1")), 2)
    mem = ideal_member(ring.var("x", 2), ideal, max_steps=3)
    assert mem.answer == "inconclusive" and not mem


def test_groebner_of_principal_ideal():
    f = parse_poly("x^2 - 1", ["x"])
    basis, cof = groebner([f], 1)
    assert basis == [f]


def test_adjunction_extension_values():
    p = JetPresentation("k", ("x",), ())
    ext = adjunction_extend({"x": "t"}, p, 2)
    assert ext and ext.table == {"x[0]": t_power(1), "x[1]": FracLaurent.const(1), "x[2]": FracLaurent({})}
    ext = adjunction_extend({"x": 1}, JetPresentation("k", ("x",), ("x^2 - 1",)), 3)
    assert ext and not ext.violations
    ext = adjunction_extend({"x": "t"}, JetPresentation("k", ("x",), ("x^2 - 1",)), 1)
    assert not ext


def test_adjunction_fails_for_collapsed_algebra():
    p = JetPresentation("Z[t]", (), ("t",))
    ext = adjunction_extend({}, p, 1, base_map=0)
    assert not ext
    assert [(label, str(v)) for label, v in ext.violations] == [("D_1(t) = 1", "1")]
    assert len(adjunction_extend({}, p, 1).violations) == 2
    with pytest.raises(ValueError):
        adjunction_extend({}, JetPresentation("k", ("x",), ()), 1)


@pytest.mark.parametrize("N", [0, 1, 3])
def test_iterativity_and_stability(N):
    p = JetPresentation("Q[t]", ("x", "y"), ("x*y - t", "x^2 + t*y"))
    ring, ideal = prolong(p, N)
    fails, _ = iterativity_check(ring, 3 if N < 3 else 2)
    assert fails == []
    assert stability_check(ideal) == []
    assert (ring.nvars, len(ideal.generators)) == expected_counts(p, N)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=3, max_size=3), st.integers(0, 3))
def test_hs_matches_ordinary_derivative_on_t(coeffs, i):
    # on polynomials in t alone D_i is d^i/dt^i / i!
    ring, _ = prolong(JetPresentation("Q[t]", (), ()), 0)
    f = sum((ring.var("t") ** k * c for k, c in enumerate(coeffs)), Poly(ring.nvars))
    expected = Poly(ring.nvars)
    for k, c in enumerate(coeffs):
        if k >= i:
            falling = 1
            for r in range(i):
                falling *= k - r
            fact = 1
            for r in range(1, i + 1):
                fact *= r
            expected = expected + ring.var("t") ** (k - i) * Fraction(c * falling, fact)
    assert ring.hs(f, i) == expected


def test_presentation_errors():
    with pytest.raises(ValueError):
        JetPresentation("R", ("x",), ())
    with pytest.raises(ValueError):
        JetPresentation("k", ("x", "x"), ())
    with pytest.raises(ValueError):
        JetPresentation("k", ("t",), ())
    with pytest.raises(ValueError):
        prolong(JetPresentation("k", ("x",), ()), -1)
