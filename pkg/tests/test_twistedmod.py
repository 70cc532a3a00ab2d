from __future__ import annotations

from fractions import Fraction

import pytest

from vertexdescent.affine import F1Map
from vertexdescent.diffring import FracLaurent, t_power
from vertexdescent.exactnum import Matrix
from vertexdescent.liedata import abelian
from vertexdescent.loop import EigenspaceError
from vertexdescent.twistedmod import (
    LoopMap,
    TwistedState,
    assignments_equal,
    commutator_report,
    identity_assignment,
    pullback,
    support_report,
    twisted_fock_build,
    untwisted_comparison,
)

HALF = Fraction(1, 2)
NEG = Matrix([[-1]])


def neg_fock():
    return twisted_fock_build(abelian(1), NEG, 2)


def loop_map(W, matrix, trans):
    return LoopMap(W.L, W.L, F1Map(matrix, tuple(FracLaurent.coerce(x) for x in trans)))


def test_half_integer_modes_on_highest_weight_vector():
    W = neg_fock()
    w = W.vacuum
    assert W.act(0, HALF, W.act(0, -HALF, w)) == w * HALF
    assert not W.act(0, HALF, w)
    with pytest.raises(EigenspaceError):
        W.act(0, 1, w)
    # three creation modes below -1 on depth <= 2 states: 1 + 3 + 6
    assert len(W.states(2, -Fraction(5, 2))) == 10


def test_level_scales_commutator():
    W = twisted_fock_build(abelian(1), NEG, 2, Fraction(3))
    assert W.act(0, Fraction(3, 2), W.act(0, -Fraction(3, 2), W.vacuum)) == W.vacuum * Fraction(9, 2)


def test_module_commutators_and_support():
    A = identity_assignment(neg_fock())
    assert commutator_report(A).passed
    rep = support_report(A)
    assert rep.passed and rep.tested == 17


def test_swap_twist_mixes_integer_and_half_modes():
    swap = Matrix([[0, 1], [1, 0]])
    W = twisted_fock_build(abelian(2), swap, 2)
    assert sorted(W.weights) == [0, 1]
    assert commutator_report(identity_assignment(W), -1, 1).passed


def test_pullback_along_shift_and_sign():
    W = neg_fock()
    ident = identity_assignment(W)
    shift = loop_map(W, Matrix([[-1]]), [t_power(HALF, m=2)])
    assert not shift.check()
    A = pullback(shift, ident)
    # b(-1/2) -> -b(-1/2) + 1 (x) t^0, and 1 (x) t^0 acts as 0
    assert A.operator(0, -HALF) == {(0, -HALF): Fraction(-1)}
    # b(-3/2) -> -b(-3/2) + 1 (x) t^-1, which acts as the identity
    assert A.operator(0, -Fraction(3, 2)) == {(0, -Fraction(3, 2)): Fraction(-1), "id": Fraction(1)}
    assert commutator_report(A).passed
    assert support_report(A).passed
    back = pullback(shift.inverse(), A)
    assert assignments_equal(back, ident).passed


def test_pullback_functoriality():
    W = neg_fock()
    ident = identity_assignment(W)
    phi = loop_map(W, Matrix([[-1]]), [t_power(HALF, m=2)])
    psi = loop_map(W, Matrix([[-1]]), [0])
    lhs = pullback(psi.compose(phi), ident)
    rhs = pullback(phi, pullback(psi, ident))
    assert assignments_equal(lhs, rhs).passed
    assert not assignments_equal(lhs, ident).passed


def test_bad_maps_are_rejected():
    W = neg_fock()
    scaled = loop_map(W, Matrix([[t_power(1)]]), [0])
    assert scaled.check()
    with pytest.raises(ValueError):
        pullback(scaled, identity_assignment(W))
    # an integer-exponent translation sends b(p) to t^(p+1) (x) 1, outside the loop algebra
    off = loop_map(W, Matrix([[1]]), [t_power(1)])
    assert any("image" in f for f in off.check())


def test_untwisted_module_is_the_fock_space():
    W = twisted_fock_build(abelian(1), Matrix([[1]]), 1)
    rep = untwisted_comparison(W, 3)
    assert rep.passed and rep.tested > 0
    assert not untwisted_comparison(neg_fock()).passed


def test_state_format():
    W = neg_fock()
    s = W.act(0, -HALF, W.vacuum)
    assert str(s) == "1*b0(-1/2)w+"
    assert str(TwistedState()) == "0"
