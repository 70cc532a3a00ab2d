from __future__ import annotations

from fractions import Fraction

import pytest

from vertexdescent.affine import AffineAlgebra, heisenberg
from vertexdescent.basechange import TensorElement
from vertexdescent.diffring import FracLaurent
from vertexdescent.exactnum import Matrix
from vertexdescent.liedata import chevalley_sl2, sl2
from vertexdescent.loop import (
    EigenspaceError,
    LoopAlgebra,
    loop_build,
    loop_nproduct,
    trivialization_coherence,
    trivialization_roundtrip,
)
from vertexdescent.states import VACUUM, State

B = ((-1, 0),)


def heis_loop(level=Fraction(1)) -> LoopAlgebra:
    return loop_build(heisenberg(1, level), Matrix([[-1]]), 2)


def pure(mono, q, c=Fraction(1), m=2):
    return TensorElement.pure(mono, FracLaurent.monomial(Fraction(q), c, m))


def partitions(n, largest=None):
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in partitions(n - k, k):
            yield (k,) + rest


def test_heisenberg_loop_products():
    L = heis_loop(Fraction(3))
    x, y = pure(B, Fraction(1, 2)), pure(B, Fraction(-1, 2))
    assert loop_nproduct(L, x, 1, y) == pure(VACUUM, 0, Fraction(3))
    assert loop_nproduct(L, x, 0, y) == pure(VACUUM, -1, Fraction(3, 2))
    assert not loop_nproduct(L, x, 2, y)


def test_membership_is_enforced():
    L = heis_loop()
    with pytest.raises(EigenspaceError):
        L.element({0: State.monomial([(-1, 0)])})
    x = L.element({Fraction(1, 2): State.monomial([(-1, 0)])})
    assert L.is_member(x)
    with pytest.raises(EigenspaceError):
        loop_nproduct(L, pure(B, 0), 0, x)


def test_slice_counts_match_partition_oracle():
    L = heis_loop()
    for d in range(5):
        # states of even length sit at integer exponents (5 in [-2, 2]), odd length at half-integers (4)
        expected = sum(5 if len(p) % 2 == 0 else 4 for p in partitions(d))
        assert len(L.basis(d, -2, 2)) == expected


def test_products_stay_in_the_loop_algebra():
    L = loop_build(AffineAlgebra(sl2()), chevalley_sl2(), 2)
    elems = [x for _, x in L.slice_basis(1, -1, 1)]
    for x in elems:
        for y in elems:
            for n in range(-2, 3):
                assert L.is_member(loop_nproduct(L, x, n, y))


def test_eigen_presentation_weights():
    L = loop_build(AffineAlgebra(sl2()), chevalley_sl2(), 2)
    assert sorted(L.weights) == [0, 1, 1]
    assert L.decomp.dims() == [1, 2]
    with pytest.raises(ValueError):
        loop_build(AffineAlgebra(sl2()), chevalley_sl2(), 3)


def test_heisenberg_coherence_and_roundtrip():
    L = heis_loop()
    rep = trivialization_coherence(L, 3, -2, 2, range(-3, 4))
    assert rep.passed and rep.tested > 2000
    assert trivialization_roundtrip(L, 3).passed


def test_sl2_coherence_low_degree():
    L = loop_build(AffineAlgebra(sl2()), chevalley_sl2(), 2)
    assert trivialization_coherence(L, 2, -1, 1, range(-2, 3)).passed
    assert trivialization_roundtrip(L, 2, -1, 1).passed


def test_trivialization_of_a_half_integer_mode():
    L = heis_loop()
    x = pure(B, Fraction(1, 2))
    assert L.trivialize(x) == x
    assert L.from_split(L.split(L.trivialize(x))) == x


def test_trivialization_multiplies_ring_factor():
    L = heis_loop()
    x = pure(B, Fraction(1, 2))
    assert L.trivialize(x, FracLaurent.monomial(1)) == pure(B, Fraction(3, 2))


def test_identity_automorphism_gives_plain_base_change():
    V = AffineAlgebra(sl2())
    L = loop_build(V, Matrix.identity(3), 1)
    elems = [x for _, x in L.slice_basis(1, -1, 1)]
    for x in elems:
        for y in elems:
            for n in range(-2, 3):
                assert L.trivialize(loop_nproduct(L, x, n, y)) == L.TV.nproduct(L.trivialize(x), n, L.trivialize(y))
