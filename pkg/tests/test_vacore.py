from __future__ import annotations

from fractions import Fraction

from vertexdescent.affine import AffineAlgebra, degree_one_coordinates
from vertexdescent.diffring import CommutativeVertexRing, FracLaurent
from vertexdescent.liedata import LiePresentation, sl2
from vertexdescent.states import State
from vertexdescent.vacore import (
    CheckRecord,
    IdentityCheck,
    TrivialFiltration,
    borcherds_check,
    canonical_hs,
    creation_check,
    filtration_check,
    hs_derivation_check,
    hs_iterativity_check,
    induced_bracket_check,
    induced_form_check,
    record,
    regularity_check,
)


class Skewed(CommutativeVertexRing):
    """S_1 with the (-2)-product doubled: breaks the identities the checkers must catch."""

    def nproduct(self, r, n, s):
        out = super().nproduct(r, n, s)
        return out * 2 if n == -2 else out


class BadDegree:
    """Wraps an algebra and reports degree-one states as degree 0."""

    def __init__(self, V):
        self.V = V
        self.name = "bad"

    def __getattr__(self, item):
        return getattr(self.V, item)

    def degree(self, v):
        d = self.V.degree(v)
        return 0 if d == 1 else d


def test_record_roundtrip_and_text():
    rec = CheckRecord("A", "borcherds", {"m": "1"}, False, {"lhs": "x", "rhs": "y"})
    back = CheckRecord.from_json(rec.to_json())
    assert back == rec
    assert "[FAIL] A: borcherds(m=1)" in rec.to_text()
    assert "lhs: x" in rec.to_text()
    ok = record("A", "creation", {"u": 1}, IdentityCheck(True))
    assert ok.passed and ok.mismatch is None


def test_failed_record_keeps_both_sides():
    rec = record("A", "c", {"n": 2}, IdentityCheck(False, "left", "right"))
    assert rec.mismatch == {"lhs": "left", "rhs": "right"}


def test_checkers_catch_a_broken_product():
    C = Skewed(1)
    B = C.basis(-2, 2)
    assert all(creation_check(C, u) for u in B)
    assert not all(hs_iterativity_check(C, u, 1, 1) for u in B)
    failures = [
        (m, n, p)
        for u in B for v in B for w in B[:1]
        for m in range(-3, 1) for n in range(-3, 1) for p in range(-3, 1)
        if not borcherds_check(C, u, v, w, m, n, p)
    ]
    assert failures


def test_regularity_and_hs_on_affine():
    V = AffineAlgebra(sl2())
    e, f = V.generator("e"), V.generator("f")
    assert regularity_check(V, e, f)
    assert canonical_hs(V, e, 1) == V.generator("e", -2)
    for u in V.basis(2)[:4]:
        for i in range(3):
            for j in range(3):
                assert hs_iterativity_check(V, u, i, j)
    for n in range(-2, 2):
        for m in range(3):
            assert hs_derivation_check(V, e, f, n, m)


def test_filtration_checker_flags_wrong_degrees():
    V = AffineAlgebra(sl2())
    assert filtration_check(V, 2, range(-2, 3)).passed
    assert not filtration_check(BadDegree(V), 2, range(-2, 3)).passed
    assert filtration_check(TrivialFiltration(V), 2, range(-1, 2)).passed


def test_induced_structure_detects_wrong_constants():
    V = AffineAlgebra(sl2())
    gens = [V.generator(i) for i in range(3)]
    coords = degree_one_coordinates(V)
    assert induced_bracket_check(V, gens, coords, V.lie).passed
    assert induced_form_check(V, gens, coords, V.lie, V.level).passed
    p = sl2()
    doubled = LiePresentation(p.labels, {k: {a: 2 * c for a, c in v.items()} for k, v in p.brackets.items()},
                              p.form, p.abelian, p.dual_coxeter, "sl2x2")
    assert not induced_bracket_check(V, gens, coords, doubled).passed
    assert not induced_form_check(V, gens, coords, p, Fraction(2)).passed


def test_vacuum_creation_on_vacuum_itself():
    V = AffineAlgebra(sl2())
    assert creation_check(V, V.vacuum)
    assert V.nproduct(V.vacuum, -1, V.generator("h")) == V.generator("h")
    assert isinstance(V.vacuum, State)
    C = CommutativeVertexRing(2)
    assert C.nproduct(C.vacuum, -1, FracLaurent.monomial(Fraction(1, 2), m=2)) == FracLaurent.monomial(
        Fraction(1, 2), m=2)
