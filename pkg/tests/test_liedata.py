from __future__ import annotations

from fractions import Fraction

import pytest

from vertexdescent.exactnum import Matrix
from vertexdescent.liedata import (
    LieAut,
    PresentationError,
    abelian,
    aut_order,
    chevalley_sl2,
    eigen_decompose,
    load_aut,
    load_presentation,
    presentation_from_dict,
    presentation_to_dict,
    sl2,
    sl3,
    validate_presentation,
    warn_critical_level,
)


def unit(i, j, n=3):
    return Matrix([[1 if (r, c) == (i, j) else 0 for c in range(n)] for r in range(n)])


SL3_MATRICES = {
    "e1": unit(0, 1), "e2": unit(1, 2), "e3": unit(0, 2),
    "h1": unit(0, 0) - unit(1, 1), "h2": unit(1, 1) - unit(2, 2),
    "f1": unit(1, 0), "f2": unit(2, 1), "f3": unit(2, 0),
}


def coords_in(labels, mats, X):
    """Solve X = sum c_k mats[k] by reading off matrix entries (oracle independent of the presentation)."""
    from vertexdescent.exactnum import solve_linear

    A = Matrix([[mats[l][i, j] for l in labels] for i in range(3) for j in range(3)])
    b = Matrix([[X[i, j]] for i in range(3) for j in range(3)])
    return solve_linear(A, b).particular.column(0)


def test_sl3_structure_constants_match_matrix_commutators():
    p = sl3()
    labels = p.labels
    for a in labels:
        for b in labels:
            X, Y = SL3_MATRICES[a], SL3_MATRICES[b]
            expected = coords_in(labels, SL3_MATRICES, X @ Y - Y @ X)
            got = p.bracket(p.unit(p.index(a)), p.unit(p.index(b)))
            assert tuple(got) == tuple(expected), (a, b)


def test_sl3_form_is_the_trace_form():
    p = sl3()
    for a in p.labels:
        for b in p.labels:
            X, Y = SL3_MATRICES[a], SL3_MATRICES[b]
            trace = sum((X @ Y)[i, i] for i in range(3))
            assert p.form[p.index(a), p.index(b)] == trace


def test_builtin_presentations_validate():
    for p in (sl2(), sl3(), abelian(2), load_presentation("heis1.lie")):
        assert validate_presentation(p).ok, p.name
    assert sl2().dual_coxeter == 2


def test_validation_reports_broken_invariance():
    bad = presentation_from_dict({"basis": ["x", "y"], "brackets": [["x", "y", "x", 1]], "form": [[1, 0], [0, 1]]})
    rep = validate_presentation(bad)
    assert not rep.ok and not rep.checks["invariance"] and rep.checks["jacobi"]


def test_presentation_errors():
    with pytest.raises(PresentationError):
        presentation_from_dict({"basis": ["x"], "form": [[1, 0]]})
    with pytest.raises(PresentationError):
        presentation_from_dict({"basis": ["x"], "brackets": [["x", "z", "x", 1]], "form": [[1]]})
    with pytest.raises(PresentationError):
        presentation_from_dict({"basis": ["x"]})


def test_dict_roundtrip():
    p = sl2()
    q = presentation_from_dict(presentation_to_dict(p))
    assert q.labels == p.labels and q.form == p.form
    for i in range(3):
        for j in range(3):
            assert q.bracket(q.unit(i), q.unit(j)) == p.bracket(p.unit(i), p.unit(j))


def test_chevalley_involution():
    g = chevalley_sl2()
    p = sl2()
    assert g.preserves_bracket(p) and g.preserves_form(p)
    assert aut_order(g, 10) == 2
    assert load_aut("chevalley.aut", p).matrix == g.matrix
    with pytest.raises(PresentationError):
        load_aut("neg.aut", p)


def test_eigen_decomposition_of_chevalley():
    d = eigen_decompose(chevalley_sl2(), 2)
    assert d.dims() == [1, 2]
    g = chevalley_sl2().matrix
    for r, v in d.basis():
        assert g.apply(v) == tuple(x * d.eigenvalue(r) for x in v)
    assert d.change_of_basis().det() != 0


def test_order_three_eigenspaces_need_cyclotomics():
    # cyclic permutation of an orthonormal basis of abelian(3)
    perm = LieAut(Matrix([[0, 0, 1], [1, 0, 0], [0, 1, 0]]), 3, "cycle")
    assert perm.preserves_form(abelian(3))
    d = eigen_decompose(perm, 3)
    assert d.dims() == [1, 1, 1]
    for r, v in d.basis():
        assert perm.matrix.apply(v) == tuple(x * d.eigenvalue(r) for x in v)


def test_aut_order_bound():
    rot = Matrix([[0, -1], [1, 0]])
    assert aut_order(rot, 3) is None
    assert aut_order(rot, 4) == 4


def test_critical_level_warning(caplog):
    assert warn_critical_level(sl2(), Fraction(-2))
    assert not warn_critical_level(sl2(), 1)
    assert "h^vee" in caplog.text
