"""Twisted loop vertex algebras L(V, g) and the trivialization L (x)_R S_M = V (x) S_M.

L(V, g) is spanned by v (x) t^q with v in V^{g,r} and q in r/M + Z, where
g v = zeta^{-r} v. Elements are stored over the eigenbasis of g on the Lie
algebra, so PBW monomials in eigen-generators are eigenvectors of the
induced automorphism and the weight of a monomial is the sum of the
weights of its modes. Products follow

    (u_(m))_l (v_(n)) = sum_i binom(m, i) (u_{l+i} v)_(m+n-i)

with u_(m) = u (x) t^m.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .affine import AffineAlgebra, StateMap, linear_map
from .basechange import TensorAlgebra, TensorElement
from .diffring import FracLaurent, LaurentRing
from .exactnum import Matrix, binom_frac
from .liedata import EigenDecomp, LieAut, LiePresentation, aut_order, eigen_decompose
from .states import Monomial, State, format_monomial, mono_degree


class EigenspaceError(ValueError):
    """An element violates the exponent/eigenspace compatibility of L(V, g)."""


def eigen_presentation(p: LiePresentation, decomp: EigenDecomp) -> tuple[LiePresentation, Matrix]:
    """The presentation rewritten in the eigenbasis, and the change of basis P (columns = eigenvectors)."""
    P = decomp.change_of_basis()
    Pinv = P.inverse()
    basis = [v for _, v in decomp.basis()]
    counts: dict[int, int] = {}
    labels = []
    for r, _ in decomp.basis():
        labels.append(f"b{r}_{counts.get(r, 0)}")
        counts[r] = counts.get(r, 0) + 1
    n = len(basis)
    brackets = {}
    for i in range(n):
        for j in range(n):
            coords = Pinv.apply(p.bracket(basis[i], basis[j]))
            out = {k: c for k, c in enumerate(coords) if c}
            if out:
                brackets[(i, j)] = out
    form = Matrix([[p.pair(basis[i], basis[j]) for j in range(n)] for i in range(n)])
    name = f"{p.name or 'g'}-eigen{decomp.order}"
    return LiePresentation(tuple(labels), brackets, form, p.abelian, p.dual_coxeter, name), P


class LoopAlgebra:
    """L(V, g) for V = V(g, l) and a Lie automorphism g of finite order M."""

    def __init__(self, V: AffineAlgebra, g: LieAut | Matrix, M: int | None = None):
        mat = g.matrix if isinstance(g, LieAut) else g
        if M is None:
            M = aut_order(mat, 64)
            if M is None:
                raise ValueError("automorphism order exceeds 64; pass M explicitly")
        self.V = V
        self.g = mat
        self.M = M
        self.decomp = eigen_decompose(mat, M)
        lie_e, P = eigen_presentation(V.lie, self.decomp)
        self.E = AffineAlgebra(lie_e, V.level, name=f"{V.name}[eigen]")
        self.P = P
        self.weights = tuple(r for r, _ in self.decomp.basis())
        self.ring = LaurentRing(M)
        self.TV = TensorAlgebra(V, self.ring)
        self.TE = TensorAlgebra(self.E, self.ring)
        self.to_orig = linear_map(self.E, V, P)
        self.to_eig = linear_map(V, self.E, P.inverse())
        self.name = f"L({V.name},{M})"

    # grading -------------------------------------------------------------
    def weight(self, mono: Monomial) -> int:
        return sum(self.weights[a] for _, a in mono) % self.M

    def exponent_ok(self, mono: Monomial, q: Fraction) -> bool:
        return (q * self.M - self.weight(mono)) % self.M == 0

    def element(self, parts: Mapping) -> TensorElement:
        """Build sum_q parts[q] (x) t^q from eigen-basis States."""
        out = TensorElement()
        for q, state in parts.items():
            out = out + TensorElement.from_state(state, FracLaurent.monomial(Fraction(q), Fraction(1), self.M))
        self.check_member(out)
        return out

    def components(self, x: TensorElement) -> dict[Fraction, State]:
        out: dict[Fraction, dict] = {}
        for mono, r in x:
            for q, c in r.terms.items():
                out.setdefault(q, {})[mono] = c
        return {q: State(d) for q, d in sorted(out.items())}

    def is_member(self, x: TensorElement) -> bool:
        return all(self.exponent_ok(mono, q) for mono, r in x for q in r.terms)

    def check_member(self, x: TensorElement) -> None:
        for mono, r in x:
            for q in r.terms:
                if not self.exponent_ok(mono, q):
                    raise EigenspaceError(
                        f"{format_monomial(mono, self.E.labels)} has weight {self.weight(mono)}, exponent {q}"
                    )

    def exponents(self, mono: Monomial, lo, hi) -> list[Fraction]:
        w = self.weight(mono)
        out = []
        k = -((-(Fraction(lo) * self.M - w)) // self.M)
        while Fraction(w + k * self.M, self.M) <= Fraction(hi):
            out.append(Fraction(w + k * self.M, self.M))
            k += 1
        return out

    def basis(self, degree: int, lo=-2, hi=2) -> list[TensorElement]:
        """v (x) t^q for eigen-PBW monomials v of the given degree and q in [lo, hi]."""
        out = []
        for mono in self.E.basis_monomials(degree):
            for q in self.exponents(mono, lo, hi):
                out.append(TensorElement.pure(mono, FracLaurent.monomial(q, Fraction(1), self.M)))
        return out

    def slice_basis(self, degree_bound: int, lo=-2, hi=2) -> list[tuple[int, TensorElement]]:
        return [(d, x) for d in range(degree_bound + 1) for x in self.basis(d, lo, hi)]

    # products ------------------------------------------------------------
    def nproduct(self, x: TensorElement, ell: int, y: TensorElement) -> TensorElement:
        return loop_nproduct(self, x, ell, y)

    @property
    def vacuum(self) -> TensorElement:
        return self.TE.vacuum

    @property
    def zero(self) -> TensorElement:
        return TensorElement()

    def regularity_bound(self, x, y) -> int:
        return self.TE.regularity_bound(x, y)

    def degree(self, x) -> int | None:
        return x.degree()

    # trivialization ------------------------------------------------------
    def trivialize(self, x: TensorElement, p=None) -> TensorElement:
        """x (x) p in L (x)_R S_M to V (x) S_M: v (x) q (x) p -> v (x) pq, v written in the original basis."""
        p = FracLaurent.const(Fraction(1), self.M) if p is None else FracLaurent.coerce(p, self.M)
        out = TensorElement()
        for mono, r in x:
            img = TensorElement.from_state(self.to_orig.on_monomial(mono))
            out = out + img * (r * p)
        return out

    def split(self, x: TensorElement) -> dict[Monomial, FracLaurent]:
        """Canonical form in L (x)_R S_M: coefficient p_v with v (x) t^{w(v)/M} (x) p_v, w(v) in [0, M)."""
        rows: dict = {}
        for mono, r in x:
            for m2, c in self.to_eig.on_monomial(mono):
                row = rows.setdefault(m2, {})
                for q, v in r.terms.items():
                    row[q] = row.get(q, 0) + v * c
        out = {}
        for mono, row in rows.items():
            shift = Fraction(self.weight(mono), self.M)
            clean = {q - shift: c for q, c in row.items() if c}
            if clean:
                out[mono] = FracLaurent(clean, self.M)
        return out

    def untrivialize(self, x: TensorElement) -> dict[Monomial, FracLaurent]:
        return self.split(x)

    def base_extend(self, x: TensorElement) -> dict[Monomial, FracLaurent]:
        """x (x) 1 in the canonical form used by ``split``."""
        self.check_member(x)
        return {
            mono: r * FracLaurent.monomial(Fraction(-self.weight(mono), self.M), Fraction(1), self.M)
            for mono, r in x
        }

    def from_split(self, parts: Mapping[Monomial, FracLaurent]) -> TensorElement:
        """Inverse of ``split``: back to V (x) S_M."""
        out = TensorElement()
        for mono, p in parts.items():
            shift = FracLaurent.monomial(Fraction(self.weight(mono), self.M), Fraction(1), self.M)
            out = out + TensorElement.from_state(self.to_orig.on_monomial(mono)) * (p * shift)
        return out


def loop_build(V: AffineAlgebra, g: LieAut | Matrix, M: int) -> LoopAlgebra:
    mat = g.matrix if isinstance(g, LieAut) else g
    if not (mat ** M).is_identity():
        raise ValueError(f"automorphism does not have order dividing {M}")
    return LoopAlgebra(V, mat, M)


def loop_nproduct(L: LoopAlgebra, x: TensorElement, ell: int, y: TensorElement) -> TensorElement:
    """Bilinear extension of (u_(m))_l (v_(n)) = sum_i binom(m, i) (u_{l+i} v)_(m+n-i)."""
    L.check_member(x)
    L.check_member(y)
    E = L.E
    out: dict = {}
    for mu, r in x:
        for mv, s in y:
            bound = mono_degree(mu) + mono_degree(mv)
            for m, cu in r.terms.items():
                for n, cv in s.terms.items():
                    for i in range(max(0, bound - ell)):
                        b = binom_frac(m, i)
                        if not b:
                            continue
                        q = m + n - i
                        for mono, c in E.nproduct_terms(mu, ell + i, mv).items():
                            term = b * cu * cv * c
                            row = out.setdefault(mono, {})
                            row[q] = row.get(q, 0) + term
    result = TensorElement({mono: FracLaurent(row, L.M) for mono, row in out.items()})
    L.check_member(result)
    return result


@dataclass
class CoherenceReport:
    tested: int = 0
    failures: list[str] | None = None

    def __post_init__(self):
        self.failures = self.failures or []

    @property
    def passed(self) -> bool:
        return not self.failures

    def __bool__(self) -> bool:
        return self.passed


def trivialization_coherence(L: LoopAlgebra, degree_bound: int = 3, lo=-2, hi=2,
                             modes: Sequence[int] = range(-3, 4)) -> CoherenceReport:
    """loop_nproduct(x, n, y) (x) 1 = split(tensor_nproduct(triv x, n, triv y)) on slice basis pairs."""
    rep = CoherenceReport()
    elems = L.slice_basis(degree_bound, lo, hi)
    triv = {id(x): L.trivialize(x) for _, x in elems}
    for du, x in elems:
        for dv, y in elems:
            if du + dv > degree_bound:
                continue
            for n in modes:
                rep.tested += 1
                lhs = L.base_extend(loop_nproduct(L, x, n, y))
                rhs = L.split(L.TV.nproduct(triv[id(x)], n, triv[id(y)]))
                if lhs != rhs:
                    rep.failures.append(f"{x}_{n}{y}")
    return rep


def trivialization_roundtrip(L: LoopAlgebra, degree_bound: int = 3, lo=-2, hi=2) -> CoherenceReport:
    """split o trivialize = base_extend and from_split o split = id on the slice."""
    rep = CoherenceReport()
    for _, x in L.slice_basis(degree_bound, lo, hi):
        rep.tested += 1
        y = L.trivialize(x)
        if L.split(y) != L.base_extend(x) or L.from_split(L.split(y)) != y:
            rep.failures.append(str(x))
    return rep
