"""Twisted Fock modules for Heisenberg vertex algebras and pullback along loop maps.

For h abelian with an orthogonal automorphism g of order M, pick the
eigenbasis b^i of g with weights r_i. The g-twisted Fock module is spanned
by products of creation modes b^i_q (q < 0, q in r_i/M + Z) on a vector w+,
with

    [b^i_p, b^j_q] = p (b^i, b^j) delta_{p+q,0} l

and b^i_q w+ = 0 for q >= 0 (zero modes act as 0).

A loop map phi: L(V, g) -> L(V, h) is given on generators by an F1Map whose
entries live in S_M: phi(b^i (x) t^p) = sum_j M[j,i] t^p b'^j + c_i t^p 1.
Loop elements v (x) t^n act on an h-twisted module as the modes v_n, and
1 (x) t^k acts as delta_{k,-1}. The pullback assigns to b^i_(p) the operator
obtained by expanding phi(b^i_(p)) in this way.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .affine import AffineAlgebra, F1Map
from .basechange import TensorElement
from .diffring import FracLaurent
from .exactnum import Matrix
from .liedata import LieAut, LiePresentation
from .loop import EigenspaceError, LoopAlgebra, loop_nproduct
from .states import LinComb, State, VACUUM, accumulate

ID = "id"


class TwistedState(LinComb):
    """Sparse combination of sorted creation-mode tuples ((q, i), ...) on w+."""

    __slots__ = ()

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono, c in sorted(self.terms.items()):
            modes = "".join(f"b{i}({q})" for q, i in mono)
            parts.append(f"{c}*{modes}w+")
        return " + ".join(parts)

    __repr__ = __str__


class TwistedFock:
    """The g-twisted Fock module of V(h, l)."""

    def __init__(self, L: LoopAlgebra):
        V = L.V
        if not V.lie.abelian:
            raise ValueError("twisted Fock modules are built for abelian h only")
        g = L.g
        if g.transpose() @ V.lie.form @ g != V.lie.form:
            raise ValueError("automorphism does not preserve the form")
        self.L = L
        self.M = L.M
        self.level = V.level
        self.weights = L.weights
        self.gram = L.E.lie.form
        self.rank = V.rank

    @classmethod
    def build(cls, h: LiePresentation, g: LieAut | Matrix, M: int, level=Fraction(1)) -> TwistedFock:
        return cls(LoopAlgebra(AffineAlgebra(h, level), g, M))

    # modes ---------------------------------------------------------------
    def valid(self, i: int, q) -> bool:
        return (Fraction(q) * self.M - self.weights[i]) % self.M == 0

    def modes(self, i: int, lo, hi) -> list[Fraction]:
        return self.L.exponents(((-1, i),), lo, hi)

    @property
    def vacuum(self) -> TwistedState:
        return TwistedState({(): Fraction(1)})

    def act(self, i: int, q, state: TwistedState) -> TwistedState:
        q = Fraction(q)
        if not self.valid(i, q):
            raise EigenspaceError(f"mode b{i}({q}) is outside {self.weights[i]}/{self.M} + Z")
        out: dict = {}
        for mono, c in state:
            if q < 0:
                accumulate(out, tuple(sorted(mono + ((q, i),))), c)
            elif q > 0:
                for pos, (p, j) in enumerate(mono):
                    if p == -q and self.gram[i, j]:
                        accumulate(out, mono[:pos] + mono[pos + 1:], c * q * self.gram[i, j] * self.level)
        return TwistedState(out)

    def states(self, depth: int, lo=-2) -> list[TwistedState]:
        """w+ and creation monomials with at most ``depth`` modes, exponents >= lo."""
        creation = [(q, i) for i in range(self.rank) for q in self.modes(i, lo, -Fraction(1, self.M))]
        creation.sort()
        monos = [()]
        frontier = [()]
        for _ in range(depth):
            nxt = []
            for mono in frontier:
                start = creation.index(mono[-1]) if mono else 0
                for mode in creation[start:]:
                    nxt.append(mono + (mode,))
            monos.extend(nxt)
            frontier = nxt
        return [TwistedState({m: Fraction(1)}) for m in monos]


# mode assignments --------------------------------------------------------


@dataclass
class ModeAssignment:
    """For each source generator i and p in r_i/M + Z, an operator on ``module``.

    ``expr(i, p)`` returns a dict from module modes (j, q) or ``ID`` to coefficients.
    """

    module: TwistedFock
    weights: tuple[int, ...]
    M: int
    gram: Matrix
    level: object
    expr: Callable[[int, Fraction], dict]
    name: str = ""

    def valid(self, i: int, p) -> bool:
        return (Fraction(p) * self.M - self.weights[i]) % self.M == 0

    def modes(self, i: int, lo, hi) -> list[Fraction]:
        w = self.weights[i]
        out = []
        k = -((-(Fraction(lo) * self.M - w)) // self.M)
        while Fraction(w + k * self.M, self.M) <= Fraction(hi):
            out.append(Fraction(w + k * self.M, self.M))
            k += 1
        return out

    def operator(self, i: int, p) -> dict:
        p = Fraction(p)
        if not self.valid(i, p):
            raise EigenspaceError(f"generator {i} has no mode {p}: weight {self.weights[i]}/{self.M}")
        return self.expr(i, p)

    def apply(self, i: int, p, state: TwistedState) -> TwistedState:
        out = TwistedState()
        for key, c in self.operator(i, p).items():
            if key == ID:
                out = out + state * c
            else:
                j, q = key
                out = out + self.module.act(j, q, state) * c
        return out


def identity_assignment(W: TwistedFock) -> ModeAssignment:
    def expr(i, p):
        return {(i, p): Fraction(1)}

    return ModeAssignment(W, W.weights, W.M, W.gram, W.level, expr, "id")


def twisted_fock_build(h: LiePresentation, g: LieAut | Matrix, M: int, level=Fraction(1)) -> TwistedFock:
    return TwistedFock.build(h, g, M, level)


# loop maps and pullback --------------------------------------------------


@dataclass
class LoopMap:
    """phi: L(V, g) -> L(V, h) on generators, in the eigenbases of g and h."""

    source: LoopAlgebra
    target: LoopAlgebra
    data: F1Map

    def image(self, i: int, p) -> TensorElement:
        shift = FracLaurent.monomial(Fraction(p), Fraction(1))
        out = TensorElement()
        for j in range(self.target.E.rank):
            c = self.data.matrix[j, i]
            if c:
                out = out + TensorElement.pure(((-1, j),), c * shift)
        if self.data.translation[i]:
            out = out + TensorElement.pure(VACUUM, self.data.translation[i] * shift)
        return out

    def __call__(self, x: TensorElement) -> TensorElement:
        out = TensorElement()
        for mono, r in x:
            if mono == VACUUM:
                out = out + TensorElement.pure(VACUUM, r)
            elif len(mono) == 1 and mono[0][0] == -1:
                for q, c in r.terms.items():
                    out = out + self.image(mono[0][1], q) * c
            else:
                raise ValueError("loop maps are evaluated on generators and the vacuum only")
        return out

    def compose(self, first: LoopMap) -> LoopMap:
        """self o first."""
        if first.target is not self.source:
            raise ValueError("maps do not compose")
        return LoopMap(first.source, self.target, self.data.compose(first.data))

    def inverse(self) -> LoopMap:
        return LoopMap(self.target, self.source, self.data.inverse())

    def check(self, lo=-2, hi=2, products: Sequence[int] = (0, 1, 2)) -> list[str]:
        """Images lie in L(V, h), and phi(x)_l phi(y) = phi(x_l y) on generator modes for l >= 0."""
        failures = []
        src = self.source
        gens = [(i, p) for i in range(src.E.rank) for p in src.exponents(((-1, i),), lo, hi)]
        for i, p in gens:
            try:
                self.target.check_member(self.image(i, p))
            except EigenspaceError as exc:
                failures.append(f"image of b{i}({p}): {exc}")
        if failures:
            return failures
        for i, p in gens:
            x = TensorElement.pure(((-1, i),), FracLaurent.monomial(p, Fraction(1), src.M))
            for j, q in gens:
                y = TensorElement.pure(((-1, j),), FracLaurent.monomial(q, Fraction(1), src.M))
                for ell in products:
                    lhs = loop_nproduct(self.target, self(x), ell, self(y))
                    rhs = self(loop_nproduct(src, x, ell, y))
                    if lhs != rhs:
                        failures.append(f"b{i}({p})_{ell}b{j}({q}): {lhs} != {rhs}")
        return failures


def pullback(phi: LoopMap, A: ModeAssignment, check: bool = True) -> ModeAssignment:
    """phi^* A: the assignment b^i_(p) -> A(phi(b^i_(p)))."""
    if check:
        failures = phi.check()
        if failures:
            raise ValueError(f"loop map does not preserve products: {failures[0]}")
    if A.weights != phi.target.weights or A.M != phi.target.M:
        raise ValueError("assignment does not match the target of phi")

    def expr(i: int, p: Fraction) -> dict:
        out: dict = {}
        img = phi.image(i, p)
        for mono, r in img:
            for q, c in r.terms.items():
                if mono == VACUUM:
                    if q == -1:
                        accumulate(out, ID, c)
                    continue
                j = mono[0][1]
                for key, c2 in A.operator(j, q).items():
                    accumulate(out, key, c * c2)
        return out

    src = phi.source
    return ModeAssignment(A.module, src.weights, src.M, src.E.lie.form, src.V.level, expr,
                          f"pullback({A.name})")


# checks ------------------------------------------------------------------


@dataclass
class AssignmentReport:
    tested: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def __bool__(self) -> bool:
        return self.passed


def twisted_commutator_check(A: ModeAssignment, i: int, p, j: int, q, states: Iterable[TwistedState]) -> bool:
    """[A(i, p), A(j, q)] = p (b^i, b^j) delta_{p+q,0} l on the given states."""
    p, q = Fraction(p), Fraction(q)
    scalar = p * A.gram[i, j] * A.level if p + q == 0 else 0
    for s in states:
        lhs = A.apply(i, p, A.apply(j, q, s)) - A.apply(j, q, A.apply(i, p, s))
        if lhs != s * scalar:
            return False
    return True


def commutator_report(A: ModeAssignment, lo=-2, hi=2, depth: int = 2) -> AssignmentReport:
    rep = AssignmentReport()
    states = A.module.states(depth, lo)
    gens = [(i, p) for i in range(len(A.weights)) for p in A.modes(i, lo, hi)]
    for i, p in gens:
        for j, q in gens:
            rep.tested += 1
            if not twisted_commutator_check(A, i, p, j, q, states):
                rep.failures.append(f"[b{i}({p}), b{j}({q})]")
    return rep


def support_report(A: ModeAssignment, lo=-2, hi=2) -> AssignmentReport:
    """Operators exist exactly on r_i/M + Z: every other mode in the window is rejected."""
    rep = AssignmentReport()
    step = Fraction(1, A.M * 2)
    for i in range(len(A.weights)):
        q = Fraction(lo)
        while q <= hi:
            rep.tested += 1
            try:
                A.operator(i, q)
                ok = A.valid(i, q)
            except EigenspaceError:
                ok = not A.valid(i, q)
            if not ok:
                rep.failures.append(f"b{i}({q})")
            q += step
    return rep


def assignments_equal(A: ModeAssignment, B: ModeAssignment, lo=-2, hi=2, depth: int = 2) -> AssignmentReport:
    """Same operator on every generator mode in the window, compared on states of bounded depth."""
    rep = AssignmentReport()
    if A.weights != B.weights or A.M != B.M:
        rep.failures.append("different sources")
        return rep
    states = A.module.states(depth, lo)
    for i in range(len(A.weights)):
        for p in A.modes(i, lo, hi):
            rep.tested += 1
            if any(A.apply(i, p, s) != B.apply(i, p, s) for s in states):
                rep.failures.append(f"b{i}({p})")
    return rep


def untwisted_comparison(W: TwistedFock, degree: int = 3) -> AssignmentReport:
    """For g = id the module's mode action agrees with V(h, l) acting on itself."""
    rep = AssignmentReport()
    if W.M != 1:
        rep.failures.append("module is twisted")
        return rep
    E = W.L.E

    def to_state(ts: TwistedState) -> State:
        return State({tuple((int(q), i) for q, i in mono): c for mono, c in ts})

    for d in range(degree + 1):
        for mono in E.basis_monomials(d):
            ts = TwistedState({tuple((Fraction(q), i) for q, i in mono): Fraction(1)})
            for i in range(W.rank):
                for q in range(-2, degree + 2):
                    rep.tested += 1
                    if to_state(W.act(i, q, ts)) != E.mode_action(i, q, State({mono: Fraction(1)})):
                        rep.failures.append(f"b{i}({q}) on {mono}")
    return rep
