"""Galois descent along S_m / R for cyclic Galois group Z/m.

Automorphisms of V (x) S_m are F1Maps with S_m entries. A cocycle is given by
the image z of the generator gamma; the full cocycle is
u(gamma^a) = z . ^gamma z ... ^{gamma^{a-1}} z, and the cocycle condition is
that the norm z . ^gamma z ... ^{gamma^{m-1}} z is the identity. The twisted
form attached to z is the fixed subalgebra {x : z((id (x) gamma) x) = x}.
Coboundaries use z' = a^-1 . z . ^gamma a.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import yaml

from .affine import AffineAlgebra, F1Extension, F1Map, f1_extend
from .basechange import TensorAlgebra, TensorElement
from .diffring import FracLaurent, LaurentRing, galois_apply, parse_laurent_or_scalar
from .exactnum import Matrix, rank, solve_linear
from .liedata import resolve_data_path
from .loop import LoopAlgebra
from .states import Monomial, format_monomial


def galois_twist(h: F1Map, j: int, m: int) -> F1Map:
    """^{gamma^j} h = (id (x) gamma^j) h (id (x) gamma^-j), entrywise on the parameters."""
    return h.map_entries(lambda x: galois_apply(j, x, m))


@dataclass(frozen=True)
class CyclicCocycle:
    z: F1Map
    m: int
    case: str = "affine"

    def norm(self) -> F1Map:
        out = F1Map.identity(self.z.dim)
        for i in range(self.m - 1, -1, -1):
            out = galois_twist(self.z, i, self.m).compose(out)
        return out

    def value(self, a: int) -> F1Map:
        """u(gamma^a) = z . ^gamma z ... ^{gamma^{a-1}} z."""
        out = F1Map.identity(self.z.dim)
        for i in range(a - 1, -1, -1):
            out = galois_twist(self.z, i, self.m).compose(out)
        return out


def cocycle_check(z: CyclicCocycle | F1Map, m: int | None = None) -> bool:
    if isinstance(z, F1Map):
        if m is None:
            raise ValueError("m is required for a bare F1Map")
        z = CyclicCocycle(z, m)
    return z.norm().is_identity()


def coboundary(z: F1Map, a: F1Map, m: int) -> F1Map:
    """a^-1 . z . ^gamma a."""
    return a.inverse().compose(z.compose(galois_twist(a, 1, m)))


def cohomologous_verify(z: CyclicCocycle, z2: CyclicCocycle, a: F1Map) -> bool:
    if z.m != z2.m or z.z.dim != z2.z.dim or a.dim != z.z.dim:
        return False
    return coboundary(z.z, a, z.m) == z2.z


def solve_norm_equation(z: CyclicCocycle) -> F1Map | None:
    """A translation witness a = (u, id) with a^-1 z ^gamma a = (0, phi), if one exists.

    The translation part of a^-1 z ^gamma a is w + gamma(u) - u phi, so u
    solves u phi - gamma(u) = w exponent by exponent, a constant linear
    system per exponent when phi has constant entries.
    """
    M = z.z.matrix
    if not all(x.is_constant() for r in M.rows for x in r):
        return None
    phi = M.map(lambda x: x.constant_value())
    n = phi.shape[0]
    w = z.z.translation
    exps = sorted({q for c in w for q in c.terms})
    u = [FracLaurent({}, z.m) for _ in range(n)]
    for q in exps:
        lam = galois_apply(1, FracLaurent.monomial(q, Fraction(1), z.m), z.m).coefficient(q)
        A = (phi - Matrix.identity(n) * lam).transpose()
        b = Matrix([[c.coefficient(q)] for c in w])
        sol = solve_linear(A, b)
        if not sol.consistent:
            return None
        for i, c in enumerate(sol.particular.column(0)):
            u[i] = u[i] + FracLaurent.monomial(q, c, z.m)
    return F1Map(Matrix.identity(n), tuple(u))


# fixed points on a slice -------------------------------------------------


@dataclass
class FixedPointSlice:
    basis: list[TensorElement]
    degree_bound: int
    window: tuple[Fraction, Fraction]
    closure_tested: int = 0
    closure_failures: list[str] = field(default_factory=list)
    out_of_window: int = 0

    @property
    def dim(self) -> int:
        return len(self.basis)


class DescentAction:
    """x -> z((id (x) gamma) x) on V (x) S_m."""

    def __init__(self, V: AffineAlgebra, z: CyclicCocycle):
        self.V = V
        self.z = z
        self.T = TensorAlgebra(V, LaurentRing(z.m))
        self.ext: F1Extension = f1_extend(V, z.z, z.m)

    def __call__(self, x: TensorElement) -> TensorElement:
        return self.ext(self.T.galois(x, 1))

    def is_fixed(self, x: TensorElement) -> bool:
        return self(x) == x


def slice_monomials(V: AffineAlgebra, degree_bound: int, m: int, lo, hi) -> list[tuple[Monomial, Fraction]]:
    ring = LaurentRing(m)
    exps = [next(iter(t.terms)) if t.terms else Fraction(0) for t in ring.monomials(lo, hi)]
    return [(mono, q) for d in range(degree_bound + 1) for mono in V.basis_monomials(d) for q in exps]


def _components(columns: dict[int, dict]) -> list[list[int]]:
    """Group unknowns that share an equation (union-find)."""
    parent = list(range(len(columns)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    owner: dict = {}
    for j, col in columns.items():
        for key in col:
            if key in owner:
                a, b = find(owner[key]), find(j)
                if a != b:
                    parent[a] = b
            else:
                owner[key] = j
    groups: dict[int, list[int]] = {}
    for j in columns:
        groups.setdefault(find(j), []).append(j)
    return list(groups.values())


def descent_fixed_points(V: AffineAlgebra, z: CyclicCocycle, degree_bound: int = 3, lo=-2, hi=2,
                         closure_modes: Sequence[int] = range(-3, 4), check_closure: bool = True) -> FixedPointSlice:
    if not cocycle_check(z):
        raise ValueError("z is not a cocycle")
    action = DescentAction(V, z)
    slots = slice_monomials(V, degree_bound, z.m, lo, hi)
    columns: dict[int, dict] = {}
    for j, (mono, q) in enumerate(slots):
        x = TensorElement.pure(mono, FracLaurent.monomial(q, Fraction(1), z.m))
        diff = action(x) - x
        columns[j] = {(mk, e): c for mk, r in diff for e, c in r.terms.items()}
    basis: list[TensorElement] = []
    for group in sorted(_components(columns)):
        keys = sorted({k for j in group for k in columns[j]})
        if not keys:
            for j in group:
                mono, q = slots[j]
                basis.append(TensorElement.pure(mono, FracLaurent.monomial(q, Fraction(1), z.m)))
            continue
        A = Matrix([[columns[j].get(k, Fraction(0)) for j in group] for k in keys])
        sol = solve_linear(A, Matrix.zeros(len(keys), 1))
        for vec in sol.nullspace:
            elem = TensorElement()
            for j, c in zip(group, vec):
                if c:
                    mono, q = slots[j]
                    elem = elem + TensorElement.pure(mono, FracLaurent.monomial(q, c, z.m))
            basis.append(elem)
    fp = FixedPointSlice(basis, degree_bound, (Fraction(lo), Fraction(hi)))
    if check_closure:
        degs = [x.degree() for x in basis]
        for x, dx in zip(basis, degs):
            for y, dy in zip(basis, degs):
                if dx + dy > degree_bound:
                    continue
                for n in closure_modes:
                    p = action.T.nproduct(x, n, y)
                    fp.closure_tested += 1
                    if any(not (lo <= e <= hi) for e in p.exponents()):
                        fp.out_of_window += 1
                    if not action.is_fixed(p):
                        fp.closure_failures.append(f"{x}_{n}{y}")
    return fp


@dataclass
class DescentComparison:
    loop_dim: int
    fixed_dim: int
    image_rank: int
    not_fixed: list[str] = field(default_factory=list)
    product_failures: list[str] = field(default_factory=list)
    tested: int = 0

    @property
    def passed(self) -> bool:
        return (self.loop_dim == self.fixed_dim == self.image_rank
                and not self.not_fixed and not self.product_failures)

    def __bool__(self) -> bool:
        return self.passed


def _coords(x: TensorElement) -> dict:
    return {(mono, e): c for mono, r in x for e, c in r.terms.items()}


def compare_with_loop(L: LoopAlgebra, fp: FixedPointSlice, modes: Sequence[int] = range(-3, 4)) -> DescentComparison:
    """Trivialization restricted to the slice is a product-preserving bijection onto the fixed points."""
    lo, hi = fp.window
    z = CyclicCocycle(F1Map.linear(L.g), L.M)
    action = DescentAction(L.V, z)
    elems = L.slice_basis(fp.degree_bound, lo, hi)
    images = [(d, x, L.trivialize(x)) for d, x in elems]
    cmp = DescentComparison(len(elems), fp.dim, 0)
    for _, x, y in images:
        if not action.is_fixed(y):
            cmp.not_fixed.append(str(x))
    keys = sorted({k for _, _, y in images for k in _coords(y)} | {k for b in fp.basis for k in _coords(b)})
    vecs = [[_coords(y).get(k, Fraction(0)) for k in keys] for _, _, y in images]
    cmp.image_rank = rank(vecs) if vecs else 0
    # images lie in the span of the computed fixed basis
    if rank(vecs + [[_coords(b).get(k, Fraction(0)) for k in keys] for b in fp.basis]) != fp.dim:
        cmp.not_fixed.append("loop images are not in the span of the fixed-point basis")
    for du, x, tx in images:
        for dv, y, ty in images:
            if du + dv > fp.degree_bound:
                continue
            for n in modes:
                cmp.tested += 1
                if L.trivialize(L.nproduct(x, n, y)) != L.TV.nproduct(tx, n, ty):
                    cmp.product_failures.append(f"{x}_{n}{y}")
    return cmp


def witness_transport(V: AffineAlgebra, z: CyclicCocycle, z2: CyclicCocycle, a: F1Map,
                      fp2: FixedPointSlice) -> list[str]:
    """With z2 = a^-1 z ^gamma a, a maps Fix(z2) into Fix(z) and a^-1 maps back; returns failures."""
    failures = []
    if not cohomologous_verify(z, z2, a):
        return ["z2 is not a^-1 z ^gamma a"]
    act = DescentAction(V, z)
    act2 = DescentAction(V, z2)
    fwd = f1_extend(V, a, z.m)
    back = f1_extend(V, a.inverse(), z.m)
    for x in fp2.basis:
        y = fwd(x)
        if not act.is_fixed(y):
            failures.append(f"a({x}) not fixed by z")
        elif not act2.is_fixed(back(y)) or back(y) != x:
            failures.append(f"a^-1 a({x}) != {x}")
    images = [_coords(fwd(x)) for x in fp2.basis]
    keys = sorted({k for c in images for k in c})
    if fp2.basis and rank([[c.get(k, Fraction(0)) for k in keys] for c in images]) != fp2.dim:
        failures.append("witness is not injective on the slice")
    return failures


# cocycle files -----------------------------------------------------------


class CocycleFileError(ValueError):
    pass


def cocycle_from_dict(data: dict) -> CyclicCocycle:
    try:
        m = int(data["m"])
        case = str(data.get("case", "affine"))
        rows = data["matrix"]
    except (KeyError, TypeError, ValueError) as exc:
        raise CocycleFileError(f"bad cocycle description: {exc}") from None
    if case not in ("affine", "heisenberg"):
        raise CocycleFileError(f"unknown case {case!r}")
    try:
        mat = Matrix([[parse_laurent_or_scalar(x, m) for x in r] for r in rows])
        trans = tuple(parse_laurent_or_scalar(x, m) for x in data.get("translation", []) or [])
    except ValueError as exc:
        raise CocycleFileError(str(exc)) from None
    if case == "affine" and any(trans):
        raise CocycleFileError("affine cocycles are bracket-preserving matrices without translation")
    return CyclicCocycle(F1Map(mat, trans), m, case)


def load_cocycle(path: str | Path) -> CyclicCocycle:
    with open(resolve_data_path(path)) as fh:
        data = yaml.safe_load(fh)
    if not isinstance(data, dict):
        raise CocycleFileError(f"{path}: expected a mapping")
    return cocycle_from_dict(data)
