"""Universal affine vertex algebras V(g, l) on PBW states.

Modes obey [a_m, b_n] = m (a, b) delta_{m,-n} l + [a, b]_{m+n} and a_m 1 = 0
for m >= 0. ``mode_action`` straightens a mode into PBW order; ``nproduct``
evaluates u_n v by recursion on the length of u with the iterate formula

    (a_p r)_n w = sum_i (-1)^i binom(p, i) [a_{p-i}(r_{n+i} w) - (-1)^p r_{p+n-i}(a_i w)]

which terminates because r_k w = 0 for k >= deg r + deg w and a_i w = 0 for
i > deg w. Results are memoized per monomial triple; caches only grow and
hold immutable values, so concurrent readers are safe.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .basechange import TensorAlgebra, TensorElement
from .diffring import FracLaurent
from .exactnum import Matrix, binom_frac, is_scalar
from .liedata import LieAut, LiePresentation, PresentationError, validate_presentation, warn_critical_level
from .states import VACUUM, Monomial, State, accumulate, format_monomial, mono_degree
from .vacore import IdentityCheck

log = logging.getLogger(__name__)


class AffineAlgebra:
    """V(g, l) for a validated Lie presentation and an exact level."""

    def __init__(self, lie: LiePresentation, level=Fraction(1), name: str | None = None, validate: bool = True):
        if validate:
            report = validate_presentation(lie)
            if not report.ok:
                raise PresentationError(f"invalid presentation: {report}; {report.failures[:3]}")
        if not is_scalar(level):
            raise TypeError("level must be an exact scalar")
        warn_critical_level(lie, level)
        self.lie = lie
        self.level = Fraction(level) if isinstance(level, int) else level
        self.name = name or f"V({lie.name or 'g'},{level})"
        n = lie.dim
        self.rank = n
        self._br = [[lie.bracket_basis(a, b) for b in range(n)] for a in range(n)]
        self._form = [[lie.form[a, b] for b in range(n)] for a in range(n)]
        self._act_cache: dict = {}
        self._np_cache: dict = {}
        self._basis_cache: dict[int, list[Monomial]] = {}

    # basic elements ------------------------------------------------------
    @property
    def labels(self) -> tuple[str, ...]:
        return self.lie.labels

    @property
    def vacuum(self) -> State:
        return State.vacuum()

    @property
    def zero(self) -> State:
        return State()

    def generator(self, a: int | str, q: int = -1) -> State:
        if isinstance(a, str):
            a = self.lie.index(a)
        if q >= 0:
            return State()
        return State({((q, a),): Fraction(1)})

    def vector(self, coords: Sequence) -> State:
        """The degree-one state sum_i coords[i] a^i_{-1} 1."""
        return State({((-1, a),): c for a, c in enumerate(coords) if c})

    def coordinates(self, state: State) -> tuple:
        """Inverse of ``vector`` on degree-one states."""
        out = [Fraction(0)] * self.rank
        for mono, c in state:
            if len(mono) != 1 or mono[0][0] != -1:
                raise ValueError(f"{state} is not in degree one")
            out[mono[0][1]] = c
        return tuple(out)

    def format(self, state: State) -> str:
        return state.format(self.labels)

    # grading -------------------------------------------------------------
    def basis_monomials(self, degree: int) -> list[Monomial]:
        if degree not in self._basis_cache:
            modes = [(q, a) for q in range(-degree, 0) for a in range(self.rank)]
            out: list[Monomial] = []

            def grow(prefix: list, start: int, left: int):
                if left == 0:
                    out.append(tuple(prefix))
                    return
                for idx in range(start, len(modes)):
                    q, a = modes[idx]
                    if -q <= left:
                        prefix.append((q, a))
                        grow(prefix, idx, left + q)
                        prefix.pop()

            grow([], 0, degree)
            self._basis_cache[degree] = sorted(out)
        return self._basis_cache[degree]

    def basis(self, degree: int) -> list[State]:
        return [State({m: Fraction(1)}) for m in self.basis_monomials(degree)]

    def dims(self, max_degree: int) -> list[int]:
        return [len(self.basis_monomials(d)) for d in range(max_degree + 1)]

    def degree(self, v: State) -> int | None:
        return v.degree()

    def regularity_bound(self, u: State, v: State) -> int:
        du, dv = u.degree(), v.degree()
        if du is None or dv is None:
            return -(10**9)
        return du + dv

    # mode action ---------------------------------------------------------
    def _act(self, a: int, q: int, mono: Monomial) -> dict:
        key = (a, q, mono)
        hit = self._act_cache.get(key)
        if hit is not None:
            return hit
        if not mono:
            out = {} if q >= 0 else {((q, a),): Fraction(1)}
        elif q < 0 and (q, a) <= mono[0]:
            out = {((q, a),) + mono: Fraction(1)}
        else:
            # a_q b_p rest = b_p (a_q rest) + [a_q, b_p] rest
            p, b = mono[0]
            rest = mono[1:]
            out = {}
            for m2, c2 in self._act(a, q, rest).items():
                for m3, c3 in self._act(b, p, m2).items():
                    accumulate(out, m3, c2 * c3)
            if q + p == 0 and self._form[a][b]:
                accumulate(out, rest, q * self._form[a][b] * self.level)
            for k, c in self._br[a][b].items():
                for m3, c3 in self._act(k, q + p, rest).items():
                    accumulate(out, m3, c * c3)
        self._act_cache[key] = out
        return out

    def mode_action(self, a: int | str, q: int, v: State) -> State:
        if isinstance(a, str):
            a = self.lie.index(a)
        out: dict = {}
        for mono, c in v:
            for m2, c2 in self._act(a, q, mono).items():
                accumulate(out, m2, c * c2)
        return State(out)

    # n-products ----------------------------------------------------------
    def nproduct_terms(self, mu: Monomial, n: int, mv: Monomial) -> dict:
        """u_n v on basis monomials, as a coefficient dict."""
        if not mu:
            return {mv: Fraction(1)} if n == -1 else {}
        if n >= mono_degree(mu) + mono_degree(mv):
            return {}
        key = (mu, n, mv)
        hit = self._np_cache.get(key)
        if hit is not None:
            return hit
        p, a = mu[0]
        rest = mu[1:]
        if not rest and p == -1:
            out = self._act(a, n, mv)
        else:
            out = {}
            bound = mono_degree(rest) + mono_degree(mv)
            for i in range(max(0, bound - n)):
                c = binom_frac(p, i) * (-1) ** i
                for m2, c2 in self.nproduct_terms(rest, n + i, mv).items():
                    for m3, c3 in self._act(a, p - i, m2).items():
                        accumulate(out, m3, c * c2 * c3)
            sign = -1 if p % 2 else 1
            for i in range(mono_degree(mv) + 1):
                c = -binom_frac(p, i) * (-1) ** i * sign
                for m2, c2 in self._act(a, i, mv).items():
                    for m3, c3 in self.nproduct_terms(rest, p + n - i, m2).items():
                        accumulate(out, m3, c * c2 * c3)
        self._np_cache[key] = out
        return out

    def nproduct(self, u: State, n: int, v: State) -> State:
        out: dict = {}
        for mu, cu in u:
            for mv, cv in v:
                for m, c in self.nproduct_terms(mu, n, mv).items():
                    accumulate(out, m, cu * cv * c)
        return State(out)

    def hs(self, v: State, i: int) -> State:
        """Canonical Hasse-Schmidt derivation D_i(v) = v_{-i-1} 1."""
        return self.nproduct(v, -i - 1, self.vacuum)

    def cache_sizes(self) -> dict[str, int]:
        return {"modes": len(self._act_cache), "products": len(self._np_cache)}

    def __repr__(self) -> str:
        return f"AffineAlgebra({self.name})"


def build_affine(p: LiePresentation, level=Fraction(1)) -> AffineAlgebra:
    return AffineAlgebra(p, level)


def heisenberg(rank: int = 1, level=Fraction(1), form: Matrix | None = None) -> AffineAlgebra:
    from .liedata import abelian

    return AffineAlgebra(abelian(rank, form), level)


# maps between algebras ---------------------------------------------------


class StateMap:
    """Vertex algebra map V(g, l) -> W determined by generator images.

    The image of a^1_{q1} ... a^r_{qr} 1 is x^1_{q1}( ... x^r_{qr} 1) where x^i
    is the image of a^i_{-1} 1 and the products are those of ``target``.
    ``target`` may be an AffineAlgebra (images are States) or a TensorAlgebra
    (images are TensorElements, products twisted by the ring derivation).
    """

    def __init__(self, source: AffineAlgebra, target, images: Sequence):
        if len(images) != source.rank:
            raise ValueError(f"need {source.rank} generator images, got {len(images)}")
        self.source = source
        self.target = target
        self.images = tuple(images)
        self._cache: dict[Monomial, object] = {}

    def on_monomial(self, mono: Monomial):
        hit = self._cache.get(mono)
        if hit is None:
            if not mono:
                hit = self.target.vacuum
            else:
                q, a = mono[0]
                hit = self.target.nproduct(self.images[a], q, self.on_monomial(mono[1:]))
            self._cache[mono] = hit
        return hit

    def __call__(self, x):
        total = self.target.zero
        for mono, c in x:
            total = total + self.on_monomial(mono) * c
        return total


def linear_map(source: AffineAlgebra, target: AffineAlgebra, matrix: Matrix) -> StateMap:
    """Extend a linear map on generators (columns = images in target coordinates)."""
    return StateMap(source, target, [target.vector(matrix.column(i)) for i in range(source.rank)])


def lie_aut_map(V: AffineAlgebra, g: LieAut | Matrix) -> StateMap:
    mat = g.matrix if isinstance(g, LieAut) else g
    return linear_map(V, V, mat)


def _rational_sqrt(x: Fraction) -> Fraction | None:
    from math import isqrt

    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = isqrt(n), isqrt(d)
    return Fraction(rn, rd) if rn * rn == n and rd * rd == d else None


def sqrt_in_field(x):
    """A square root of x in Q(zeta_4) when one exists there, else None."""
    from .exactnum import zeta_power

    if not isinstance(x, (int, Fraction)):
        return None
    x = Fraction(x)
    root = _rational_sqrt(abs(x))
    if root is None:
        return None
    return root if x >= 0 else root * zeta_power(4, 1)


def heisenberg_rescaling(V_level: AffineAlgebra, V_one: AffineAlgebra) -> StateMap | None:
    """V(h, l) -> V(h, 1), a -> s a with s^2 = l; None if no square root of l is available."""
    if not V_level.lie.abelian or V_one.level != 1 or V_level.rank != V_one.rank:
        raise ValueError("rescaling needs abelian algebras of equal rank, target at level 1")
    s = sqrt_in_field(V_level.level)
    if s is None:
        log.info("level %s has no square root in the supported fields", V_level.level)
        return None
    return StateMap(V_level, V_one, [V_one.generator(a) * s for a in range(V_one.rank)])


# F1 maps over a Laurent ring ---------------------------------------------


class F1PreconditionError(ValueError):
    """A map on F_1 does not respect the 0-th or 1-st products."""


def _ring(x) -> FracLaurent:
    return FracLaurent.coerce(x)


def row_times(c: Sequence, M: Matrix) -> tuple:
    """Row vector c times matrix M."""
    n = M.shape[1]
    out = []
    for i in range(n):
        acc = FracLaurent({})
        for j, cj in enumerate(c):
            if cj and M[j, i]:
                acc = acc + cj * M[j, i]
        out.append(acc)
    return tuple(out)


@dataclass(frozen=True)
class F1Map:
    """a_i -> sum_j M[j, i] a_j + c_i 1, with entries in a Laurent ring.

    Vertex algebra maps over the ring are linear in ring multiples, so these
    compose as (M2, c2) o (M1, c1) = (M2 M1, c2 M1 + c1).
    """

    matrix: Matrix
    translation: tuple

    def __post_init__(self):
        n, k = self.matrix.shape
        if n != k:
            raise ValueError("F1 map matrix must be square")
        object.__setattr__(self, "matrix", self.matrix.map(_ring))
        trans = tuple(_ring(x) for x in self.translation) if self.translation else tuple(FracLaurent({}) for _ in range(n))
        if len(trans) != n:
            raise ValueError(f"translation has length {len(trans)}, expected {n}")
        object.__setattr__(self, "translation", trans)

    @classmethod
    def identity(cls, n: int) -> F1Map:
        return cls(Matrix.identity(n), ())

    @classmethod
    def linear(cls, matrix: Matrix | LieAut) -> F1Map:
        mat = matrix.matrix if isinstance(matrix, LieAut) else matrix
        return cls(mat, ())

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def image(self, T: TensorAlgebra, i: int) -> TensorElement:
        return T.vector(self.matrix.column(i)) + T.translation(self.translation[i])

    def images(self, T: TensorAlgebra) -> list[TensorElement]:
        return [self.image(T, i) for i in range(self.dim)]

    def compose(self, first: F1Map) -> F1Map:
        """self o first."""
        c = row_times(self.translation, first.matrix)
        return F1Map(self.matrix @ first.matrix, tuple(x + y for x, y in zip(c, first.translation)))

    def inverse(self) -> F1Map:
        inv = self.matrix.inverse()
        return F1Map(inv, tuple(-x for x in row_times(self.translation, inv)))

    def power(self, k: int) -> F1Map:
        out = F1Map.identity(self.dim)
        for _ in range(k):
            out = self.compose(out)
        return out

    def map_entries(self, f) -> F1Map:
        return F1Map(self.matrix.map(f), tuple(f(x) for x in self.translation))

    def is_constant(self) -> bool:
        return all(x.is_constant() for r in self.matrix.rows for x in r) and all(
            x.is_constant() for x in self.translation
        )

    def is_identity(self) -> bool:
        return self == F1Map.identity(self.dim)

    def __str__(self) -> str:
        rows = "; ".join(", ".join(str(x) for x in r) for r in self.matrix.rows)
        return f"F1Map([{rows}] | {', '.join(str(x) for x in self.translation)})"


def f1map_from_images(T: TensorAlgebra, images: Sequence[TensorElement]) -> F1Map:
    """Read (M, c) off generator images lying in F_1."""
    n = T.rank
    cols, trans = [], []
    for img in images:
        col = [FracLaurent({}) for _ in range(n)]
        c = FracLaurent({})
        for mono, r in img:
            if mono == VACUUM:
                c = r
            elif len(mono) == 1 and mono[0][0] == -1:
                col[mono[0][1]] = r
            else:
                raise ValueError(f"image {img} is not in F_1")
        cols.append(col)
        trans.append(c)
    return F1Map(Matrix.from_columns(cols), tuple(trans))


def f1_conditions(T: TensorAlgebra, phi: F1Map, modes: Sequence[int] = (0, 1, 2)) -> list[str]:
    """Failures of Phi(a)_n Phi(b) = Phi(a_n b) on generator pairs."""
    V = T.V
    imgs = phi.images(T)
    failures = []
    for a in range(V.rank):
        for b in range(V.rank):
            for n in modes:
                lhs = T.nproduct(imgs[a], n, imgs[b])
                if n == 0:
                    rhs = T.zero
                    for k, c in V.lie.bracket_basis(a, b).items():
                        rhs = rhs + imgs[k] * c
                elif n == 1:
                    rhs = T.vacuum * (V.level * V.lie.form[a, b])
                else:
                    rhs = T.zero
                if lhs != rhs:
                    failures.append(f"{V.labels[a]}_{n}{V.labels[b]}: {lhs} != {rhs}")
    return failures


class F1Extension(StateMap):
    """The vertex algebra endomorphism of V (x) S extending an F1 map."""

    def __init__(self, V: AffineAlgebra, phi: F1Map, ring=1):
        T = TensorAlgebra(V, ring)
        super().__init__(V, T, phi.images(T))
        self.phi = phi

    def __call__(self, x) -> TensorElement:
        total = self.target.zero
        for mono, c in x:
            total = total + self.on_monomial(mono) * c
        return total


def f1_extend(V: AffineAlgebra, phi: F1Map, ring=1, check: bool = True) -> F1Extension:
    if phi.dim != V.rank:
        raise ValueError(f"map has dimension {phi.dim}, algebra has rank {V.rank}")
    if check:
        failures = f1_conditions(TensorAlgebra(V, ring), phi)
        if failures:
            raise F1PreconditionError("; ".join(failures[:3]))
    return F1Extension(V, phi, ring)


@dataclass
class MapReport:
    tested: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def __bool__(self) -> bool:
        return self.passed


def product_preservation(ext: StateMap, degree_bound: int, modes: Sequence[int]) -> MapReport:
    """psi(u_n v) = psi(u)_n psi(v) on basis pairs with deg u + deg v <= bound."""
    V, W = ext.source, ext.target
    rep = MapReport()
    for du in range(degree_bound + 1):
        for dv in range(degree_bound - du + 1):
            for mu in V.basis_monomials(du):
                for mv in V.basis_monomials(dv):
                    for n in modes:
                        rep.tested += 1
                        prod = State(V.nproduct_terms(mu, n, mv))
                        lhs = ext(prod)
                        rhs = W.nproduct(ext.on_monomial(mu), n, ext.on_monomial(mv))
                        if lhs != rhs:
                            rep.failures.append(f"{format_monomial(mu, V.labels)}_{n}{format_monomial(mv, V.labels)}")
    return rep


def inverse_check(forward: StateMap, backward: StateMap, degree_bound: int) -> MapReport:
    """backward o forward = id on the PBW basis up to the bound."""
    V = forward.source
    rep = MapReport()
    for d in range(degree_bound + 1):
        for mono in V.basis_monomials(d):
            rep.tested += 1
            img = backward(forward.on_monomial(mono))
            if img != TensorElement.pure(mono, Fraction(1)) and img != State({mono: Fraction(1)}):
                rep.failures.append(format_monomial(mono, V.labels))
    return rep


def filtered_automorphism_check(V: AffineAlgebra, phi: F1Map, ring=1, degree_bound: int = 3,
                                modes: Sequence[int] = range(-3, 4)) -> MapReport:
    """Extension is product preserving and inverted by the extension of phi^-1."""
    ext = f1_extend(V, phi, ring)
    back = f1_extend(V, phi.inverse(), ring)
    rep = product_preservation(ext, degree_bound, modes)
    for label, r in (("forward", inverse_check(ext, back, degree_bound)), ("backward", inverse_check(back, ext, degree_bound))):
        rep.tested += r.tested
        rep.failures.extend(f"{label} inverse: {f}" for f in r.failures)
    return rep


# automorphism coding -----------------------------------------------------


@dataclass(frozen=True)
class AutPair:
    """(f, phi): f a row vector over the ring, phi a ring-linear automorphism of g (x) R."""

    f: tuple
    phi: Matrix

    def __post_init__(self):
        object.__setattr__(self, "f", tuple(_ring(x) for x in self.f))
        object.__setattr__(self, "phi", self.phi.map(_ring))

    @classmethod
    def identity(cls, n: int) -> AutPair:
        return cls(tuple(FracLaurent({}) for _ in range(n)), Matrix.identity(n))

    def to_f1map(self) -> F1Map:
        return F1Map(self.phi, row_times(self.f, self.phi))


def aut_pair_encode(phi: F1Map) -> AutPair:
    """Psi -> (Psi j Psi_bar^-1 - j, Psi_bar) for the canonical section j."""
    return AutPair(row_times(phi.translation, phi.matrix.inverse()), phi.matrix)


def aut_pair_compose(second: AutPair, first: AutPair) -> AutPair:
    """(g, psi)(f, phi) = (g + f psi^-1, psi phi)."""
    shifted = row_times(first.f, second.phi.inverse())
    return AutPair(tuple(x + y for x, y in zip(second.f, shifted)), second.phi @ first.phi)


def alpha(T: TensorAlgebra, x: Sequence, y: Sequence) -> FracLaurent:
    """Vacuum component of j(x)_0 j(y) for x, y in g (x) R."""
    prod = T.nproduct(T.vector(x), 0, T.vector(y))
    rest = prod - T.vector(T.V.lie.bracket(x, y))
    if any(mono != VACUUM for mono, _ in rest):
        raise ValueError("0-th product of degree-one states left F_1")
    return rest.coefficient(VACUUM)


def translation_condition_check(T: TensorAlgebra, pair: AutPair, x: Sequence, y: Sequence) -> IdentityCheck:
    """alpha(x, y) - alpha(phi^-1 x, phi^-1 y) = f([x, y])."""
    inv = pair.phi.inverse()
    lhs = alpha(T, x, y) - alpha(T, inv.apply(x), inv.apply(y))
    br = T.V.lie.bracket(x, y)
    rhs = FracLaurent({})
    for fi, bi in zip(pair.f, br):
        if fi and bi:
            rhs = rhs + fi * bi
    return IdentityCheck(lhs == rhs, lhs, rhs)


def ring_samples(V: AffineAlgebra, multipliers: Sequence = (1, "t", "t^2", "t^-1")) -> list[tuple]:
    """R-multiples of basis vectors of g, as coordinate tuples."""
    from .diffring import parse_laurent_or_scalar

    out = []
    for r in multipliers:
        rr = parse_laurent_or_scalar(r)
        for i in range(V.rank):
            out.append(tuple(rr if k == i else FracLaurent({}) for k in range(V.rank)))
    return out


# instance checks for the structure of automorphism groups ----------------


def heisenberg_decompose(V: AffineAlgebra, phi: F1Map) -> tuple[tuple, Matrix] | None:
    """(f, phi) with phi orthogonal over ker D, or None when phi is not of that shape."""
    if not V.lie.abelian:
        raise ValueError("Heisenberg decomposition needs an abelian presentation")
    M = phi.matrix
    if not all(x.is_constant() for r in M.rows for x in r):
        return None
    const = M.map(lambda x: x.constant_value())
    if const.transpose() @ V.lie.form @ const != V.lie.form:
        return None
    pair = aut_pair_encode(phi)
    return pair.f, const


def forced_translation(T: TensorAlgebra, phi_matrix: Matrix) -> tuple | None:
    """Solve f[xy] = alpha(x, y) - alpha(phi^-1 x, phi^-1 y) for f and return c = f phi.

    On a perfect Lie algebra the linear part determines the translation; None
    means the system has no solution or is underdetermined.
    """
    from .exactnum import solve_linear

    V = T.V
    n = V.rank
    inv = phi_matrix.map(_ring).inverse()
    units = [V.lie.unit(i) for i in range(n)]
    rows, rhs = [], []
    for i in range(n):
        for j in range(n):
            br = V.lie.bracket(units[i], units[j])
            rows.append(list(br))
            x = tuple(_ring(v) for v in units[i])
            y = tuple(_ring(v) for v in units[j])
            rhs.append(alpha(T, x, y) - alpha(T, inv.apply(x), inv.apply(y)))
    A = Matrix(rows)
    exps = sorted({q for r in rhs for q in r.terms})
    f = [FracLaurent({}) for _ in range(n)]
    for q in exps:
        b = Matrix([[r.coefficient(q)] for r in rhs])
        sol = solve_linear(A, b)
        if not sol.consistent or sol.nullspace:
            return None
        for k, c in enumerate(sol.particular.column(0)):
            f[k] = f[k] + FracLaurent.monomial(q, c)
    if not exps and solve_linear(A, Matrix.zeros(len(rows), 1)).nullspace:
        return None
    return row_times(f, phi_matrix.map(_ring))


def preserves_bracket_over_ring(V: AffineAlgebra, M: Matrix) -> bool:
    units = [tuple(_ring(x) for x in V.lie.unit(i)) for i in range(V.rank)]
    M = M.map(_ring)
    for i in range(V.rank):
        for j in range(V.rank):
            lhs = M.apply(V.lie.bracket(units[i], units[j]))
            rhs = V.lie.bracket(M.column(i), M.column(j))
            if any(a != b for a, b in zip(lhs, rhs)):
                return False
    return True


def translation_operator_check(V: AffineAlgebra, a: int, m: int, v: State) -> IdentityCheck:
    """D_1(a_{-m} v) = m a_{-m-1} v + a_{-m} D_1(v)."""
    lhs = V.hs(V.mode_action(a, -m, v), 1)
    rhs = V.mode_action(a, -m - 1, v) * m + V.mode_action(a, -m, V.hs(v, 1))
    return IdentityCheck(lhs == rhs, lhs, rhs)


def degree_one_coordinates(V: AffineAlgebra):
    """Split an F_1 state into (coordinates of the degree-one part, vacuum coefficient)."""

    def coords(x: State):
        vec = [Fraction(0)] * V.rank
        vac = Fraction(0)
        for mono, c in x:
            if mono == VACUUM:
                vac = c
            elif len(mono) == 1 and mono[0][0] == -1:
                vec[mono[0][1]] = c
            else:
                raise ValueError(f"{V.format(x)} is not in F_1")
        return tuple(vec), vac

    return coords
