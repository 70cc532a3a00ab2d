"""Base change V (x) S along a differential Laurent ring S.

Products are twisted by the derivation of S:

    (u (x) s)_n (v (x) r) = sum_j u_{n+j} v (x) D_j(s) r

so they are S-linear in the second slot only. The canonical Hasse-Schmidt
derivation is D_n(v (x) s) = sum_{i+j=n} D_i(v) (x) D_j(s).
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Mapping, Sequence

from .diffring import FracLaurent, LaurentRing, format_laurent
from .exactnum import is_scalar
from .states import Monomial, State, VACUUM, format_monomial, mono_degree
from .vacore import IdentityCheck


class TensorElement:
    """Finite sum of monomial (x) ring-element, collected per monomial."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping | None = None):
        clean = {}
        for mono, c in (terms or {}).items():
            if not isinstance(c, FracLaurent):
                c = FracLaurent.const(c)
            if c:
                clean[mono] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def from_state(cls, state: State, ring_element=None) -> TensorElement:
        r = FracLaurent.const(Fraction(1)) if ring_element is None else FracLaurent.coerce(ring_element)
        return cls({m: r * c for m, c in state})

    @classmethod
    def from_rows(cls, rows: Mapping, m: int) -> TensorElement:
        """Trusted constructor from {monomial: {exponent: coefficient}} accumulated in S_m."""
        out = object.__new__(cls)
        out._hash = None
        out.terms = {}
        for mono, row in rows.items():
            clean = {q: c for q, c in row.items() if c}
            if clean:
                out.terms[mono] = FracLaurent._raw(clean, m)
        return out

    @classmethod
    def pure(cls, mono: Monomial, r) -> TensorElement:
        return cls({mono: FracLaurent.coerce(r)})

    def to_state(self) -> State:
        if not all(c.is_constant() for c in self.terms.values()):
            raise ValueError("element has non-constant ring coefficients")
        return State({m: c.constant_value() for m, c in self.terms.items()})

    def __add__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out[m] + c if m in out else c
        return TensorElement(out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return TensorElement({m: -c for m, c in self.terms.items()})

    def __mul__(self, c):
        """Scale by a scalar or by a ring element (the S-module structure)."""
        if is_scalar(c) or isinstance(c, FracLaurent):
            return TensorElement({m: v * c for m, v in self.terms.items()})
        return NotImplemented

    __rmul__ = __mul__

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, TensorElement):
            return self.terms == other.terms
        if isinstance(other, State):
            return self == TensorElement.from_state(other)
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __iter__(self):
        return iter(self.terms.items())

    def __len__(self) -> int:
        return len(self.terms)

    def coefficient(self, mono: Monomial) -> FracLaurent:
        return self.terms.get(mono, FracLaurent({}))

    def degree(self) -> int | None:
        return max((mono_degree(m) for m in self.terms), default=None)

    def exponents(self) -> set[Fraction]:
        return {q for c in self.terms.values() for q in c.terms}

    def map_ring(self, f) -> TensorElement:
        return TensorElement({m: f(c) for m, c in self.terms.items()})

    def format(self, labels: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({format_laurent(c)})*{format_monomial(m, labels)}" for m, c in sorted(self.terms.items()))

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"TensorElement({self.format()})"


def tensor_nproduct(V, x: TensorElement, n: int, y: TensorElement) -> TensorElement:
    rows: dict = {}
    m = 1
    for mu, s in x:
        du = mono_degree(mu)
        for mv, r in y:
            bound = du + mono_degree(mv)
            for j in range(max(0, bound - n)):
                ds = s.hs(j)
                if not ds:
                    continue
                terms = V.nproduct_terms(mu, n + j, mv)
                if not terms:
                    continue
                m = lcm(m, ds.m, r.m)
                prod = [(q1 + q2, c1 * c2) for q1, c1 in ds.terms.items() for q2, c2 in r.terms.items()]
                for mono, c in terms.items():
                    row = rows.setdefault(mono, {})
                    for q, v in prod:
                        row[q] = row.get(q, 0) + v * c
    return TensorElement.from_rows(rows, m)


def tensor_hs(V, x: TensorElement, n: int) -> TensorElement:
    if n < 0:
        raise ValueError("Hasse-Schmidt index must be nonnegative")
    out: dict = {}
    for mono, s in x:
        for i in range(n + 1):
            ds = s.hs(n - i)
            if not ds:
                continue
            for m, c in V.nproduct_terms(mono, -i - 1, VACUUM).items():
                term = ds * c
                out[m] = out[m] + term if m in out else term
    return TensorElement(out)


class TensorAlgebra:
    """V (x) S as a vertex algebra over S, for use with the generic checkers."""

    def __init__(self, V, ring: LaurentRing | int = 1):
        self.V = V
        self.ring = ring if isinstance(ring, LaurentRing) else LaurentRing(ring)
        self.name = f"{V.name}(x){self.ring}"

    @property
    def rank(self) -> int:
        return self.V.rank

    @property
    def vacuum(self) -> TensorElement:
        return TensorElement.pure(VACUUM, self.ring.one)

    @property
    def zero(self) -> TensorElement:
        return TensorElement()

    def lift(self, state: State, r=None) -> TensorElement:
        return TensorElement.from_state(state, r)

    def generator(self, a, r=None) -> TensorElement:
        return self.lift(self.V.generator(a), r)

    def vector(self, coords: Sequence) -> TensorElement:
        """sum_i coords[i] a^i_{-1} 1 with ring (or scalar) coordinates."""
        return TensorElement({((-1, a),): c for a, c in enumerate(coords)})

    def translation(self, r) -> TensorElement:
        return TensorElement.pure(VACUUM, r)

    def nproduct(self, x: TensorElement, n: int, y: TensorElement) -> TensorElement:
        return tensor_nproduct(self.V, x, n, y)

    def hs(self, x: TensorElement, n: int) -> TensorElement:
        return tensor_hs(self.V, x, n)

    def regularity_bound(self, x: TensorElement, y: TensorElement) -> int:
        dx, dy = x.degree(), y.degree()
        if dx is None or dy is None:
            return -(10**9)
        return dx + dy

    def degree(self, x: TensorElement) -> int | None:
        return x.degree()

    def basis(self, degree: int) -> list[TensorElement]:
        return [self.lift(b) for b in self.V.basis(degree)]

    def galois(self, x: TensorElement, j: int = 1) -> TensorElement:
        """(id (x) gamma^j) x."""
        return x.map_ring(lambda c: self.ring.galois(j, c))


def ring_multiply(r, x: TensorElement) -> TensorElement:
    """r . x = (1 (x) r)_{-1} x."""
    return x * FracLaurent.coerce(r)


def twisted_linearity_check(T: TensorAlgebra, r, u: TensorElement, n: int, v: TensorElement) -> IdentityCheck:
    """(r u)_n v = sum_i D_i(r) u_{n+i} v."""
    r = FracLaurent.coerce(r)
    lhs = T.nproduct(ring_multiply(r, u), n, v)
    rhs = T.zero
    bound = T.regularity_bound(u, v)
    for i in range(max(0, bound - n)):
        d = r.hs(i)
        if d:
            rhs = rhs + ring_multiply(d, T.nproduct(u, n + i, v))
    return IdentityCheck(lhs == rhs, lhs, rhs)


def right_linearity_check(T: TensorAlgebra, r, u: TensorElement, n: int, v: TensorElement) -> IdentityCheck:
    """u_n (r v) = r u_n v."""
    r = FracLaurent.coerce(r)
    lhs = T.nproduct(u, n, ring_multiply(r, v))
    rhs = ring_multiply(r, T.nproduct(u, n, v))
    return IdentityCheck(lhs == rhs, lhs, rhs)
