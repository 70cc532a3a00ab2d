"""Exact scalars: rationals, cyclotomic numbers, and dense linear algebra over them.

Rationals are plain :class:`fractions.Fraction`. Elements of Q(zeta_m) are
:class:`CycNum`; arithmetic that lands back in Q returns a ``Fraction``, so a
``CycNum`` instance is never rational. Mixed conductors are promoted to their
lcm using the compatible system zeta_m = zeta_N ** (N // m).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence

Scalar = "Fraction | CycNum"


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def euler_phi(m: int) -> int:
    result, n, p = m, m, 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            result -= result // p
        p += 1
    if n > 1:
        result -= result // n
    return result


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    # integer polynomials, low degree first; den monic
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for k in range(len(out) - 1, -1, -1):
        c = num[k + len(den) - 1]
        out[k] = c
        if c:
            for i, d in enumerate(den):
                num[k + i] -= c * d
    assert not any(num), "inexact division"
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(m: int) -> tuple[int, ...]:
    """Integer coefficients of the m-th cyclotomic polynomial, constant term first."""
    if m < 1:
        raise ValueError("conductor must be positive")
    poly = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            poly = _poly_divexact(poly, list(cyclotomic_poly(d)))
    return tuple(poly)


def _reduce(coeffs: Sequence[Fraction], m: int) -> tuple[Fraction, ...]:
    phi = cyclotomic_poly(m)
    n = len(phi) - 1
    c = list(coeffs)
    for k in range(len(c) - 1, n - 1, -1):
        lead = c[k]
        if lead:
            for i in range(n):
                if phi[i]:
                    c[k - n + i] -= lead * phi[i]
        c[k] = 0
    c = c[:n] + [Fraction(0)] * (n - len(c))
    return tuple(Fraction(x) for x in c)


def _make(m: int, coeffs: tuple[Fraction, ...]) -> "Fraction | CycNum":
    if not any(coeffs[1:]):
        return coeffs[0] if coeffs else Fraction(0)
    obj = object.__new__(CycNum)
    obj.m = m
    obj.coeffs = coeffs
    return obj


def _poly_mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return out


def _poly_trim(a: list[Fraction]) -> list[Fraction]:
    while a and not a[-1]:
        a.pop()
    return a


def _poly_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = _poly_trim(list(a))
    b = _poly_trim(list(b))
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b) and a:
        c = a[-1] / b[-1]
        k = len(a) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            a[k + i] -= c * y
        _poly_trim(a)
    return q, a


class CycNum:
    """An irrational element of Q(zeta_m), stored in the power basis mod Phi_m."""

    __slots__ = ("m", "coeffs")

    def __new__(cls, m: int, coeffs: Iterable) -> "Fraction | CycNum":  # type: ignore[misc]
        return _make(m, _reduce([Fraction(c) for c in coeffs], m))

    # promotion -----------------------------------------------------------
    def embed(self, n: int) -> tuple[Fraction, ...]:
        """Coordinates of self in conductor ``n`` (a multiple of ``self.m``)."""
        if n % self.m:
            raise ValueError(f"conductor {n} is not a multiple of {self.m}")
        return embed_coeffs(self.coeffs, self.m, n)

    def _coerce(self, other) -> tuple[int, tuple, tuple] | None:
        if isinstance(other, CycNum):
            n = lcm(self.m, other.m)
            return n, self.embed(n), other.embed(n)
        if isinstance(other, (int, Fraction)):
            rest = (Fraction(0),) * (len(self.coeffs) - 1)
            return self.m, self.coeffs, (Fraction(other),) + rest
        return None

    # arithmetic ----------------------------------------------------------
    def __add__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        n, a, b = c
        return _make(n, tuple(x + y for x, y in zip(a, b)))

    __radd__ = __add__

    def __neg__(self):
        return _make(self.m, tuple(-x for x in self.coeffs))

    def __sub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        n, a, b = c
        return _make(n, tuple(x - y for x, y in zip(a, b)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return _make(self.m, tuple(x * other for x in self.coeffs))
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        n, a, b = c
        return _make(n, _reduce(_poly_mul(a, b), n))

    __rmul__ = __mul__

    def inverse(self) -> "CycNum":
        # extended Euclid against Phi_m
        phi = [Fraction(x) for x in cyclotomic_poly(self.m)]
        r0, r1 = phi, _poly_trim(list(self.coeffs))
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while len(r1) > 1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_trim([x - y for x, y in _zip_pad(s0, _poly_mul(q, s1))])
        c = r1[0]
        return _make(self.m, _reduce([x / c for x in s1], self.m))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return _make(self.m, tuple(x / other for x in self.coeffs))
        if isinstance(other, CycNum):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result, base = Fraction(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # comparison ----------------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, CycNum):
            n = lcm(self.m, other.m)
            return self.embed(n) == other.embed(n)
        if isinstance(other, (int, Fraction)):
            return False  # a CycNum is never rational
        return NotImplemented

    def __hash__(self) -> int:
        # equal values may live in different conductors; stay consistent with __eq__
        return hash("CycNum")

    def __bool__(self) -> bool:
        return True

    def __repr__(self) -> str:
        return format_scalar(self)

    __str__ = __repr__


def _zip_pad(a: list, b: list):
    n = max(len(a), len(b))
    a = a + [Fraction(0)] * (n - len(a))
    b = b + [Fraction(0)] * (n - len(b))
    return zip(a, b)


def embed_coeffs(coeffs: Sequence[Fraction], m: int, n: int) -> tuple[Fraction, ...]:
    step = n // m
    big = [Fraction(0)] * (step * (len(coeffs) - 1) + 1)
    for i, c in enumerate(coeffs):
        big[i * step] = c
    return _reduce(big, n)


def zeta_power(m: int, j: int) -> "Fraction | CycNum":
    """zeta_m ** j for the fixed primitive m-th root of unity zeta_m = x mod Phi_m."""
    if m < 1:
        raise ValueError("m must be positive")
    j %= m
    return _make(m, _reduce([Fraction(0)] * j + [Fraction(1)], m))


_SCALAR_TYPES = (int, Fraction, CycNum)


def is_scalar(x) -> bool:
    # type() first: Fraction's ABC metaclass makes isinstance slow on hot paths
    return type(x) in _SCALAR_TYPES or isinstance(x, _SCALAR_TYPES)


def conductor(x) -> int:
    return x.m if isinstance(x, CycNum) else 1


def binom_frac(q, i: int):
    """Generalized binomial coefficient q(q-1)...(q-i+1)/i!."""
    if i < 0:
        return Fraction(0)
    tq = type(q)
    if tq is int:
        return _binom_int(q, i)
    if tq is Fraction:
        if q.denominator == 1:
            return _binom_int(q.numerator, i)
        return _binom_rational(q, i)
    if isinstance(q, (int, Fraction)):
        return _binom_rational(Fraction(q), i)
    result = Fraction(1)
    for k in range(i):
        result = result * (q - k) / (k + 1)
    return result


@lru_cache(maxsize=65536)
def _binom_int(q: int, i: int) -> Fraction:
    return _binom_rational(Fraction(q), i)


@lru_cache(maxsize=65536)
def _binom_rational(q: Fraction, i: int) -> Fraction:
    result = Fraction(1)
    for k in range(i):
        result = result * (q - k) / (k + 1)
    return result


# text form ---------------------------------------------------------------

_CYC_RE = re.compile(r"^Z(\d+)\[([^\]]*)\]$")


def format_scalar(x) -> str:
    if isinstance(x, CycNum):
        return f"Z{x.m}[" + ",".join(str(c) for c in x.coeffs) + "]"
    return str(Fraction(x))


def parse_scalar(text) -> "Fraction | CycNum":
    """Inverse of :func:`format_scalar`; also accepts plain ints."""
    if isinstance(text, (int, Fraction)) and not isinstance(text, bool):
        return Fraction(text)
    if isinstance(text, float):
        raise ValueError("floating point scalars are not accepted")
    s = str(text).replace(" ", "")
    match = _CYC_RE.match(s)
    if match:
        m = int(match.group(1))
        coeffs = [Fraction(c) for c in match.group(2).split(",") if c]
        return CycNum(m, coeffs)
    if re.fullmatch(r"[+-]?\d+(/\d+)?", s):
        return Fraction(s)
    raise ValueError(f"cannot parse scalar {text!r}")


# matrices ----------------------------------------------------------------


class Matrix:
    """Dense matrix with exact entries (scalars, or ring elements such as Laurent polynomials)."""

    __slots__ = ("rows",)

    def __init__(self, rows: Iterable[Iterable]):
        self.rows = tuple(tuple(r) for r in rows)
        if self.rows and len({len(r) for r in self.rows}) != 1:
            raise ValueError("ragged matrix")

    @classmethod
    def identity(cls, n: int, one=Fraction(1), zero=Fraction(0)) -> Matrix:
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, r: int, c: int, zero=Fraction(0)) -> Matrix:
        return cls([[zero] * c for _ in range(r)])

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence]) -> Matrix:
        return cls(zip(*cols))

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.rows[0]) if self.rows else 0

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.shape[1])]

    def transpose(self) -> Matrix:
        return Matrix(zip(*self.rows))

    def map(self, f) -> Matrix:
        return Matrix([[f(x) for x in r] for r in self.rows])

    def __add__(self, other: Matrix) -> Matrix:
        return Matrix([[x + y for x, y in zip(a, b)] for a, b in zip(self.rows, other.rows)])

    def __sub__(self, other: Matrix) -> Matrix:
        return Matrix([[x - y for x, y in zip(a, b)] for a, b in zip(self.rows, other.rows)])

    def __neg__(self) -> Matrix:
        return self.map(lambda x: -x)

    def __mul__(self, c) -> Matrix:
        return self.map(lambda x: x * c)

    def __rmul__(self, c) -> Matrix:
        return self.map(lambda x: c * x)

    def __matmul__(self, other: Matrix) -> Matrix:
        r, k = self.shape
        k2, c = other.shape
        if k != k2:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = other.columns()
        out = []
        for row in self.rows:
            out_row = []
            for col in cols:
                acc = None
                for x, y in zip(row, col):
                    if x and y:
                        acc = x * y if acc is None else acc + x * y
                out_row.append(_zero_like(row, col) if acc is None else acc)
            out.append(out_row)
        return Matrix(out)

    def apply(self, vec: Sequence) -> tuple:
        return (self @ Matrix([[x] for x in vec])).column(0)

    def __pow__(self, k: int) -> Matrix:
        n = self.shape[0]
        if k < 0:
            return self.inverse() ** (-k)
        result, base = Matrix.identity(n), self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and all(
            x == y for a, b in zip(self.rows, other.rows) for x, y in zip(a, b)
        )

    def __hash__(self):
        return hash(self.shape)

    def is_identity(self) -> bool:
        return self == Matrix.identity(self.shape[0])

    def is_zero(self) -> bool:
        return not any(x for r in self.rows for x in r)

    def det(self):
        """Determinant by cofactor expansion; works over any commutative ring."""
        n, c = self.shape
        if n != c:
            raise ValueError("determinant of a non-square matrix")
        if n == 0:
            return Fraction(1)
        if all(is_scalar(x) for r in self.rows for x in r):
            return _det_field(self)
        return _det_cofactor(self.rows)

    def inverse(self) -> Matrix:
        n, c = self.shape
        if n != c:
            raise ValueError("inverse of a non-square matrix")
        if all(is_scalar(x) for r in self.rows for x in r):
            sol = solve_linear(self, Matrix.identity(n))
            if sol.particular is None or sol.nullspace:
                raise ZeroDivisionError("matrix is singular")
            return sol.particular
        # ring case: adjugate over det, det must be a unit
        d = self.det()
        inv_d = d.inverse() if hasattr(d, "inverse") else Fraction(1) / d
        adj = [[_cofactor(self.rows, j, i) * inv_d for j in range(n)] for i in range(n)]
        return Matrix(adj)

    def __repr__(self) -> str:
        return "Matrix([" + ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.rows) + "])"


def _zero_like(row, col):
    for x in (*row, *col):
        if not is_scalar(x):
            return x * 0
    return Fraction(0)


def _minor(rows, i, j):
    return [r[:j] + r[j + 1:] for k, r in enumerate(rows) if k != i]


def _cofactor(rows, i, j):
    sub = _minor(rows, i, j)
    val = _det_cofactor(tuple(tuple(r) for r in sub)) if sub else Fraction(1)
    return val if (i + j) % 2 == 0 else -val


def _det_cofactor(rows):
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = None
    for j in range(n):
        if not rows[0][j]:
            continue
        term = rows[0][j] * _cofactor(rows, 0, j)
        total = term if total is None else total + term
    return total if total is not None else rows[0][0] * 0


def _det_field(m: Matrix):
    rows = [list(r) for r in m.rows]
    n = len(rows)
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if rows[r][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            rows[c], rows[p] = rows[p], rows[c]
            det = -det
        det = det * rows[c][c]
        inv = 1 / rows[c][c] if isinstance(rows[c][c], CycNum) else Fraction(1) / rows[c][c]
        for r in range(c + 1, n):
            if rows[r][c]:
                f = rows[r][c] * inv
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[c])]
    return det


@dataclass(frozen=True)
class LinearSolution:
    """Solution set of A x = b: ``particular`` is None when the system is inconsistent."""

    particular: Matrix | None
    nullspace: tuple[tuple, ...]

    @property
    def consistent(self) -> bool:
        return self.particular is not None


def _inv(x):
    return 1 / x if isinstance(x, CycNum) else Fraction(1) / x


def rref(rows: list[list]) -> tuple[list[list], list[int]]:
    """Reduced row echelon form (in place on a copy) and pivot columns."""
    rows = [list(r) for r in rows]
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, nrows) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = _inv(rows[r][c])
        rows[r] = [x * inv for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return rows, pivots


def solve_linear(A: Matrix, b: Matrix) -> LinearSolution:
    """Exact Gauss-Jordan solution of A X = b over Q or Q(zeta).

    The nullspace basis comes from the reduced echelon form: each vector has a
    single 1 in its free coordinate and zeros in the other free coordinates.
    """
    n, k = A.shape
    bn, bk = b.shape
    if bn != n:
        raise ValueError(f"dimension mismatch: A is {A.shape}, b is {b.shape}")
    aug = [list(ra) + list(rb) for ra, rb in zip(A.rows, b.rows)]
    red, pivots = rref(aug)
    if any(p >= k for p in pivots):
        return LinearSolution(None, ())
    a_piv = pivots
    free = [c for c in range(k) if c not in set(a_piv)]
    zero = Fraction(0)
    part = [[zero] * bk for _ in range(k)]
    for row_idx, c in enumerate(a_piv):
        for j in range(bk):
            part[c][j] = red[row_idx][k + j]
    null = []
    for f in free:
        v = [zero] * k
        v[f] = Fraction(1)
        for row_idx, c in enumerate(a_piv):
            v[c] = -red[row_idx][f]
        null.append(tuple(v))
    return LinearSolution(Matrix(part), tuple(null))


def rank(vectors: Sequence[Sequence]) -> int:
    if not vectors:
        return 0
    return len(rref([list(v) for v in vectors])[1])


def nullspace(A: Matrix) -> tuple[tuple, ...]:
    return solve_linear(A, Matrix.zeros(A.shape[0], 1)).nullspace
