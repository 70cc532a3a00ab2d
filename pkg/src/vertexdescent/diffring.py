"""Laurent rings k[t^{+-1/m}] with d/dt, viewed as commutative vertex rings.

In characteristic 0 the iterative Hasse-Schmidt derivation is generated by
D_1 = d/dt through D_i = D_1^i / i!, so on monomials
``D_i(t^q) = binom(q, i) t^(q - i)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .exactnum import CycNum, binom_frac, format_scalar, is_scalar, lcm, parse_scalar, zeta_power


class FracLaurent:
    """Finite sum of c * t^q with q in (1/m)Z and exact coefficients.

    ``m`` names the ring S_m the element lives in; arithmetic between
    different rings promotes to the lcm of the denominators.
    """

    __slots__ = ("m", "terms", "_hash")

    def __init__(self, terms: Mapping | None = None, m: int = 1):
        clean = {}
        den = m
        for q, c in (terms or {}).items():
            if c:
                if isinstance(c, int):
                    c = Fraction(c)
                q = Fraction(q)
                clean[q] = c
                if den % q.denominator:
                    den = lcm(den, q.denominator)
        self.m = den
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict, m: int) -> FracLaurent:
        """Trusted constructor: Fraction keys, nonzero values, m already correct."""
        out = object.__new__(cls)
        out.m = m
        out.terms = terms
        out._hash = None
        return out

    @classmethod
    def monomial(cls, q, c=Fraction(1), m: int = 1) -> FracLaurent:
        return cls({Fraction(q): c}, m)

    @classmethod
    def const(cls, c, m: int = 1) -> FracLaurent:
        return cls({Fraction(0): c}, m)

    @classmethod
    def coerce(cls, x, m: int = 1) -> FracLaurent:
        if isinstance(x, FracLaurent):
            return x
        if is_scalar(x):
            return cls.const(x, m)
        raise TypeError(f"cannot coerce {type(x).__name__} to FracLaurent")

    # arithmetic ----------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, FracLaurent):
            if not is_scalar(other):
                return NotImplemented
            other = FracLaurent.const(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        terms = dict(self.terms)
        for q, c in other.terms.items():
            v = terms.get(q)
            if v is None:
                terms[q] = c
            else:
                v = v + c
                if v:
                    terms[q] = v
                else:
                    del terms[q]
        m = self.m if self.m == other.m else lcm(self.m, other.m)
        return FracLaurent._raw(terms, m)

    __radd__ = __add__

    def __neg__(self):
        return FracLaurent._raw({q: -c for q, c in self.terms.items()}, self.m)

    def __sub__(self, other):
        if not isinstance(other, FracLaurent):
            if not is_scalar(other):
                return NotImplemented
            other = FracLaurent.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if type(other) is FracLaurent:
            return self._times(other)
        if is_scalar(other):
            if not other:
                return FracLaurent._raw({}, self.m)
            if other == 1:
                return self
            return FracLaurent._raw({q: c * other for q, c in self.terms.items()}, self.m)
        if not isinstance(other, FracLaurent):
            return NotImplemented
        return self._times(other)

    def _times(self, other: FracLaurent) -> FracLaurent:
        m = self.m if self.m == other.m else lcm(self.m, other.m)
        if len(self.terms) == 1 and len(other.terms) == 1:
            (q1, c1), = self.terms.items()
            (q2, c2), = other.terms.items()
            return FracLaurent._raw({q1 + q2: c1 * c2}, m)
        terms: dict = {}
        for q1, c1 in self.terms.items():
            for q2, c2 in other.terms.items():
                q = q1 + q2
                terms[q] = terms.get(q, 0) + c1 * c2
        return FracLaurent(terms, m)

    def __rmul__(self, other):
        if is_scalar(other):
            return FracLaurent({q: other * c for q, c in self.terms.items()}, self.m)
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = FracLaurent.const(Fraction(1), self.m)
        for _ in range(k):
            result = result * self
        return result

    def is_unit(self) -> bool:
        return len(self.terms) == 1

    def inverse(self) -> FracLaurent:
        if not self.is_unit():
            raise ZeroDivisionError(f"{self} is not a unit")
        (q, c), = self.terms.items()
        return FracLaurent({-q: 1 / c if isinstance(c, CycNum) else Fraction(1) / c}, self.m)

    def __truediv__(self, other):
        if is_scalar(other):
            inv = 1 / other if isinstance(other, CycNum) else Fraction(1) / other
            return self * inv
        if isinstance(other, FracLaurent):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        if is_scalar(other):
            return self.inverse() * other
        return NotImplemented

    # derivations ---------------------------------------------------------
    def hs(self, i: int) -> FracLaurent:
        """The i-th Hasse-Schmidt derivative D_i."""
        if i == 0:
            return self
        terms = {}
        for q, c in self.terms.items():
            b = binom_frac(q, i)
            if b:
                terms[q - i] = b * c
        return FracLaurent._raw(terms, self.m)

    def derivative(self) -> FracLaurent:
        return self.hs(1)

    # queries -------------------------------------------------------------
    def coefficient(self, q) -> object:
        return self.terms.get(Fraction(q), Fraction(0))

    def exponents(self) -> list[Fraction]:
        return sorted(self.terms)

    def is_constant(self) -> bool:
        return all(q == 0 for q in self.terms)

    def constant_value(self):
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.coefficient(0)

    def has_integer_exponents(self) -> bool:
        return all(q.denominator == 1 for q in self.terms)

    def shift(self, k) -> FracLaurent:
        """Multiply by t^k."""
        return FracLaurent({q + k: c for q, c in self.terms.items()}, self.m)

    def map_coefficients(self, f) -> FracLaurent:
        return FracLaurent({q: f(c) for q, c in self.terms.items()}, self.m)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, FracLaurent):
            return self.terms == other.terms
        if is_scalar(other):
            return self.terms == ({Fraction(0): other} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset((_hkey(q), _hkey(c)) for q, c in self.terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"FracLaurent({format_laurent(self)!r}, m={self.m})"

    def __str__(self) -> str:
        return format_laurent(self)


def _hkey(x):
    # CPython has hash(-1) == hash(-2); odd numerators keep t^-1 and t^-2 apart
    if type(x) is Fraction or type(x) is int:
        return (2 * x.numerator + 1, x.denominator)
    return x


def t_power(q, c=Fraction(1), m: int = 1) -> FracLaurent:
    return FracLaurent.monomial(q, c, m)


@dataclass(frozen=True)
class LaurentRing:
    """S_m = k[t^{+-1/m}] with D = d/dt; m = 1 gives R = k[t^{+-1}]."""

    m: int = 1

    @property
    def one(self) -> FracLaurent:
        return FracLaurent.const(Fraction(1), self.m)

    @property
    def zero(self) -> FracLaurent:
        return FracLaurent({}, self.m)

    def t(self, q=1, c=Fraction(1)) -> FracLaurent:
        q = Fraction(q)
        if (q * self.m).denominator != 1:
            raise ValueError(f"t^{q} is not in S_{self.m}")
        return FracLaurent.monomial(q, c, self.m)

    def contains(self, f: FracLaurent) -> bool:
        return all((q * self.m).denominator == 1 for q in f.terms)

    def monomials(self, lo, hi) -> list[FracLaurent]:
        """Monomials t^q with q in (1/m)Z and lo <= q <= hi."""
        lo, hi = Fraction(lo), Fraction(hi)
        start = -((-lo * self.m) // 1)
        out = []
        k = int(start)
        while Fraction(k, self.m) <= hi:
            out.append(self.t(Fraction(k, self.m)))
            k += 1
        return out

    def galois(self, j: int, f: FracLaurent) -> FracLaurent:
        return galois_apply(j, f, self.m)

    def __str__(self) -> str:
        return "R" if self.m == 1 else f"S{self.m}"


def parse_ring(tag: str) -> LaurentRing:
    tag = tag.strip()
    if tag in ("R", "S1"):
        return LaurentRing(1)
    match = re.fullmatch(r"S(\d+)", tag)
    if not match:
        raise ValueError(f"unknown ring tag {tag!r}; expected R or S<m>")
    return LaurentRing(int(match.group(1)))


# operations --------------------------------------------------------------


def apply_Di(f: FracLaurent, i: int) -> FracLaurent:
    if i < 0:
        raise ValueError("Hasse-Schmidt index must be nonnegative")
    return f.hs(i)


def cvr_nproduct(r: FracLaurent, n: int, s: FracLaurent) -> FracLaurent:
    """n-th product of the commutative vertex ring: D_{-n-1}(r) s for n <= -1, else 0."""
    if n >= 0:
        return FracLaurent({}, lcm(r.m, s.m))
    return r.hs(-n - 1) * s


def vacuum_kernel_test(f: FracLaurent) -> bool:
    """True iff every D_i, i >= 1, kills f. In characteristic 0, D_1 f = 0 suffices."""
    return not f.hs(1)


def galois_apply(j: int, f: FracLaurent, m: int | None = None) -> FracLaurent:
    """Generator power gamma^j of Gal(S_m/R): t^(r/m) -> zeta_m^(j r) t^(r/m)."""
    m = f.m if m is None else m
    terms = {}
    for q, c in f.terms.items():
        r = q * m
        if r.denominator != 1:
            raise ValueError(f"t^{q} is not in S_{m}")
        terms[q] = c * zeta_power(m, j * int(r))
    return FracLaurent(terms, m)


def diffring_aut_test(c, e: int) -> bool:
    """Does t -> c t^e define an automorphism of (k[t^{+-1}], d/dt)?

    Units of R are c t^e, so a ring automorphism is determined by such an
    image with e = +-1; it is a vertex ring map iff it commutes with d/dt,
    checked here on t and t^-1 (which generate R).
    """
    if not c:
        raise ValueError("c must be nonzero")
    if e not in (1, -1):
        return False
    image_t = FracLaurent.monomial(e, c)

    def sigma(f: FracLaurent) -> FracLaurent:
        out = FracLaurent({})
        for q, coeff in f.terms.items():
            out = out + (image_t ** int(q)) * coeff
        return out

    for gen in (t_power(1), t_power(-1)):
        if sigma(gen.derivative()) != sigma(gen).derivative():
            return False
    return True


# text form ---------------------------------------------------------------


def _format_exp(q: Fraction) -> str:
    return f"t^({q})"


def format_laurent(f: FracLaurent) -> str:
    if not f.terms:
        return "0"
    parts = []
    for q in sorted(f.terms):
        c = format_scalar(f.terms[q])
        parts.append(c if q == 0 else f"{c}*{_format_exp(q)}")
    return " + ".join(parts)


_TERM_RE = re.compile(
    r"([+-]+)?"
    r"(?:(Z\d+\[[^\]]*\]|\d+(?:/\d+)?)(\*)?)?"
    r"(t(?:\^\(?([+-]?\d+(?:/\d+)?)\)?)?)?"
)


def parse_laurent(text: str, m: int = 1) -> FracLaurent:
    """Parse ``coeff*t^(p/q)`` sums (``format_laurent`` output and hand-written variants)."""
    s = str(text).replace(" ", "")
    if s in ("", "0"):
        return FracLaurent({}, m)
    pos = 0
    out = FracLaurent({}, m)
    while pos < len(s):
        match = _TERM_RE.match(s, pos)
        if not match or match.end() == pos or (match.group(2) is None and match.group(4) is None):
            raise ValueError(f"cannot parse Laurent polynomial {text!r} at {s[pos:]!r}")
        sign, coeff, star, tpart, exp = match.groups()
        if star and not tpart:
            raise ValueError(f"dangling '*' in {text!r}")
        c = parse_scalar(coeff) if coeff else Fraction(1)
        if sign and sign.count("-") % 2:
            c = -c
        q = Fraction(0) if not tpart else (Fraction(exp) if exp else Fraction(1))
        out = out + FracLaurent.monomial(q, c, m)
        pos = match.end()
    return FracLaurent(out.terms, lcm(m, out.m))


def parse_laurent_or_scalar(value, m: int = 1) -> FracLaurent:
    if isinstance(value, int) and not isinstance(value, bool):
        return FracLaurent.const(Fraction(value), m)
    return parse_laurent(str(value), m)


def as_laurent(x, m: int = 1) -> FracLaurent:
    return FracLaurent.coerce(x, m)


def laurents(values: Iterable, m: int = 1) -> tuple[FracLaurent, ...]:
    return tuple(parse_laurent_or_scalar(v, m) for v in values)


class CommutativeVertexRing:
    """S_m with the n-products of ``cvr_nproduct``, for the generic identity checkers."""

    def __init__(self, m: int = 1):
        self.ring = LaurentRing(m)
        self.name = f"cvr({self.ring})"
        self._cache: dict = {}
        self._zero = self.ring.zero
        self._intern: dict = {}

    @property
    def vacuum(self) -> FracLaurent:
        return self.ring.one

    @property
    def zero(self) -> FracLaurent:
        return self._zero

    def nproduct(self, r: FracLaurent, n: int, s: FracLaurent) -> FracLaurent:
        if n >= 0:
            return self._zero
        key = (r, n, s)
        hit = self._cache.get(key)
        if hit is None:
            # intern equal results so later cache keys compare by identity
            out = cvr_nproduct(r, n, s)
            hit = self._cache[key] = self._intern.setdefault(out, out)
        return hit

    def regularity_bound(self, r, s) -> int:
        return 0

    def degree(self, r) -> int | None:
        return None

    def basis(self, lo, hi) -> list[FracLaurent]:
        return [self._intern.setdefault(x, x) for x in self.ring.monomials(lo, hi)]
