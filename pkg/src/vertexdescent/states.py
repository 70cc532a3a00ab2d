"""Sparse linear combinations of PBW monomials.

A PBW monomial is a tuple of modes ``(q, a)`` with q a negative exponent and
a a generator index, sorted ascending, so the most negative exponent sits
leftmost and ties go by generator index. The empty tuple is the vacuum.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from .exactnum import format_scalar, is_scalar, parse_scalar

Monomial = tuple[tuple[int, int], ...]
VACUUM: Monomial = ()


def mono_degree(mono: Monomial) -> int:
    return -sum(q for q, _ in mono)


def format_monomial(mono: Monomial, labels: Sequence[str] | None = None) -> str:
    if not mono:
        return "|0>"
    name = (lambda a: labels[a]) if labels else (lambda a: f"x{a}")
    return "".join(f"{name(a)}({q})" for q, a in mono) + "|0>"


class LinComb:
    """Finite map key -> nonzero coefficient with vector-space arithmetic."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping | None = None):
        self.terms = {k: c for k, c in (terms or {}).items() if c}
        self._hash = None

    def _new(self, terms):
        return type(self)(terms)

    def _compatible(self, other) -> bool:
        return type(other) is type(self)

    def __add__(self, other):
        if not self._compatible(other):
            return NotImplemented
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return self._new(out)

    def __sub__(self, other):
        if not self._compatible(other):
            return NotImplemented
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] - c if k in out else -c
        return self._new(out)

    def __neg__(self):
        return self._new({k: -c for k, c in self.terms.items()})

    def __mul__(self, c):
        if not is_scalar(c):
            return NotImplemented
        return self._new({k: v * c for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, LinComb):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __iter__(self) -> Iterator:
        return iter(self.terms.items())

    def __len__(self) -> int:
        return len(self.terms)

    def coefficient(self, key):
        return self.terms.get(key, Fraction(0))

    def keys(self) -> list:
        return sorted(self.terms)


def accumulate(out: dict, key, c) -> None:
    if key in out:
        s = out[key] + c
        if s:
            out[key] = s
        else:
            del out[key]
    elif c:
        out[key] = c


class State(LinComb):
    """Element of V(g, l): exact scalars on PBW monomials."""

    __slots__ = ()

    @classmethod
    def vacuum(cls) -> State:
        return cls({VACUUM: Fraction(1)})

    @classmethod
    def monomial(cls, mono: Iterable, c=Fraction(1)) -> State:
        return cls({tuple(sorted(tuple(m) for m in mono)): c})

    def degrees(self) -> set[int]:
        return {mono_degree(m) for m in self.terms}

    def degree(self) -> int | None:
        """Filtration degree (largest monomial degree); None for zero."""
        return max(self.degrees(), default=None)

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def format(self, labels: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{format_scalar(c)}*{format_monomial(m, labels)}" for m, c in sorted(self.terms.items()))

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"State({self.format()})"

    def to_records(self) -> list:
        return [[[list(mode) for mode in m], format_scalar(c)] for m, c in sorted(self.terms.items())]

    @classmethod
    def from_records(cls, records) -> State:
        return cls({tuple(tuple(mode) for mode in m): parse_scalar(c) for m, c in records})
