"""Algebra-independent checks for vertex algebras.

Any object with ``vacuum``, ``zero``, ``nproduct(u, n, v)`` and
``regularity_bound(u, v)`` (an integer N with u_n v = 0 for every n >= N)
can be checked here. The Jacobi identity is used in its component form
(Borcherds identity), for integers m, n, p::

    sum_i binom(m, i) (u_{p+i} v)_{m+n-i} w
      = sum_i (-1)^i binom(p, i) [u_{m+p-i}(v_{n+i} w) - (-1)^p v_{n+p-i}(u_{m+i} w)]

All three sums are finite by regularity.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Any, Iterable, Protocol, Sequence

from .exactnum import binom_frac


class RegularityError(RuntimeError):
    """A sum did not terminate within the bound an algebra advertised."""


class VertexAlgebra(Protocol):
    name: str

    @property
    def vacuum(self) -> Any: ...

    @property
    def zero(self) -> Any: ...

    def nproduct(self, u: Any, n: int, v: Any) -> Any: ...

    def regularity_bound(self, u: Any, v: Any) -> int: ...


@dataclass
class IdentityCheck:
    passed: bool
    lhs: Any = None
    rhs: Any = None

    def __bool__(self) -> bool:
        return self.passed


@dataclass
class CheckRecord:
    """One line of a verification report."""

    algebra: str
    check: str
    inputs: dict[str, Any]
    passed: bool
    mismatch: dict[str, str] | None = None

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, default=str, ensure_ascii=False)

    @classmethod
    def from_json(cls, line: str) -> CheckRecord:
        return cls(**json.loads(line))

    def to_text(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        args = ", ".join(f"{k}={v}" for k, v in self.inputs.items())
        text = f"[{status}] {self.algebra}: {self.check}({args})"
        if self.mismatch:
            text += "".join(f"\n    {k}: {v}" for k, v in self.mismatch.items())
        return text


def record(algebra: str, check: str, inputs: dict, result, fmt=str) -> CheckRecord:
    passed = bool(result)
    mismatch = None
    if not passed and isinstance(result, IdentityCheck):
        mismatch = {"lhs": fmt(result.lhs), "rhs": fmt(result.rhs)}
    return CheckRecord(algebra, check, {k: str(v) for k, v in inputs.items()}, passed, mismatch)


def _sum(V: VertexAlgebra, terms: Iterable):
    total = V.zero
    for t in terms:
        total = total + t
    return total


@lru_cache(maxsize=4096)
def _signed_binoms(q: int, count: int, flip: int | None) -> tuple:
    """Nonzero (i, (-1)^(i + flip) binom(q, i)) for 0 <= i < count; flip = None drops the sign."""
    out = []
    for i in range(count):
        c = binom_frac(q, i)
        if c:
            if flip is not None and (i + flip) % 2:
                c = -c
            out.append((i, c))
    return tuple(out)


def borcherds_sides(V: VertexAlgebra, u, v, w, m: int, n: int, p: int):
    lhs = V.zero
    for i, c in _signed_binoms(m, max(0, V.regularity_bound(u, v) - p), None):
        inner = V.nproduct(u, p + i, v)
        if inner:
            lhs = lhs + V.nproduct(inner, m + n - i, w) * c
    rhs = V.zero
    for i, c in _signed_binoms(p, max(0, V.regularity_bound(v, w) - n), 0):
        inner = V.nproduct(v, n + i, w)
        if inner:
            rhs = rhs + V.nproduct(u, m + p - i, inner) * c
    # -(-1)^p (-1)^i binom(p, i)
    for i, c in _signed_binoms(p, max(0, V.regularity_bound(u, w) - m), p + 1):
        inner = V.nproduct(u, m + i, w)
        if inner:
            rhs = rhs + V.nproduct(v, n + p - i, inner) * c
    return lhs, rhs


def borcherds_check(V: VertexAlgebra, u, v, w, m: int, n: int, p: int) -> IdentityCheck:
    lhs, rhs = borcherds_sides(V, u, v, w, m, n, p)
    return IdentityCheck(lhs == rhs, lhs, rhs)


def creation_check(V: VertexAlgebra, v, modes: Sequence[int] = range(0, 4)) -> IdentityCheck:
    """v_{-1} 1 = v and v_n 1 = 0 for n >= 0."""
    got = V.nproduct(v, -1, V.vacuum)
    if got != v:
        return IdentityCheck(False, got, v)
    for n in modes:
        out = V.nproduct(v, n, V.vacuum)
        if out:
            return IdentityCheck(False, out, V.zero)
    return IdentityCheck(True)


def regularity_check(V: VertexAlgebra, u, v, extra: int = 3) -> IdentityCheck:
    """Witness that u_n v vanishes from the advertised bound on."""
    bound = V.regularity_bound(u, v)
    for n in range(bound, bound + extra):
        out = V.nproduct(u, n, v)
        if out:
            return IdentityCheck(False, out, V.zero)
    return IdentityCheck(True)


def canonical_hs(V: VertexAlgebra, v, i: int):
    """D_i(v) = v_{-i-1} 1."""
    if i < 0:
        raise ValueError("Hasse-Schmidt index must be nonnegative")
    return V.nproduct(v, -i - 1, V.vacuum)


def hs_derivation_check(V: VertexAlgebra, u, v, n: int, m: int) -> IdentityCheck:
    """D_m(u_n v) = sum_{i+j=m} D_i(u)_n D_j(v)."""
    lhs = canonical_hs(V, V.nproduct(u, n, v), m)
    rhs = _sum(V, (V.nproduct(canonical_hs(V, u, i), n, canonical_hs(V, v, m - i)) for i in range(m + 1)))
    return IdentityCheck(lhs == rhs, lhs, rhs)


def hs_iterativity_check(V: VertexAlgebra, v, i: int, j: int) -> IdentityCheck:
    """D_i D_j v = binom(i+j, i) D_{i+j} v."""
    lhs = canonical_hs(V, canonical_hs(V, v, j), i)
    rhs = canonical_hs(V, v, i + j) * binom_frac(i + j, i)
    return IdentityCheck(lhs == rhs, lhs, rhs)


def commutativity_check(V: VertexAlgebra, u, v, modes: Sequence[int] = range(0, 3)) -> IdentityCheck:
    """Centrality: u_n v = 0 = v_n u for n >= 0."""
    for n in modes:
        for a, b in ((u, v), (v, u)):
            out = V.nproduct(a, n, b)
            if out:
                return IdentityCheck(False, out, V.zero)
    return IdentityCheck(True)


# filtrations -------------------------------------------------------------


class FilteredAlgebra(VertexAlgebra, Protocol):
    def basis(self, degree: int) -> list: ...

    def degree(self, v) -> int | None: ...


@dataclass
class FiltrationReport:
    tested: int = 0
    failures: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def __bool__(self) -> bool:
        return self.passed


def filtration_check(V: FilteredAlgebra, degree_bound: int, modes: Sequence[int]) -> FiltrationReport:
    """deg(u_l v) <= deg u + deg v - l - 1 for basis u, v with deg u + deg v <= bound.

    ``V.degree`` returns None for zero and, under the trivial filtration, for
    everything; such products satisfy every bound.
    """
    rep = FiltrationReport()
    for a in range(degree_bound + 1):
        for b in range(degree_bound - a + 1):
            for u in V.basis(a):
                for v in V.basis(b):
                    du, dv = V.degree(u), V.degree(v)
                    for ell in modes:
                        rep.tested += 1
                        out = V.nproduct(u, ell, v)
                        d = V.degree(out)
                        if d is None or du is None or dv is None:
                            continue
                        if d > du + dv - ell - 1:
                            rep.failures.append({"u": str(u), "v": str(v), "mode": ell, "degree": d})
    return rep


class TrivialFiltration:
    """Wrap an algebra with F_i V = V for every i."""

    def __init__(self, V):
        self._V = V
        self.name = f"{V.name}/trivial-filtration"

    def __getattr__(self, item):
        return getattr(self._V, item)

    def degree(self, v):
        return None


# degree-one structure ----------------------------------------------------


@dataclass
class LieReport:
    tested: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def __bool__(self) -> bool:
        return self.passed


def induced_bracket_check(V, gens: Sequence, coords, lie) -> LieReport:
    """The 0-th product on F_1/F_0 is a Lie bracket reproducing ``lie``'s structure constants.

    ``coords(x)`` returns (coordinates in ``gens``, F_0 part) for x in F_1.
    """
    rep = LieReport()
    n = len(gens)
    table = {}
    for i in range(n):
        for j in range(n):
            rep.tested += 1
            c, _ = coords(V.nproduct(gens[i], 0, gens[j]))
            table[i, j] = c
            expected = lie.bracket(lie.unit(i), lie.unit(j))
            if tuple(c) != tuple(expected):
                rep.failures.append(f"[{i},{j}]: {c} != {expected}")

    def br(x, y):
        out = [0] * n
        for i, xi in enumerate(x):
            for j, yj in enumerate(y):
                if xi and yj:
                    for k, c in enumerate(table[i, j]):
                        out[k] = out[k] + xi * yj * c
        return out

    units = [[1 if k == i else 0 for k in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(n):
            if any(a + b for a, b in zip(table[i, j], table[j, i])):
                rep.failures.append(f"antisymmetry fails on ({i},{j})")
            for k in range(n):
                rep.tested += 1
                x, y, z = units[i], units[j], units[k]
                s = [a + b + c for a, b, c in zip(br(x, br(y, z)), br(y, br(z, x)), br(z, br(x, y)))]
                if any(s):
                    rep.failures.append(f"Jacobi fails on ({i},{j},{k})")
    return rep


def induced_form_check(V, gens: Sequence, coords, lie, level) -> LieReport:
    """The 1-st product on F_1 lands in F_0, is symmetric, equals level * form, and is invariant."""
    rep = LieReport()
    n = len(gens)
    form = {}
    for i in range(n):
        for j in range(n):
            rep.tested += 1
            prod = V.nproduct(gens[i], 1, gens[j])
            c, vac = coords(prod)
            if any(c):
                rep.failures.append(f"{i}_1{j} leaves F_0")
            form[i, j] = vac
            if vac != level * lie.form[i, j]:
                rep.failures.append(f"({i},{j}): {vac} != {level * lie.form[i, j]}")
    for i in range(n):
        for j in range(n):
            if form[i, j] != form[j, i]:
                rep.failures.append(f"form not symmetric on ({i},{j})")
            for k in range(n):
                rep.tested += 1
                # (u, v_0 w) = (u_0 v, w)
                vw, _ = coords(V.nproduct(gens[j], 0, gens[k]))
                uv, _ = coords(V.nproduct(gens[i], 0, gens[j]))
                lhs = sum((form[i, a] * c for a, c in enumerate(vw) if c), 0)
                rhs = sum((c * form[a, k] for a, c in enumerate(uv) if c), 0)
                if lhs != rhs:
                    rep.failures.append(f"invariance fails on ({i},{j},{k})")
    return rep
