"""Truncated arc algebras of finitely presented algebras over a differential base.

For A = B/(f_mu) with B = R[x_lambda], the order-N arc algebra is the jet ring
R[x_lambda^(j) : j <= N] modulo the prolonged relations D_i(f_mu), i <= N,
where D_i(x^(j)) = binom(i+j, i) x^(i+j) and D_i acts on the base through its
Hasse-Schmidt derivation, combined by the higher Leibniz rule.

Ideal membership is decided with Buchberger's algorithm (degrevlex) under
explicit resource bounds; a positive answer always carries a cofactor
certificate sum_l c_l g_l = f that is re-verified exactly.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Sequence

import yaml

from .diffring import FracLaurent
from .exactnum import binom_frac
from .liedata import resolve_data_path

Exp = tuple[int, ...]


class ResourceLimit(RuntimeError):
    """Buchberger exceeded its step or size budget."""


# polynomials -------------------------------------------------------------


class Poly:
    """Sparse polynomial in a fixed ordered list of variables, rational coefficients."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Exp, Fraction] | None = None):
        self.nvars = nvars
        self.terms = {e: Fraction(c) for e, c in (terms or {}).items() if c}

    @classmethod
    def const(cls, nvars: int, c) -> Poly:
        return cls(nvars, {(0,) * nvars: Fraction(c)})

    @classmethod
    def var(cls, nvars: int, k: int) -> Poly:
        e = [0] * nvars
        e[k] = 1
        return cls(nvars, {tuple(e): Fraction(1)})

    def __add__(self, other: Poly) -> Poly:
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return Poly(self.nvars, out)

    def __neg__(self) -> Poly:
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: Poly) -> Poly:
        return self + (-other)

    def __mul__(self, other) -> Poly:
        if isinstance(other, Poly):
            out: dict = {}
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    out[e] = out.get(e, 0) + c1 * c2
            return Poly(self.nvars, out)
        return Poly(self.nvars, {e: c * other for e, c in self.terms.items()})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Poly:
        out = Poly.const(self.nvars, 1)
        for _ in range(k):
            out = out * self
        return out

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def leading(self) -> tuple[Exp, Fraction]:
        e = max(self.terms, key=degrevlex_key)
        return e, self.terms[e]

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.terms.values())

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)


def degrevlex_key(e: Exp):
    return (sum(e), tuple(-x for x in reversed(e)))


def _divides(a: Exp, b: Exp) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _mono(nvars: int, e: Exp, c=Fraction(1)) -> Poly:
    return Poly(nvars, {e: c})


def format_poly(p: Poly, names: Sequence[str]) -> str:
    if not p.terms:
        return "0"
    parts = []
    for e in sorted(p.terms, key=degrevlex_key, reverse=True):
        c = p.terms[e]
        factors = [n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k]
        if not factors:
            parts.append(str(c))
        elif c == 1:
            parts.append("*".join(factors))
        elif c == -1:
            parts.append("-" + "*".join(factors))
        else:
            parts.append(f"{c}*" + "*".join(factors))
    return " + ".join(parts).replace("+ -", "- ")


def parse_poly(text: str, names: Sequence[str]) -> Poly:
    """Parse +, -, *, ^ or ** with integer powers, rational constants and the given names."""
    n = len(names)
    index = {name: k for k, name in enumerate(names)}
    try:
        tree = ast.parse(str(text).replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse polynomial {text!r}: {exc.msg}") from None

    def walk(node) -> Poly:
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return Poly.const(n, node.value)
        if isinstance(node, ast.Name):
            if node.id not in index:
                raise ValueError(f"unknown variable {node.id!r} in {text!r}")
            return Poly.var(n, index[node.id])
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            inner = walk(node.operand)
            return -inner if isinstance(node.op, ast.USub) else inner
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int) and node.right.value >= 0):
                    raise ValueError(f"exponents must be nonnegative integers in {text!r}")
                return walk(node.left) ** node.right.value
            left, right = walk(node.left), walk(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if isinstance(node.op, ast.Div):
                if len(right.terms) == 1 and next(iter(right.terms)) == (0,) * n:
                    return left * (1 / next(iter(right.terms.values())))
                raise ValueError(f"division by a non-constant in {text!r}")
        raise ValueError(f"unsupported syntax in polynomial {text!r}")

    return walk(tree)


# jet rings ---------------------------------------------------------------


BASES = {"k": False, "Q": False, "k[t]": True, "Q[t]": True, "Z[t]": True}


@dataclass(frozen=True)
class JetPresentation:
    """A = R[x_lambda]/(f_mu) with R one of k, k[t], Z[t] (the latter two with D = d/dt)."""

    base: str
    variables: tuple[str, ...]
    relations: tuple[str, ...]

    def __post_init__(self):
        if self.base not in BASES:
            raise ValueError(f"unknown base ring {self.base!r}; expected one of {sorted(BASES)}")
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("variable names must be distinct")
        if "t" in self.variables:
            raise ValueError("'t' is reserved for the base ring")
        names = (["t"] if self.has_t else []) + list(self.variables)
        for rel in self.relations:
            parse_poly(rel, names)

    @property
    def has_t(self) -> bool:
        return BASES[self.base]

    @property
    def integral(self) -> bool:
        return self.base.startswith("Z")


class JetRing:
    """R[x^(j) : j <= N]; variable order is t (if present), then x_lambda^(j) by (lambda, j)."""

    def __init__(self, p: JetPresentation, N: int):
        if N < 0:
            raise ValueError("truncation order must be nonnegative")
        self.p = p
        self.N = N
        self.names: list[str] = []
        self.slots: list[tuple[str, int]] = []
        if p.has_t:
            self.names.append("t")
            self.slots.append(("t", 0))
        for lam in p.variables:
            for j in range(N + 1):
                self.names.append(f"{lam}[{j}]")
                self.slots.append((lam, j))
        self.nvars = len(self.names)
        self._index = {s: k for k, s in enumerate(self.slots)}
        self._hs_cache: dict = {}

    def var(self, name: str, j: int = 0) -> Poly:
        return Poly.var(self.nvars, self._index[(name, j)])

    def const(self, c) -> Poly:
        return Poly.const(self.nvars, c)

    def embed_relation(self, text: str) -> Poly:
        """A relation in t, x_lambda read into the jet ring with x_lambda = x_lambda^(0)."""
        src_names = (["t"] if self.p.has_t else []) + list(self.p.variables)
        src = parse_poly(text, src_names)
        out = Poly(self.nvars)
        for e, c in src.terms.items():
            term = self.const(c)
            for name, k in zip(src_names, e):
                if k:
                    term = term * self.var(name, 0) ** k
            out = out + term
        return out

    def hs_var(self, k: int, i: int) -> Poly:
        name, j = self.slots[k]
        if i == 0:
            return Poly.var(self.nvars, k)
        if name == "t":
            return self.const(1) if i == 1 else Poly(self.nvars)
        if i + j > self.N:
            raise OverflowError(f"D_{i}({name}^({j})) needs order {i + j} > {self.N}")
        return self.var(name, i + j) * binom_frac(i + j, i)

    def hs_monomial(self, e: Exp, i: int) -> Poly:
        key = (e, i)
        hit = self._hs_cache.get(key)
        if hit is not None:
            return hit
        k = next((idx for idx, x in enumerate(e) if x), None)
        if k is None:
            out = self.const(1) if i == 0 else Poly(self.nvars)
        else:
            rest = list(e)
            rest[k] -= 1
            rest_e = tuple(rest)
            out = Poly(self.nvars)
            for a in range(i + 1):
                da = self.hs_var(k, a)
                if da:
                    out = out + da * self.hs_monomial(rest_e, i - a)
        self._hs_cache[key] = out
        return out

    def hs(self, f: Poly, i: int) -> Poly:
        """D_i by the higher Leibniz rule."""
        out = Poly(self.nvars)
        for e, c in f.terms.items():
            out = out + self.hs_monomial(e, i) * c
        return out

    def format(self, f: Poly) -> str:
        return format_poly(f, self.names)

    def monomials(self, max_degree: int) -> list[Exp]:
        out = []

        def grow(prefix: list, k: int, left: int):
            if k == self.nvars:
                out.append(tuple(prefix))
                return
            for a in range(left + 1):
                grow(prefix + [a], k + 1, left - a)

        grow([], 0, max_degree)
        return out


@dataclass
class JetIdeal:
    ring: JetRing
    generators: list[Poly]
    labels: list[str]

    def describe(self) -> list[str]:
        return [f"{lab} = {self.ring.format(g)}" for lab, g in zip(self.labels, self.generators)]


def prolong(p: JetPresentation, N: int) -> tuple[JetRing, JetIdeal]:
    ring = JetRing(p, N)
    gens, labels = [], []
    for rel in p.relations:
        f = ring.embed_relation(rel)
        for i in range(N + 1):
            gens.append(ring.hs(f, i))
            labels.append(f"D_{i}({rel})")
    return ring, JetIdeal(ring, gens, labels)


# Groebner bases with cofactors -------------------------------------------


@dataclass
class Membership:
    answer: str  # "yes" | "no" | "inconclusive"
    certificate: list[Poly] | None = None
    integral: bool = False
    steps: int = 0
    reason: str = ""

    def __bool__(self) -> bool:
        return self.answer == "yes"


def _reduce(f: Poly, basis: list[Poly], cof: list[list[Poly]], ngens: int, nvars: int,
            budget: list[int]) -> tuple[Poly, list[Poly]]:
    """Full reduction of f; returns the remainder and cofactors over the original generators."""
    rem = Poly(nvars)
    quot = [Poly(nvars) for _ in range(ngens)]
    p = f
    while p:
        budget[0] -= 1
        if budget[0] < 0:
            raise ResourceLimit("reduction step budget exhausted")
        e, c = p.leading()
        for g, h in zip(basis, cof):
            ge, gc = g.leading()
            if _divides(ge, e):
                factor = _mono(nvars, tuple(a - b for a, b in zip(e, ge)), c / gc)
                p = p - g * factor
                quot = [q + hk * factor for q, hk in zip(quot, h)]
                break
        else:
            rem = rem + _mono(nvars, e, c)
            p = p - _mono(nvars, e, c)
    return rem, quot


def groebner(gens: Sequence[Poly], nvars: int, max_steps: int = 20000, max_basis: int = 200):
    """Buchberger's algorithm; returns (basis, cofactors) with basis[k] = sum_l cof[k][l] gens[l]."""
    gens = [g for g in gens]
    ng = len(gens)
    basis, cof = [], []
    for l, g in enumerate(gens):
        if g:
            basis.append(g)
            cof.append([Poly.const(nvars, 1) if k == l else Poly(nvars) for k in range(ng)])
    pairs = [(i, j) for i in range(len(basis)) for j in range(i)]
    budget = [max_steps]
    while pairs:
        i, j = pairs.pop(0)
        ei, ci = basis[i].leading()
        ej, cj = basis[j].leading()
        if all(a == 0 or b == 0 for a, b in zip(ei, ej)):
            continue  # coprime leading monomials
        lcm = tuple(max(a, b) for a, b in zip(ei, ej))
        mi = _mono(nvars, tuple(a - b for a, b in zip(lcm, ei)), 1 / ci)
        mj = _mono(nvars, tuple(a - b for a, b in zip(lcm, ej)), 1 / cj)
        s = basis[i] * mi - basis[j] * mj
        s_cof = [a * mi - b * mj for a, b in zip(cof[i], cof[j])]
        rem, quot = _reduce(s, basis, cof, ng, nvars, budget)
        if rem:
            if len(basis) >= max_basis:
                raise ResourceLimit("basis size budget exhausted")
            basis.append(rem)
            cof.append([a - q for a, q in zip(s_cof, quot)])
            k = len(basis) - 1
            pairs.extend((k, m) for m in range(k))
    return basis, cof


def ideal_member(f: Poly, ideal: JetIdeal, max_steps: int = 20000, max_basis: int = 200) -> Membership:
    nvars = ideal.ring.nvars
    gens = ideal.generators
    if not f:
        return Membership("yes", [Poly(nvars) for _ in gens], True)
    try:
        basis, cof = groebner(gens, nvars, max_steps, max_basis)
        budget = [max_steps]
        rem, quot = _reduce(f, basis, cof, len(gens), nvars, budget)
    except ResourceLimit as exc:
        return Membership("inconclusive", reason=str(exc))
    steps = max_steps - budget[0]
    if rem:
        return Membership("no", steps=steps)
    total = Poly(nvars)
    for c, g in zip(quot, gens):
        total = total + c * g
    if total != f:
        raise AssertionError("cofactor certificate does not reproduce the target")
    integral = all(c.is_integral() for c in quot) and all(g.is_integral() for g in gens)
    return Membership("yes", quot, integral, steps)


def collapses(ideal: JetIdeal, **bounds) -> Membership:
    """Is 1 in the prolonged ideal?"""
    return ideal_member(ideal.ring.const(1), ideal, **bounds)


# adjunction --------------------------------------------------------------


@dataclass
class Extension:
    ok: bool
    table: dict[str, FracLaurent] = field(default_factory=dict)
    violations: list[tuple[str, FracLaurent]] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def adjunction_extend(f: Mapping[str, object], p: JetPresentation, N: int,
                      base_map: object | None = None) -> Extension:
    """phi(x^(j)) = D_j(f(x)) in S = (k[t^{+-1}], d/dt); valid iff every D_i(f_mu) maps to 0.

    ``base_map`` is the image of t (default t itself, the structure map of S).
    """
    from .diffring import parse_laurent_or_scalar, t_power

    ring, ideal = prolong(p, N)
    images = {name: FracLaurent.coerce(v) if not isinstance(v, str) else parse_laurent_or_scalar(v)
              for name, v in f.items()}
    missing = set(p.variables) - set(images)
    if missing:
        raise ValueError(f"no image given for {sorted(missing)}")
    t_image = t_power(1) if base_map is None else (
        parse_laurent_or_scalar(base_map) if isinstance(base_map, str) else FracLaurent.coerce(base_map))
    values = []
    table = {}
    for name, j in ring.slots:
        if name == "t":
            values.append(t_image)
        else:
            values.append(images[name].hs(j))
            table[f"{name}[{j}]"] = values[-1]
    ext = Extension(True, table)
    for label, g in zip(ideal.labels, ideal.generators):
        val = evaluate(g, values)
        if val:
            ext.ok = False
            ext.violations.append((f"{label} = {ring.format(g)}", val))
    return ext


def evaluate(f: Poly, values: Sequence[FracLaurent]) -> FracLaurent:
    out = FracLaurent({})
    for e, c in f.terms.items():
        term = FracLaurent.const(c)
        for v, k in zip(values, e):
            if k:
                term = term * v ** k
        out = out + term
    return out


# invariants --------------------------------------------------------------


def iterativity_check(ring: JetRing, max_degree: int = 3) -> tuple[list[str], int]:
    """D_i D_j = binom(i+j, i) D_{i+j} on monomials whenever i + j <= N.

    Returns the failures and the number of cases skipped because some jet
    would pass order N (the overflow the truncation cannot represent).
    """
    failures, skipped = [], 0
    for e in ring.monomials(max_degree):
        f = _mono(ring.nvars, e)
        for i in range(ring.N + 1):
            for j in range(ring.N + 1 - i):
                try:
                    lhs = ring.hs(ring.hs(f, j), i)
                    rhs = ring.hs(f, i + j) * binom_frac(i + j, i)
                except OverflowError:
                    skipped += 1
                    continue
                if lhs != rhs:
                    failures.append(f"D_{i}D_{j}({ring.format(f)})")
    return failures, skipped


def stability_check(ideal: JetIdeal) -> list[str]:
    """D_i of the order-j generator is binom(i+j, i) times the order-(i+j) generator for i + j <= N."""
    ring = ideal.ring
    N = ring.N
    failures = []
    for r in range(len(ideal.generators) // (N + 1)):
        block = ideal.generators[r * (N + 1):(r + 1) * (N + 1)]
        for j in range(N + 1):
            for i in range(N + 1 - j):
                if ring.hs(block[j], i) != block[i + j] * binom_frac(i + j, i):
                    failures.append(f"D_{i}({ideal.labels[r * (N + 1) + j]})")
    return failures


def expected_counts(p: JetPresentation, N: int) -> tuple[int, int]:
    """(number of jet variables, number of prolonged generators)."""
    return len(p.variables) * (N + 1) + (1 if p.has_t else 0), len(p.relations) * (N + 1)


# files -------------------------------------------------------------------


def jet_from_dict(data: dict) -> tuple[JetPresentation, int | None]:
    try:
        base = str(data["base"])
        variables = tuple(str(v) for v in data.get("variables", []) or [])
        relations = tuple(str(r) for r in data.get("relations", []) or [])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"bad jet presentation: {exc}") from None
    order = data.get("order")
    return JetPresentation(base, variables, relations), (int(order) if order is not None else None)


def load_jet(path: str | Path) -> tuple[JetPresentation, int | None]:
    with open(resolve_data_path(path)) as fh:
        data = yaml.safe_load(fh)
    if not isinstance(data, dict):
        raise ValueError(f"{path}: expected a mapping")
    return jet_from_dict(data)
