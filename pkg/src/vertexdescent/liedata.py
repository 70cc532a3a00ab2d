"""Finite-dimensional Lie algebras with invariant forms, their automorphisms and eigenspaces."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import yaml

from .exactnum import Matrix, format_scalar, nullspace, parse_scalar, rank, zeta_power

log = logging.getLogger(__name__)

DATA_DIR = Path(__file__).parent / "data"


class PresentationError(ValueError):
    pass


@dataclass(frozen=True)
class LiePresentation:
    """Basis labels, structure constants and an invariant symmetric form.

    ``brackets[(i, j)]`` maps k to the coefficient of x_k in [x_i, x_j]; pairs
    absent from the table bracket to zero.
    """

    labels: tuple[str, ...]
    brackets: dict[tuple[int, int], dict[int, object]]
    form: Matrix
    abelian: bool = False
    dual_coxeter: Fraction | None = None
    name: str = ""

    def __post_init__(self):
        n = len(self.labels)
        if self.form.shape != (n, n):
            raise PresentationError(f"form must be {n}x{n}, got {self.form.shape}")
        for (i, j), out in self.brackets.items():
            if not (0 <= i < n and 0 <= j < n) or any(not 0 <= k < n for k in out):
                raise PresentationError(f"structure constant index out of range in [{i},{j}]")

    @property
    def dim(self) -> int:
        return len(self.labels)

    def bracket_basis(self, i: int, j: int) -> dict[int, object]:
        return self.brackets.get((i, j), {})

    def bracket(self, x: Sequence, y: Sequence) -> tuple:
        out = [Fraction(0)] * self.dim
        for (i, j), terms in self.brackets.items():
            if x[i] and y[j]:
                c = x[i] * y[j]
                for k, v in terms.items():
                    out[k] = out[k] + c * v
        return tuple(out)

    def pair(self, x: Sequence, y: Sequence):
        total = Fraction(0)
        for i, xi in enumerate(x):
            if xi:
                for j, yj in enumerate(y):
                    if yj and self.form[i, j]:
                        total = total + xi * self.form[i, j] * yj
        return total

    def unit(self, i: int) -> tuple:
        return tuple(Fraction(1) if k == i else Fraction(0) for k in range(self.dim))

    def index(self, label: str) -> int:
        return self.labels.index(label)


@dataclass
class ValidationReport:
    checks: dict[str, bool] = field(default_factory=dict)
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def __str__(self) -> str:
        return ", ".join(f"{k}={'pass' if v else 'FAIL'}" for k, v in self.checks.items())


def validate_presentation(p: LiePresentation) -> ValidationReport:
    n = p.dim
    rep = ValidationReport()
    units = [p.unit(i) for i in range(n)]

    anti = True
    for i in range(n):
        for j in range(n):
            a = p.bracket(units[i], units[j])
            b = p.bracket(units[j], units[i])
            if any(x + y for x, y in zip(a, b)):
                anti = False
                rep.failures.append(f"[{p.labels[i]},{p.labels[j]}] != -[{p.labels[j]},{p.labels[i]}]")
    rep.checks["antisymmetry"] = anti

    jacobi = True
    for i in range(n):
        for j in range(n):
            for k in range(n):
                x, y, z = units[i], units[j], units[k]
                s = [Fraction(0)] * n
                for a, b, c in ((x, y, z), (y, z, x), (z, x, y)):
                    s = [u + v for u, v in zip(s, p.bracket(a, p.bracket(b, c)))]
                if any(s):
                    jacobi = False
                    rep.failures.append(f"Jacobi fails on ({p.labels[i]},{p.labels[j]},{p.labels[k]})")
    rep.checks["jacobi"] = jacobi

    rep.checks["symmetry"] = p.form == p.form.transpose()
    if not rep.checks["symmetry"]:
        rep.failures.append("form is not symmetric")

    inv = True
    for i in range(n):
        for j in range(n):
            for k in range(n):
                lhs = p.pair(p.bracket(units[i], units[j]), units[k])
                rhs = p.pair(units[i], p.bracket(units[j], units[k]))
                if lhs != rhs:
                    inv = False
                    rep.failures.append(
                        f"([{p.labels[i]},{p.labels[j]}],{p.labels[k]}) != ({p.labels[i]},[{p.labels[j]},{p.labels[k]}])"
                    )
    rep.checks["invariance"] = inv

    rep.checks["nondegenerate"] = bool(p.form.det())
    if not rep.checks["nondegenerate"]:
        rep.failures.append("form is degenerate")
    return rep


# automorphisms -----------------------------------------------------------


@dataclass(frozen=True)
class LieAut:
    """Linear automorphism given by its matrix; column i is the image of basis vector i."""

    matrix: Matrix
    order: int = 0
    name: str = ""

    def __post_init__(self):
        r, c = self.matrix.shape
        if r != c:
            raise ValueError("automorphism matrix must be square")
        if not self.matrix.det():
            raise ValueError("automorphism matrix is not invertible")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __call__(self, v: Sequence) -> tuple:
        return self.matrix.apply(v)

    def inverse(self) -> LieAut:
        return LieAut(self.matrix.inverse(), self.order)

    def compose(self, other: LieAut) -> LieAut:
        return LieAut(self.matrix @ other.matrix)

    def preserves_bracket(self, p: LiePresentation) -> bool:
        units = [p.unit(i) for i in range(p.dim)]
        for x in units:
            for y in units:
                if self(p.bracket(x, y)) != p.bracket(self(x), self(y)):
                    return False
        return True

    def preserves_form(self, p: LiePresentation) -> bool:
        g = self.matrix
        return g.transpose() @ p.form @ g == p.form


def aut_order(g: LieAut | Matrix, bound: int) -> int | None:
    """Least M <= bound with g^M = id, or None when the order exceeds ``bound``."""
    mat = g.matrix if isinstance(g, LieAut) else g
    if not mat.det():
        raise ValueError("matrix is not invertible")
    power = mat
    for k in range(1, bound + 1):
        if power.is_identity():
            return k
        power = power @ mat
    return None


@dataclass(frozen=True)
class EigenDecomp:
    """Bases of V^{g,r} = {v : g v = zeta^{-r} v}, r = 0..M-1."""

    order: int
    spaces: tuple[tuple[tuple, ...], ...]

    @property
    def zeta(self):
        return zeta_power(self.order, 1)

    def eigenvalue(self, r: int):
        return zeta_power(self.order, -r)

    def dims(self) -> list[int]:
        return [len(s) for s in self.spaces]

    def basis(self) -> list[tuple[int, tuple]]:
        return [(r, v) for r, space in enumerate(self.spaces) for v in space]

    def change_of_basis(self) -> Matrix:
        return Matrix.from_columns([v for _, v in self.basis()])

    def components(self, v: Sequence) -> list[tuple]:
        """Split v into its projections onto each V^{g,r}."""
        basis = self.basis()
        coords = self.change_of_basis().inverse().apply(v)
        n = len(v)
        out = [[Fraction(0)] * n for _ in self.spaces]
        for (r, b), c in zip(basis, coords):
            if c:
                out[r] = [x + c * y for x, y in zip(out[r], b)]
        return [tuple(x) for x in out]

    def index_of(self, v: Sequence) -> int | None:
        """The r with v in V^{g,r}, or None when v is not homogeneous (or zero)."""
        comps = self.components(v)
        live = [r for r, c in enumerate(comps) if any(c)]
        return live[0] if len(live) == 1 else None


def eigen_decompose(g: LieAut | Matrix, M: int) -> EigenDecomp:
    mat = g.matrix if isinstance(g, LieAut) else g
    n = mat.shape[0]
    if not (mat ** M).is_identity():
        raise ValueError(f"g^{M} != id")
    spaces = []
    for r in range(M):
        lam = zeta_power(M, -r)
        shifted = mat - Matrix.identity(n) * lam
        spaces.append(nullspace(shifted))
    total = sum(len(s) for s in spaces)
    if total != n or rank([v for s in spaces for v in s]) != n:
        raise ValueError("eigenspaces do not span; g is not diagonalizable over Q(zeta_M)")
    return EigenDecomp(M, tuple(spaces))


# file IO -----------------------------------------------------------------


def resolve_data_path(path: str | Path) -> Path:
    p = Path(path)
    if p.exists():
        return p
    bundled = DATA_DIR / p.name
    if bundled.exists():
        return bundled
    raise FileNotFoundError(f"no such file (also not bundled): {path}")


def _load_yaml(path: str | Path) -> dict:
    with open(resolve_data_path(path)) as fh:
        data = yaml.safe_load(fh)
    if not isinstance(data, dict):
        raise PresentationError(f"{path}: expected a mapping at top level")
    return data


def presentation_from_dict(data: dict, name: str = "") -> LiePresentation:
    try:
        labels = tuple(str(x) for x in data["basis"])
        n = len(labels)
        rows = data["form"]
    except KeyError as exc:
        raise PresentationError(f"missing key {exc}") from None
    if len(rows) != n or any(len(r) != n for r in rows):
        raise PresentationError(f"form must be {n}x{n}")
    form = Matrix([[parse_scalar(x) for x in r] for r in rows])
    brackets: dict[tuple[int, int], dict[int, object]] = {}
    given = set()
    for entry in data.get("brackets", []) or []:
        if len(entry) != 4:
            raise PresentationError(f"structure constant {entry!r} is not a (i, j, k, value) quadruple")
        i, j, k = (_index(labels, x) for x in entry[:3])
        c = parse_scalar(entry[3])
        given.add((i, j))
        brackets.setdefault((i, j), {})
        brackets[(i, j)][k] = brackets[(i, j)].get(k, 0) + c
    # fill [x_j, x_i] = -[x_i, x_j] only for pairs the file leaves out
    for (i, j) in list(given):
        if (j, i) not in given:
            brackets[(j, i)] = {k: -c for k, c in brackets[(i, j)].items()}
    dual = data.get("dual_coxeter")
    return LiePresentation(
        labels=labels,
        brackets=brackets,
        form=form,
        abelian=bool(data.get("abelian", not brackets)),
        dual_coxeter=parse_scalar(dual) if dual is not None else None,
        name=str(data.get("name", name)),
    )


def _index(labels: Sequence[str], x) -> int:
    if isinstance(x, int):
        return x
    try:
        return labels.index(str(x))
    except ValueError:
        raise PresentationError(f"unknown basis label {x!r}") from None


def load_presentation(path: str | Path) -> LiePresentation:
    return presentation_from_dict(_load_yaml(path), Path(path).stem)


def load_aut(path: str | Path, p: LiePresentation | None = None) -> LieAut:
    data = _load_yaml(path)
    mat = Matrix([[parse_scalar(x) for x in r] for r in data["matrix"]])
    if p is not None and mat.shape != (p.dim, p.dim):
        raise PresentationError(f"automorphism is {mat.shape}, algebra has dimension {p.dim}")
    return LieAut(mat, int(data.get("order", 0)), str(data.get("name", Path(path).stem)))


def presentation_to_dict(p: LiePresentation) -> dict:
    entries = []
    for (i, j), out in sorted(p.brackets.items()):
        if i < j:
            for k, c in sorted(out.items()):
                entries.append([p.labels[i], p.labels[j], p.labels[k], format_scalar(c)])
    return {
        "name": p.name,
        "basis": list(p.labels),
        "brackets": entries,
        "form": [[format_scalar(x) for x in r] for r in p.form.rows],
        "abelian": p.abelian,
        **({"dual_coxeter": format_scalar(p.dual_coxeter)} if p.dual_coxeter is not None else {}),
    }


# stock algebras ----------------------------------------------------------


def abelian(n: int, form: Matrix | None = None) -> LiePresentation:
    """Rank-n abelian Lie algebra; the form defaults to the identity."""
    form = form if form is not None else Matrix.identity(n)
    return LiePresentation(tuple(f"a{i}" for i in range(n)) if n > 1 else ("a",), {}, form, True, None, f"h{n}")


def sl2() -> LiePresentation:
    return load_presentation(DATA_DIR / "sl2.lie")


def sl3() -> LiePresentation:
    return load_presentation(DATA_DIR / "sl3.lie")


def chevalley_sl2() -> LieAut:
    return load_aut(DATA_DIR / "chevalley.aut")


def warn_critical_level(p: LiePresentation, level) -> bool:
    """Log a warning when the level is minus the dual Coxeter number."""
    if p.dual_coxeter is not None and level == -p.dual_coxeter:
        log.warning("level %s equals -h^vee for %s", level, p.name or "g")
        return True
    return False
