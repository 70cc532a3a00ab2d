"""Named verification suites producing one CheckRecord per check.

Each suite is a generator of ``CheckRecord`` and plain strings; strings are
informational lines for the text report. Iteration order follows the
canonical bases, so reports are deterministic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator

import yaml

from . import affine as aff
from . import arcjet, descent, loop, twistedmod
from .diffring import CommutativeVertexRing, diffring_aut_test, parse_laurent_or_scalar, parse_ring
from .exactnum import Matrix, parse_scalar, zeta_power
from .liedata import (
    LieAut,
    aut_order,
    load_aut,
    load_presentation,
    resolve_data_path,
    validate_presentation,
    warn_critical_level,
)
from .vacore import (
    CheckRecord,
    borcherds_check,
    commutativity_check,
    creation_check,
    filtration_check,
    hs_derivation_check,
    hs_iterativity_check,
    induced_bracket_check,
    induced_form_check,
    record,
)

Item = CheckRecord | str


class InputError(ValueError):
    """A suite could not be configured from its inputs."""


@dataclass
class SuiteConfig:
    suite: str
    lie: str | None = None
    aut: str | None = None
    cocycle: str | None = None
    jet: str | None = None
    maps: list[str] = field(default_factory=list)
    ring: str = "S2"
    level: str = "1"
    degree: int = 3
    window: tuple[int, int] = (-3, 3)
    exponents: tuple[int, int] = (-2, 2)
    order: int | None = None
    conductor: int | None = None
    image: dict[str, str] = field(default_factory=dict)
    base_map: str | None = None

    def __post_init__(self):
        if self.suite not in SUITES:
            raise InputError(f"unknown suite {self.suite!r}; expected one of {sorted(SUITES)}")
        if self.degree < 0:
            raise InputError("degree bound must be nonnegative")
        if self.window[0] > self.window[1] or self.exponents[0] > self.exponents[1]:
            raise InputError("windows must satisfy lo <= hi")
        if self.order is not None and self.order < 0:
            raise InputError("truncation order must be nonnegative")
        if self.conductor is not None and self.conductor < 1:
            raise InputError("conductor must be positive")

    @property
    def modes(self) -> range:
        """Mode window [lo, hi]."""
        return range(self.window[0], self.window[1] + 1)


def _summary(name: str, check: str, inputs: dict, failures: list, tested: int) -> CheckRecord:
    mismatch = {"failures": "; ".join(str(f) for f in failures[:5])} if failures else None
    return CheckRecord(name, check, {**{k: str(v) for k, v in inputs.items()}, "tested": str(tested)},
                       not failures, mismatch)


def _level(cfg: SuiteConfig):
    try:
        return parse_scalar(cfg.level)
    except ValueError as exc:
        raise InputError(f"bad level {cfg.level!r}: {exc}") from None


def _lie(cfg: SuiteConfig):
    if not cfg.lie:
        raise InputError(f"suite {cfg.suite!r} needs --lie")
    p = load_presentation(cfg.lie)
    rep = validate_presentation(p)
    if not rep.ok:
        raise InputError(f"{cfg.lie}: {rep}")
    return p


def _aut(cfg: SuiteConfig, p) -> tuple[LieAut, int]:
    if not cfg.aut:
        raise InputError(f"suite {cfg.suite!r} needs --aut")
    g = load_aut(cfg.aut, p)
    if not g.preserves_bracket(p) or not g.preserves_form(p):
        raise InputError(f"{cfg.aut} is not an automorphism of {p.name} preserving the form")
    M = aut_order(g, 64)
    if M is None:
        raise InputError(f"{cfg.aut} has no finite order up to 64")
    if cfg.conductor is not None and cfg.conductor % M:
        raise InputError(f"conductor {cfg.conductor} is not a multiple of the automorphism order {M}")
    return g, M


def _algebra(cfg: SuiteConfig):
    p = _lie(cfg)
    level = _level(cfg)
    if warn_critical_level(p, level):
        raise InputError(f"level {level} is critical for {p.name}")
    return aff.AffineAlgebra(p, level)


# suites ------------------------------------------------------------------


def suite_axioms(cfg: SuiteConfig) -> Iterator[Item]:
    """Commutative vertex ring S_m: creation, commutativity, Borcherds, Hasse-Schmidt rules."""
    m = parse_ring(cfg.ring).m
    C = CommutativeVertexRing(m)
    lo, hi = cfg.window
    B = C.basis(lo, hi)
    name = f"S{m}"
    yield f"{name}: {len(B)} monomials t^q, q in [{lo}, {hi}]"
    for u in B:
        yield record(name, "creation", {"u": u}, creation_check(C, u))
    for u, v in itertools.combinations_with_replacement(B, 2):
        yield record(name, "commutativity", {"u": u, "v": v}, commutativity_check(C, u, v))
    modes = range(lo, hi)
    for u, v, w in itertools.product(B, repeat=3):
        bad = None
        for mm, n, pp in itertools.product(modes, repeat=3):
            res = borcherds_check(C, u, v, w, mm, n, pp)
            if not res:
                bad = (mm, n, pp, res)
                break
        inputs = {"u": u, "v": v, "w": w, "modes": f"[{lo},{hi - 1}]^3"}
        if bad is None:
            yield CheckRecord(name, "borcherds", {k: str(x) for k, x in inputs.items()}, True)
        else:
            mm, n, pp, res = bad
            yield record(name, "borcherds", {**inputs, "m": mm, "n": n, "p": pp}, res)
    top = max(abs(lo), abs(hi))
    for u in B:
        fails = [f"D_{i}D_{j}" for i in range(top + 1) for j in range(top + 1)
                 if not hs_iterativity_check(C, u, i, j)]
        yield _summary(name, "hs_iterativity", {"u": u}, fails, (top + 1) ** 2)
    for u, v in itertools.product(B, repeat=2):
        fails = [f"D_{k}" for k in range(top + 1) if not hs_derivation_check(C, u, v, -1, k)]
        yield _summary(name, "leibniz", {"u": u, "v": v}, fails, top + 1)


def suite_affine(cfg: SuiteConfig) -> Iterator[Item]:
    V = _algebra(cfg)
    d = cfg.degree
    yield f"{V.name}: graded dimensions {V.dims(d)}"
    gens = [V.generator(i) for i in range(V.rank)]
    coords = aff.degree_one_coordinates(V)
    rep = induced_bracket_check(V, gens, coords, V.lie)
    yield _summary(V.name, "induced_bracket", {}, rep.failures, rep.tested)
    rep = induced_form_check(V, gens, coords, V.lie, V.level)
    yield _summary(V.name, "induced_form", {"level": V.level}, rep.failures, rep.tested)
    graded = [(k, b) for k in range(d + 1) for b in V.basis(k)]
    for _, u in graded:
        yield record(V.name, "creation", {"u": V.format(u)}, creation_check(V, u), V.format)
    frep = filtration_check(V, d, cfg.modes)
    yield _summary(V.name, "filtration", {"degree": d}, frep.failures, frep.tested)
    modes = range(cfg.window[0], cfg.window[1])
    for (du, u), (dv, v), (dw, w) in itertools.product(graded, repeat=3):
        if du + dv + dw > d:
            continue
        inputs = {"u": V.format(u), "v": V.format(v), "w": V.format(w)}
        bad = None
        for mm, n, pp in itertools.product(modes, repeat=3):
            res = borcherds_check(V, u, v, w, mm, n, pp)
            if not res:
                bad = record(V.name, "borcherds", {**inputs, "m": mm, "n": n, "p": pp}, res, V.format)
                break
        yield bad or CheckRecord(V.name, "borcherds", {**inputs, "modes": f"[{modes[0]},{modes[-1]}]^3"}, True)


def suite_loop(cfg: SuiteConfig) -> Iterator[Item]:
    V = _algebra(cfg)
    g, M = _aut(cfg, V.lie)
    L = loop.loop_build(V, g, M)
    lo, hi = cfg.exponents
    yield f"{L.name}: eigenspace dimensions {L.decomp.dims()}, weights {list(L.weights)}"
    rep = loop.trivialization_roundtrip(L, cfg.degree, lo, hi)
    yield _summary(L.name, "trivialization_roundtrip", {"degree": cfg.degree}, rep.failures, rep.tested)
    rep = loop.trivialization_coherence(L, cfg.degree, lo, hi, cfg.modes)
    yield _summary(L.name, "trivialization_coherence", {"degree": cfg.degree, "exponents": f"[{lo},{hi}]"},
                   rep.failures, rep.tested)


def _descent_checks(V, z: descent.CyclicCocycle, cfg: SuiteConfig, label: str) -> Iterator[Item]:
    lo, hi = cfg.exponents
    fp = descent.descent_fixed_points(V, z, cfg.degree, lo, hi, cfg.modes)
    yield f"{label}: fixed-point slice of dimension {fp.dim} (degree <= {cfg.degree}, exponents [{lo},{hi}])"
    yield _summary(label, "fixed_point_closure", {"dim": fp.dim}, fp.closure_failures, fp.closure_tested)
    phi = z.z.matrix
    if all(x.is_constant() for r in phi.rows for x in r) and not any(z.z.translation):
        L = loop.loop_build(V, phi.map(lambda x: x.constant_value()), z.m)
        cmp = descent.compare_with_loop(L, fp, cfg.modes)
        fails = list(cmp.not_fixed) + list(cmp.product_failures)
        if not (cmp.loop_dim == cmp.fixed_dim == cmp.image_rank):
            fails.insert(0, f"dims loop={cmp.loop_dim} fixed={cmp.fixed_dim} image={cmp.image_rank}")
        yield _summary(label, "descent_equals_loop",
                       {"loop_dim": cmp.loop_dim, "fixed_dim": cmp.fixed_dim}, fails, cmp.tested)
    return fp


def suite_descent(cfg: SuiteConfig) -> Iterator[Item]:
    V = _algebra(cfg)
    if cfg.cocycle:
        z = descent.load_cocycle(cfg.cocycle)
        if z.z.dim != V.rank:
            raise InputError(f"cocycle acts on rank {z.z.dim}, algebra has rank {V.rank}")
    else:
        g, M = _aut(cfg, V.lie)
        z = descent.CyclicCocycle(aff.F1Map.linear(g), M)
    if cfg.conductor is not None and cfg.conductor != z.m:
        raise InputError(f"conductor {cfg.conductor} does not match the cocycle's m = {z.m}")
    label = f"{V.name}/z"
    ok = descent.cocycle_check(z)
    yield CheckRecord(label, "cocycle", {"m": str(z.m), "z": str(z.z)}, ok,
                      None if ok else {"norm": str(z.norm())})
    if not ok:
        return
    yield from _descent_checks(V, z, cfg, label)
    if not any(z.z.translation):
        return
    a = descent.solve_norm_equation(z)
    if a is None:
        yield "no translation witness: z is not cohomologous to its linear part"
        return
    z2 = descent.CyclicCocycle(descent.coboundary(z.z, a, z.m), z.m, z.case)
    yield f"witness a = {a}; a^-1 z gamma(a) = {z2.z}"
    yield CheckRecord(label, "cohomologous", {"a": str(a), "z2": str(z2.z)},
                      descent.cohomologous_verify(z, z2, a))
    fp2 = yield from _descent_checks(V, z2, cfg, f"{V.name}/z2")
    # the witness shifts exponents, so truncated slices need not have equal dimensions;
    # transport checks a maps Fix(z2) injectively into Fix(z) and back
    fails = descent.witness_transport(V, z, z2, a, fp2)
    yield _summary(label, "witness_transport", {"dim": fp2.dim}, fails, fp2.dim)


def _load_map(path: str, L: loop.LoopAlgebra) -> aff.F1Map:
    with open(resolve_data_path(path)) as fh:
        data = yaml.safe_load(fh)
    if not isinstance(data, dict):
        raise InputError(f"{path}: expected a mapping")
    try:
        rows = data["matrix"]
        mat = Matrix([[parse_laurent_or_scalar(x, L.M) for x in r] for r in rows])
        trans = tuple(parse_laurent_or_scalar(x, L.M) for x in data.get("translation", []) or [])
    except (KeyError, TypeError) as exc:
        raise InputError(f"{path}: bad loop map: {exc}") from None
    if mat.shape != (L.E.rank, L.E.rank):
        raise InputError(f"{path}: matrix is {mat.shape}, algebra has rank {L.E.rank}")
    return aff.F1Map(mat, trans)


def suite_pullback(cfg: SuiteConfig) -> Iterator[Item]:
    V = _algebra(cfg)
    g, M = _aut(cfg, V.lie)
    W = twistedmod.twisted_fock_build(V.lie, g, M, V.level)
    L = W.L
    lo, hi = cfg.exponents
    ident = twistedmod.identity_assignment(W)
    maps = [twistedmod.LoopMap(L, L, _load_map(p, L)) for p in cfg.maps] or [
        twistedmod.LoopMap(L, L, aff.F1Map.identity(L.E.rank))]
    names = cfg.maps or ["id"]
    label = f"{V.name}/{M}-twisted"
    rep = twistedmod.commutator_report(ident, lo, hi)
    yield _summary(label, "module_commutator", {}, rep.failures, rep.tested)
    pulled = []
    for name, phi in zip(names, maps):
        fails = phi.check(lo, hi)
        yield _summary(label, "loop_map", {"map": name}, fails, 1)
        if fails:
            return
        A = twistedmod.pullback(phi, ident, check=False)
        pulled.append(A)
        rep = twistedmod.support_report(A, lo, hi)
        yield _summary(label, "pullback_support", {"map": name}, rep.failures, rep.tested)
        rep = twistedmod.commutator_report(A, lo, hi)
        yield _summary(label, "pullback_commutator", {"map": name}, rep.failures, rep.tested)
        back = twistedmod.pullback(phi.inverse(), A, check=False)
        rep = twistedmod.assignments_equal(back, ident, lo, hi)
        yield _summary(label, "pullback_inverse", {"map": name}, rep.failures, rep.tested)
    for (n1, phi), (n2, psi) in itertools.pairwise(zip(names, maps)):
        lhs = twistedmod.pullback(psi.compose(phi), ident, check=False)
        rhs = twistedmod.pullback(phi, twistedmod.pullback(psi, ident, check=False), check=False)
        rep = twistedmod.assignments_equal(lhs, rhs, lo, hi)
        yield _summary(label, "functoriality", {"first": n1, "second": n2}, rep.failures, rep.tested)


def suite_arc(cfg: SuiteConfig) -> Iterator[Item]:
    if not cfg.jet:
        raise InputError("suite 'arc' needs --jet")
    p, file_order = arcjet.load_jet(cfg.jet)
    N = cfg.order if cfg.order is not None else (file_order if file_order is not None else 2)
    ring, ideal = arcjet.prolong(p, N)
    gens = f"[{', '.join(p.variables)}]" if p.variables else ""
    label = f"{p.base}{gens}/({', '.join(p.relations)})"
    yield f"{label} at order {N}: variables {ring.names}"
    for line in ideal.describe():
        yield f"  {line}"
    fails, skipped = arcjet.iterativity_check(ring, 2)
    yield _summary(label, "jet_iterativity", {"order": N, "overflow_skipped": skipped}, fails, 1)
    yield _summary(label, "ideal_stability", {"order": N}, arcjet.stability_check(ideal), len(ideal.generators))
    mem = arcjet.collapses(ideal)
    if mem.answer == "inconclusive":
        raise arcjet.ResourceLimit(f"collapse test inconclusive: {mem.reason}")
    if mem:
        cert = " + ".join(f"({ring.format(c)})*({ring.format(g)})"
                          for c, g in zip(mem.certificate, ideal.generators) if c)
        result = "1 ∈ I"
        yield f"collapses: {result} (certificate 1 = {cert}; integral: {mem.integral})"
        inputs = {"order": N, "result": result, "certificate": cert, "integral": mem.integral}
    else:
        result = "1 ∉ I"
        yield f"collapses: {result}"
        inputs = {"order": N, "result": result}
    yield CheckRecord(label, "collapses", {k: str(v) for k, v in inputs.items()}, True)
    if cfg.image or cfg.base_map is not None:
        ext = arcjet.adjunction_extend(cfg.image, p, N, cfg.base_map)
        for name, val in ext.table.items():
            yield f"  {name} -> {val}"
        mismatch = {g: str(v) for g, v in ext.violations} or None
        yield CheckRecord(label, "adjunction_extend",
                          {"image": str(cfg.image), "base_map": str(cfg.base_map or "t")}, ext.ok, mismatch)


def suite_diffaut(cfg: SuiteConfig) -> Iterator[Item]:
    """t -> c t^e on k[t^{+-1}] commutes with d/dt only for (c, e) = (1, 1)."""
    for c in (1, -1, 2, -2, zeta_power(4, 1)):
        for e in (1, -1):
            got = diffring_aut_test(c, e)
            expected = c == 1 and e == 1
            yield CheckRecord("k[t^+-1]", "diffring_aut", {"c": str(c), "e": str(e), "result": str(got)},
                              got == expected)


SUITES = {
    "axioms": suite_axioms,
    "affine": suite_affine,
    "loop": suite_loop,
    "descent": suite_descent,
    "twistedmod": suite_pullback,
    "pullback": suite_pullback,
    "arc": suite_arc,
    "diffaut": suite_diffaut,
}


def run_items(cfg: SuiteConfig) -> Iterator[Item]:
    return SUITES[cfg.suite](cfg)

