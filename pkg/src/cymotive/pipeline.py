"""Inductive constructions: products, equivariant blow-ups, quotients.

Each step takes two varieties with a residual Z_m action, forms the
product with (Z_m)^2 acting, resolves the quotient by ker(a1 + a2) and
hands back the residual Z_m action.  The geometry runs on the stratified
kernel in :mod:`cymotive.strata`; the motive is read off the result and
cross-checked against the transcendental block predicted by the Kunneth
formula, character by character.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field, replace
from typing import Sequence

from .curves import CurveAction, builtin_curve, fixed_point_class_flag, lefschetz_check, power
from .motives import (
    BlockTerm,
    HodgeDiamond,
    LefschetzSum,
    MotiveExpr,
    TranscendentalBlock,
    block_hodge_by_character,
    diamond,
    motive_to_json,
)
from .strata import StrataError, StrataSpace

CONSTRUCTIONS = ("ch-z2", "ch-z3", "schreieder")


class PipelineError(RuntimeError):
    """A step failed; the message carries the genealogy of the offending piece."""


class StepPreconditionError(PipelineError):
    pass


@dataclass(frozen=True)
class FixedComponent:
    """Fixed components of one group element sharing dimension and normal weights.

    ``motive`` is the combined motive of all ``component_count`` components;
    ``normal_weights`` are eigenvalue exponents of the element on the normal
    space.  ``motive`` is None when the family is not a sum of Lefschetz
    motives (its Hodge numbers are still in ``hodge``).
    """

    dim: int
    motive: LefschetzSum | None
    normal_weights: tuple[int, ...]
    component_count: int
    genealogy_tag: str
    hodge: tuple[tuple[tuple[int, int], int], ...] = ()

    @property
    def codim(self) -> int:
        return len(self.normal_weights)

    def motive_per_component(self) -> LefschetzSum | None:
        if self.motive is None:
            return None
        c = self.component_count
        if any(v % c for _, v in self.motive.terms):
            return None
        return LefschetzSum.of({k: v // c for k, v in self.motive.terms})


@dataclass(frozen=True)
class CertificateEntry:
    kind: str
    checks: tuple[tuple[str, bool], ...]
    citation: str
    evidence: tuple[tuple[str, object], ...] = ()

    @property
    def ok(self) -> bool:
        return all(v for _, v in self.checks)

    def to_json(self) -> dict:
        ev = {}
        for k, v in self.evidence:
            ev[k] = {f"{p},{q}": x for (p, q), x in v.items()} if isinstance(v, dict) else v
        return {"kind": self.kind, "checks": dict(self.checks), "citation": self.citation, "evidence": ev}


@dataclass(frozen=True)
class EquivariantVariety:
    dim: int
    motive: MotiveExpr
    group: int
    fixed_table: dict[int, tuple[FixedComponent, ...]]
    certificate: tuple[CertificateEntry, ...]
    space: StrataSpace = field(repr=False)
    factors: tuple[CurveAction, ...] = ()
    signs: tuple[int, ...] = ()
    label: str = ""

    def hodge_diamond(self) -> HodgeDiamond:
        return HodgeDiamond.from_mapping(self.dim, self.space.hodge())

    def block(self) -> TranscendentalBlock:
        return self.motive.blocks[0].block

    def to_json(self) -> dict:
        d = self.hodge_diamond()
        return {
            "label": self.label,
            "dim": self.dim,
            "modulus": self.group,
            "diamond": d.to_json(),
            "euler": d.euler(),
            "motive": motive_to_json(self.motive),
            "fixed_table": {
                str(k): [
                    {
                        "dim": fc.dim,
                        "normal_weights": list(fc.normal_weights),
                        "component_count": fc.component_count,
                        "motive": None if fc.motive is None else {str(a): b for a, b in fc.motive.terms},
                        "genealogy": fc.genealogy_tag,
                    }
                    for fc in comps
                ]
                for k, comps in sorted(self.fixed_table.items())
            },
            "certificate": [e.to_json() for e in self.certificate],
        }


# --- derived data ---------------------------------------------------------------


def _is_lefschetz(hodge: dict) -> bool:
    return all(p == q and v >= 0 for (p, q), v in hodge.items() if v)


def fixed_table(space: StrataSpace) -> dict[int, tuple[FixedComponent, ...]]:
    """Fixed loci of every nonzero residual element, read from the strata."""
    if space.r != 1:
        raise PipelineError("fixed tables are defined for a residual cyclic action")
    m = space.m
    table = {}
    for k in range(1, m):
        groups: dict = defaultdict(lambda: [Counter(), set()])
        for s in space.strata:
            if (k,) not in s.stab:
                continue
            weights = tuple(sorted((l.char[0] * k) % m for l in s.normal if (l.char[0] * k) % m))
            dim = space.dim - len(weights)
            acc, origins = groups[(dim, weights)]
            for (p, q), v in s.epoly.total().items():
                acc[(p, q)] += v
            origins.add(s.origin.split("<")[0])
        comps = []
        for (dim, weights), (acc, origins) in sorted(groups.items()):
            hodge = {(p, q): (-1) ** (p + q) * v for (p, q), v in acc.items() if v}
            count = hodge.get((dim, dim), 0)
            motive = LefschetzSum.of({p: v for (p, q), v in hodge.items()}) if _is_lefschetz(hodge) else None
            tag = ", ".join(sorted(origins)[:4]) + (" ..." if len(origins) > 4 else "")
            comps.append(FixedComponent(dim, motive, weights, count, tag, tuple(sorted(hodge.items()))))
        table[k] = tuple(comps)
    return table


def _finish(
    space: StrataSpace,
    factors: Sequence[CurveAction],
    signs: Sequence[int],
    certificate: list[CertificateEntry],
    label: str,
) -> EquivariantVariety:
    n = space.dim
    m = space.m
    block = TranscendentalBlock(tuple(factors), tuple(signs), m)
    expected = block_hodge_by_character(block)
    found = space.total_epoly().by_char()
    sign = (-1) ** n
    mismatches = []
    for chi in set(found) | {(t,) for t in expected}:
        t = chi[0]
        per = found.get(chi, {})
        want = expected.get(t, {})
        for (p, q), v in per.items():
            h = (-1) ** (p + q) * v
            if p != q and want.get(p, 0) * (p + q == n) != h:
                mismatches.append((t, p, q, want.get(p, 0), h))
        for p, v in want.items():
            if p != n - p and sign * per.get((p, n - p), 0) != v:
                mismatches.append((t, p, n - p, v, sign * per.get((p, n - p), 0)))
    hodge = space.hodge()
    lef = Counter()
    for (p, q), v in hodge.items():
        if p == q:
            lef[p] += v
    block_total = Counter()
    for t, per in expected.items():
        for p, v in per.items():
            block_total[p] += v
    if n % 2 == 0:
        lef[n // 2] -= block_total.get(n // 2, 0)
    if any(v < 0 for v in lef.values()):
        mismatches.append(("middle", n // 2, n // 2, block_total.get(n // 2, 0), hodge.get((n // 2, n // 2), 0)))
    if mismatches:
        t, p, q, want, got = mismatches[0]
        raise PipelineError(
            f"{label}: transcendental part disagrees with the Kunneth block at character {t}, "
            f"h^{{{p},{q}}}: expected {want}, found {got}"
        )
    motive = MotiveExpr(LefschetzSum.of(lef), (BlockTerm(block),), n)
    certificate = certificate + [
        CertificateEntry(
            "marking",
            (
                ("single transcendental block", len(motive.blocks) == 1),
                ("classes off the middle degree are algebraic", not mismatches),
                ("motive realizes the computed diamond", diamond(motive) == HodgeDiamond.from_mapping(n, hodge)),
            ),
            "motive = T + sum of Lefschetz motives",
        )
    ]
    return EquivariantVariety(
        n, motive, m, fixed_table(space), tuple(certificate), space, tuple(factors), tuple(signs), label
    )


# --- steps ----------------------------------------------------------------------


def atom(curve: CurveAction, sign: int = 1, label: str = "C") -> EquivariantVariety:
    """A curve as a one-dimensional building block.

    ``sign = -1`` lets the generator act through its inverse, which turns a
    relation with a minus sign into the plain kernel of a1 + a2.
    """
    checks = [(f"fixed-point count k={k}", lefschetz_check(curve, k)) for k in range(1, curve.modulus)]
    flag = fixed_point_class_flag(curve)
    checks.append(("fixed points rationally equivalent", flag.rationally_equivalent))
    checks.append(("quotient curve rational", curve.quotient_rational))
    acting = curve if sign == 1 else power(curve, -1)
    space = StrataSpace.from_curve(acting, label)
    entry = CertificateEntry("marking", tuple(checks), f"curve marking: {flag.citation}")
    return _finish(space, [curve], [sign], [entry], label)


def _product(V1: EquivariantVariety, V2: EquivariantVariety) -> tuple[StrataSpace, list[CertificateEntry]]:
    if V1.group != V2.group:
        raise StepPreconditionError(f"moduli differ: {V1.group} vs {V2.group}")
    entry = CertificateEntry(
        "product",
        (
            ("factors share the group order", True),
            ("factors carry valid certificates", all(e.ok for e in V1.certificate + V2.certificate)),
        ),
        "products of varieties with (star) markings",
    )
    return V1.space.product(V2.space), list(V1.certificate) + list(V2.certificate) + [entry]


def _blow_entry(rep) -> CertificateEntry:
    return CertificateEntry(
        "blow_up",
        (
            ("center has trivial Chow motive", _is_lefschetz(rep.hodge)),
            ("center is group-stable", rep.stable),
            ("center is a union of fixed components", True),
        ),
        "blow-up along a stable center with trivial Chow motive",
        (("center", rep.tag), ("codims", list(rep.codims)), ("center_hodge", dict(rep.hodge))),
    )


def _quot_entry(rep, shape_ok: bool = True) -> CertificateEntry:
    return CertificateEntry(
        "quotient",
        (
            ("stabilizers act by reflections", rep.reflection_ok),
            ("fixed-locus shape as required", shape_ok),
        ),
        "quotient by a group with smooth image",
        (("order", rep.order),),
    )


def _down_entry(rep) -> CertificateEntry:
    return CertificateEntry(
        "blow_down",
        (
            ("divisor is a P1-bundle", rep.bundle_ok),
            ("base has trivial Chow motive", _is_lefschetz(rep.base_hodge)),
        ),
        "contraction of a P1-bundle onto a center with trivial Chow motive",
        (("divisor", rep.tag), ("base_hodge", dict(rep.base_hodge))),
    )


def _fix_codims(V: EquivariantVariety) -> list[tuple[int, str]]:
    return [(fc.codim, fc.genealogy_tag) for fc in V.fixed_table.get(1, ())]


def _run(label, fn):
    try:
        return fn()
    except StrataError as exc:
        raise PipelineError(f"{label}: {exc}") from exc


def ch_z2_step(V1: EquivariantVariety, V2: EquivariantVariety, label: str = "z2") -> EquivariantVariety:
    if V1.group != 2 or V2.group != 2:
        raise StepPreconditionError("the involution step needs residual Z_2 actions")
    for V in (V1, V2):
        for codim, tag in _fix_codims(V):
            if codim != 1:
                raise StepPreconditionError(
                    f"{label}: fixed locus must be a smooth divisor, found codim {codim} ({tag})"
                )

    def go():
        X, cert = _product(V1, V2)
        X, rep = X.blow_up((1, 1), {2}, f"{label}.E")
        cert.append(_blow_entry(rep))
        X, q = X.quotient([(1, 1)])
        cert.append(_quot_entry(q))
        return X.to_residual(), cert

    X, cert = _run(label, go)
    return _finish(X, V1.factors + V2.factors, V1.signs + V2.signs, cert, label)


def ch_z3_step(V1: EquivariantVariety, V2: EquivariantVariety, label: str = "z3") -> EquivariantVariety:
    if V1.group != 3 or V2.group != 3:
        raise StepPreconditionError("the order-3 step needs residual Z_3 actions")
    shapes = [sorted({c for c, _ in _fix_codims(V)}) for V in (V1, V2)]
    if not any(s == [1] for s in shapes) or any(not set(s) <= {1, 2} for s in shapes):
        raise StepPreconditionError(
            f"{label}: need one divisorial fixed locus and one of codim <= 2, got codims {shapes}"
        )

    def go():
        X, cert = _product(V1, V2)
        X, r1 = X.blow_up((1, 2), None, f"{label}.E1", track=True)
        cert.append(_blow_entry(r1))
        X, r2 = X.blow_up((1, 2), {2}, f"{label}.E2", named=True)
        cert.append(_blow_entry(r2))
        X, q = X.quotient([(1, 2)])
        cert.append(_quot_entry(q))
        if 2 in r1.codims:
            X, d = X.blow_down(f"{label}.E1c2")
            cert.append(_down_entry(d))
        return X.to_residual(), cert

    X, cert = _run(label, go)
    return _finish(X, V1.factors + V2.factors, V1.signs + V2.signs, cert, label)


def schreieder_step(
    V1: EquivariantVariety, V2: EquivariantVariety, c: int, label: str = "s", contract: bool = False
) -> EquivariantVariety:
    """Resolve the quotient by the order-3^c relation group in c rounds.

    Round i blows up the fixed locus of eta twice and divides by <eta>,
    where eta = 3^(c-1-i) (1, -1).  With ``contract`` the first exceptional
    divisor of the last round is contracted again when it is a P1-bundle.
    """
    m = 3**c
    if c < 1 or V1.group != m or V2.group != m:
        raise StepPreconditionError(f"{label}: need residual Z_{m} actions for c={c}")
    for V in (V1, V2):
        for k, comps in V.fixed_table.items():
            for fc in comps:
                if fc.motive is None:
                    raise StepPreconditionError(
                        f"{label}: fixed component of k={k} has non-Lefschetz motive ({fc.genealogy_tag})"
                    )

    def go():
        X, cert = _product(V1, V2)
        for i in range(c):
            e = 3 ** (c - 1 - i)
            eta = (e % m, (-e) % m)
            last = i == c - 1
            X, ra = X.blow_up(eta, None, f"{label}.Y{i}a", track=contract and last)
            cert.append(_blow_entry(ra))
            X, rb = X.blow_up(eta, None, f"{label}.Y{i}b", named=contract and last)
            cert.append(_blow_entry(rb))
            X, q = X.quotient([eta])
            cert.append(_quot_entry(q))
        if contract:
            X, d = X.blow_down(f"{label}.Y{c - 1}ac2")
            cert.append(_down_entry(d))
        return X.to_residual(), cert

    X, cert = _run(label, go)
    return _finish(X, V1.factors + V2.factors, V1.signs + V2.signs, cert, label)


# --- configurations ------------------------------------------------------------


@dataclass(frozen=True)
class ConstructionSpec:
    construction: str
    n: int
    genera: tuple[int, ...] = ()
    c: int = 1
    a: int | None = None
    b: int | None = None
    mode: str = "complex"

    def __post_init__(self):
        if self.construction not in CONSTRUCTIONS:
            raise ValueError(f"unknown construction {self.construction!r}")
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.mode not in ("complex", "supersingular"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.construction == "ch-z2":
            genera = self.genera or (1,) * self.n
            if len(genera) != self.n or min(genera) < 1:
                raise ValueError("genera must list n positive genera")
            object.__setattr__(self, "genera", tuple(genera))
        elif self.genera:
            raise ValueError("genera only apply to ch-z2")
        if self.construction == "schreieder":
            if self.mode != "complex":
                raise ValueError("supersingular mode applies to ch builds only")
            if self.c < 1:
                raise ValueError("c must be at least 1")
            a, b = self.a, self.b
            if a is None or b is None:
                raise ValueError("schreieder needs a and b")
            if a + b != self.n:
                raise ValueError(f"a + b must equal n ({a} + {b} != {self.n})")
            if not a > b >= 0:
                raise ValueError(f"schreieder needs a > b >= 0, got a={a}, b={b}")

    def curves(self) -> list[tuple[CurveAction, int]]:
        if self.construction == "ch-z2":
            return [(builtin_curve("hyperelliptic_involution", g=g), 1) for g in self.genera]
        if self.construction == "ch-z3":
            return [(builtin_curve("mu_curve", g=1), 1)] * self.n
        g = (3**self.c - 1) // 2
        C = builtin_curve("mu_curve", g=g)
        return [(C, 1)] * self.a + [(C, -1)] * self.b


def build(spec: ConstructionSpec, contract: bool = False) -> EquivariantVariety:
    atoms = [atom(C, s, f"C{j}") for j, (C, s) in enumerate(spec.curves())]
    V = atoms[0]
    for j, nxt in enumerate(atoms[1:], start=1):
        label = f"s{j}"
        if spec.construction == "ch-z2":
            V = ch_z2_step(V, nxt, label)
        elif spec.construction == "ch-z3":
            V = ch_z3_step(V, nxt, label)
        else:
            V = schreieder_step(V, nxt, spec.c, label, contract=contract and j == len(atoms) - 1)
    return replace(V, label=f"{spec.construction} n={spec.n}")


def euler_characteristic(V: EquivariantVariety) -> int:
    return V.hodge_diamond().euler()


def minimal_surface(spec: ConstructionSpec) -> EquivariantVariety:
    """Minimal model of a Schreieder surface with c = 1.

    The explicit resolution carries (-1)-curves: the first exceptional curves
    of the last round, whose contraction is the same move as in the order-3
    step.  Other cases fail closed.
    """
    if spec.construction != "schreieder" or spec.n != 2 or spec.c != 1:
        raise PipelineError("minimal_surface is implemented for schreieder surfaces with c = 1")
    return build(spec, contract=True)


def kodaira_zero_h11(V: EquivariantVariety) -> int:
    """h^{1,1} of a minimal surface with q = 0 and K^2 = 0, by Noether's formula."""
    d = V.hodge_diamond()
    if V.dim != 2 or d[1, 0] != 0:
        raise PipelineError("needs a surface with q = 0")
    return 10 + 10 * d[2, 0]


# --- certificate -----------------------------------------------------------------


@dataclass
class CertificateReport:
    valid: bool
    lines: list[str]
    entries: list[dict]
    reduction: dict[str, bool]

    def render(self) -> str:
        return "\n".join(self.lines)

    def to_json(self) -> dict:
        return {
            "valid": self.valid,
            "verdict": "VALID" if self.valid else "INVALID",
            "entries": self.entries,
            "reduction": self.reduction,
        }


def _recheck(entry: CertificateEntry) -> dict[str, bool]:
    checks = dict(entry.checks)
    ev = dict(entry.evidence)
    if "center_hodge" in ev:
        checks["center has trivial Chow motive"] = _is_lefschetz(ev["center_hodge"])
    if "base_hodge" in ev:
        checks["base has trivial Chow motive"] = _is_lefschetz(ev["base_hodge"])
    return checks


def star_certificate(V: EquivariantVariety) -> CertificateReport:
    lines, entries = [], []
    all_ok = True
    for i, e in enumerate(V.certificate):
        checks = _recheck(e)
        ok = all(checks.values())
        all_ok &= ok
        mark = "ok " if ok else "BAD"
        lines.append(f"[{mark}] {i:3d} {e.kind:<9} {e.citation}")
        for name, v in checks.items():
            if not v:
                lines.append(f"          failed: {name}")
        entries.append({**e.to_json(), "checks": checks, "ok": ok})
    d = V.hodge_diamond()
    block_only = Counter()
    for p, v in _block_hodge(V).items():
        block_only[(p, V.dim - p)] += v
    algebraic = all(
        d[p, q] == block_only.get((p, q), 0) for p in range(V.dim + 1) for q in range(V.dim + 1) if p != q
    )
    reduction = {
        "cohomology off the middle degree is algebraic": algebraic,
        "marking satisfies the closure condition": all_ok,
    }
    valid = all(reduction.values())
    lines.append(f"off-middle cohomology algebraic: {'yes' if algebraic else 'no'}")
    lines.append(f"marking closed under all steps: {'yes' if all_ok else 'no'}")
    lines.append("VALID" if valid else "INVALID")
    return CertificateReport(valid, lines, entries, reduction)


def _block_hodge(V: EquivariantVariety) -> dict[int, int]:
    from .motives import block_hodge

    out = Counter()
    for bt in V.motive.blocks:
        for p, v in block_hodge(bt.block).items():
            out[p] += v * bt.multiplicity
    return dict(out)


def certificate_from_json(entries: Sequence[dict]) -> tuple[CertificateEntry, ...]:
    """Inverse of ``CertificateEntry.to_json``; Hodge evidence keys are "p,q"."""
    out = []
    for e in entries:
        ev = []
        for k, v in e.get("evidence", {}).items():
            if isinstance(v, dict):
                v = {tuple(int(x) for x in pq.split(",")): int(h) for pq, h in v.items()}
            ev.append((k, v))
        out.append(CertificateEntry(e["kind"], tuple(e["checks"].items()), e["citation"], tuple(ev)))
    return tuple(out)
