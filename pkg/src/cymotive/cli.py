"""Command-line entry point: ``cymotive <command> --config build.json``.

Exit codes: 0 success, 1 computation or verification failure, 2 bad config.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from math import comb
from pathlib import Path

import jsonschema

from .characters import DEFAULT_ENUMERATION_CAP, GroupSizeError
from .motives import (
    HodgeDiamond,
    LefschetzSum,
    SupersingularError,
    block_hodge,
    block_hodge_by_character,
    canonical_json,
    diamond,
    lefschetz_motive,
    supersingular_collapse,
)
from .oracle import bruteforce_block_hodge, chen_ruan_diamond, compare_diamonds
from .pipeline import (
    ConstructionSpec,
    EquivariantVariety,
    PipelineError,
    build,
    kodaira_zero_h11,
    minimal_surface,
    star_certificate,
)

CONFIG_SCHEMA = {
    "type": "object",
    "properties": {
        "construction": {"enum": ["ch-z2", "ch-z3", "schreieder"]},
        "n": {"type": "integer", "minimum": 1},
        "genera": {"type": "array", "items": {"type": "integer", "minimum": 1}},
        "c": {"type": "integer", "minimum": 1},
        "a": {"type": "integer", "minimum": 0},
        "b": {"type": "integer", "minimum": 0},
        "mode": {"enum": ["complex", "supersingular"]},
        "caps": {
            "type": "object",
            "properties": {
                "group": {"type": "integer", "minimum": 1},
                "oracle_max_n": {"type": "integer", "minimum": 1},
            },
            "additionalProperties": False,
        },
    },
    "required": ["construction", "n"],
    "additionalProperties": False,
    "allOf": [
        {
            "if": {"properties": {"construction": {"const": "schreieder"}}},
            "then": {"required": ["a", "b", "c"], "not": {"required": ["genera"]}},
            "else": {"not": {"anyOf": [{"required": ["a"]}, {"required": ["b"]}, {"required": ["c"]}]}},
        },
        {
            "if": {"properties": {"construction": {"const": "ch-z3"}}},
            "then": {"not": {"required": ["genera"]}},
        },
    ],
}

REPORT_SCHEMA = {
    "type": "object",
    "properties": {
        "config": {"type": "object"},
        "diamond": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}},
        "lefschetz": {"type": "object", "additionalProperties": {"type": "integer"}},
        "transcendental": {"type": "object", "additionalProperties": {"type": "integer"}},
        "euler": {"type": "integer"},
    },
    "required": ["diamond", "lefschetz", "transcendental", "euler"],
}


class ConfigError(ValueError):
    pass


@dataclass
class Config:
    spec: ConstructionSpec
    raw: dict
    group_cap: int = DEFAULT_ENUMERATION_CAP
    oracle_max_n: int = 4


def parse_config(raw: dict, cap: int | None = None) -> Config:
    try:
        jsonschema.validate(raw, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise ConfigError(f"schema: {exc.message}") from exc
    try:
        spec = ConstructionSpec(
            construction=raw["construction"],
            n=raw["n"],
            genera=tuple(raw.get("genera", ())),
            c=raw.get("c", 1),
            a=raw.get("a"),
            b=raw.get("b"),
            mode=raw.get("mode", "complex"),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    caps = raw.get("caps", {})
    return Config(spec, raw, cap or caps.get("group", DEFAULT_ENUMERATION_CAP), caps.get("oracle_max_n", 4))


def load_config(path: str, cap: int | None = None) -> Config:
    try:
        raw = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    return parse_config(raw, cap)


def expected_transcendental(spec: ConstructionSpec) -> dict[int, int] | None:
    """Closed-form transcendental Hodge numbers, where one is known."""
    n = spec.n
    if spec.construction == "ch-z2":
        if set(spec.genera) != {1}:
            return None
        return {p: comb(n, p) for p in range(n + 1)}
    if spec.construction == "ch-z3":
        return {0: 1, n: 1}
    h = (3**spec.c - 1) // 2
    return {spec.a: h, spec.b: h}


def diamond_report(V: EquivariantVariety, raw: dict | None = None) -> dict:
    d = V.hodge_diamond()
    return {
        "config": raw or {},
        "diamond": d.to_json(),
        "lefschetz": {str(k): v for k, v in V.motive.lefschetz.terms},
        "transcendental": {str(p): v for p, v in block_hodge(V.block()).items()},
        "euler": d.euler(),
    }


def reload_report(text: str) -> tuple[dict, HodgeDiamond]:
    data = json.loads(text)
    jsonschema.validate(data, REPORT_SCHEMA)
    rows = data["diamond"]
    mapping = {(p, q): v for p, row in enumerate(rows) for q, v in enumerate(row)}
    return data, HodgeDiamond.from_mapping(len(rows) - 1, mapping)


@dataclass
class CheckResult:
    name: str
    ok: bool
    anchor: str
    detail: str = ""

    def line(self) -> str:
        tail = f" -- {self.detail}" if self.detail and not self.ok else ""
        return f"{'PASS' if self.ok else 'FAIL'}  {self.name}  [{self.anchor}]{tail}"


@dataclass
class VerifyReport:
    checks: list[CheckResult] = field(default_factory=list)

    def add(self, name, ok, anchor, detail=""):
        self.checks.append(CheckResult(name, bool(ok), anchor, detail))

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)


def verify(cfg: Config) -> VerifyReport:
    spec = cfg.spec
    rep = VerifyReport()
    V = build(spec)
    d = V.hodge_diamond()
    n = spec.n
    rep.add("single transcendental block", len(V.motive.blocks) == 1, "motive shape")
    rep.add("Hodge symmetry", d.is_symmetric(), "complex conjugation")
    rep.add("Serre duality", d.has_serre_duality(), "Serre duality")
    rep.add("h^{0,0} = h^{n,n} = 1", d[0, 0] == 1 and d[n, n] == 1, "connectedness")
    rep.add("motive realizes the diamond", diamond(V.motive) == d, "motive vs strata")
    th = block_hodge(V.block())
    want = expected_transcendental(spec)
    if want is not None:
        want = {p: v for p, v in want.items() if v}
        rep.add("transcendental numbers", th == want, "closed form", f"expected {want}, got {th}")
    try:
        brute = bruteforce_block_hodge(V.block(), cfg.group_cap)
        rep.add("block agrees with brute-force averaging", brute == th, "explicit character sums", f"{brute} vs {th}")
    except GroupSizeError as exc:
        rep.add("block agrees with brute-force averaging", False, "explicit character sums", str(exc))
    if spec.construction != "schreieder" and n <= cfg.oracle_max_n:
        try:
            cr = chen_ruan_diamond(V.factors, V.block().group(), cfg.group_cap)
            cmp = compare_diamonds("orbifold", cr, d)
            rep.add("diamond equals orbifold Hodge numbers", cmp.ok, "crepant resolution", cmp.render())
        except GroupSizeError as exc:
            rep.add("diamond equals orbifold Hodge numbers", False, "crepant resolution", str(exc))
    if spec.construction == "schreieder" and spec.c == 1 and n == 2:
        M = minimal_surface(spec)
        k3 = HodgeDiamond.from_mapping(2, {(0, 0): 1, (2, 0): 1, (0, 2): 1, (1, 1): 20, (2, 2): 1})
        rep.add("minimal model is a K3 surface", M.hodge_diamond() == k3, "K3 gate", str(M.hodge_diamond().rows()))
        rep.add("Noether formula on the minimal model", kodaira_zero_h11(M) == M.hodge_diamond()[1, 1], "Noether")
        cr = chen_ruan_diamond(V.factors, V.block().group(), cfg.group_cap)
        rep.add("minimal model equals orbifold Hodge numbers", cr == M.hodge_diamond(), "crepant companion")
    cert = star_certificate(V)
    rep.add("certificate", cert.valid, "closure of markings")
    again = build(spec)
    rep.add("deterministic rebuild", again.hodge_diamond() == d and again.motive == V.motive, "reproducibility")
    return rep


def collapse_table(V: EquivariantVariety) -> tuple[LefschetzSum, list[tuple[int, int]]]:
    s = supersingular_collapse(V.motive)
    return s, [(i, dict(s.terms).get(i, 0)) for i in range(V.dim + 1)]


# --- commands ------------------------------------------------------------------


def _emit(args, payload: dict) -> None:
    if args.json:
        Path(args.json).write_text(canonical_json(payload) + "\n")


def cmd_diamond(args, cfg: Config) -> int:
    V = build(cfg.spec)
    d = V.hodge_diamond()
    print(f"{V.label}  euler = {d.euler():,}")
    print(d.render())
    _emit(args, diamond_report(V, cfg.raw))
    return 0


def cmd_motive(args, cfg: Config) -> int:
    V = build(cfg.spec)
    blk = V.block()
    print(f"h({V.label}) = T + {V.motive.lefschetz}")
    print(f"T: {len(blk.factors)} curve factors, modulus {blk.modulus}, signs {list(blk.signs)}")
    per = block_hodge_by_character(blk)
    for t in sorted(per):
        row = ", ".join(f"h^{{{p},{V.dim - p}}}={v}" for p, v in sorted(per[t].items()) if v)
        if row:
            print(f"  character {t}: {row}")
    _emit(args, V.to_json())
    return 0


def cmd_verify(args, cfg: Config) -> int:
    t0 = time.perf_counter()
    rep = verify(cfg)
    for c in rep.checks:
        print(c.line())
    print(f"{'PASS' if rep.ok else 'FAIL'} ({time.perf_counter() - t0:.2f}s)")
    _emit(args, {"ok": rep.ok, "checks": [c.__dict__ for c in rep.checks]})
    return 0 if rep.ok else 1


def cmd_supersingular(args, cfg: Config) -> int:
    spec = cfg.spec
    if spec.construction == "schreieder" or spec.mode != "supersingular":
        raise ConfigError("supersingular needs a ch construction with mode 'supersingular'")
    if spec.n % 2:
        raise ConfigError(f"supersingular collapse needs even dimension, got n={spec.n}")
    V = build(spec)
    s, table = collapse_table(V)
    print(f"h({V.label}) = {s}")
    print("  i  dim CH^i = h^{2i}")
    for i, v in table:
        print(f"{i:3d}  {v:,}")
    complex_betti = sum(V.hodge_diamond().betti())
    print(f"rank {s.rank():,}; Betti total of the complex build {complex_betti:,}")
    _emit(args, {"lefschetz": {str(k): v for k, v in s.terms}, "chow_dims": {str(i): v for i, v in table}})
    collapsed = diamond(lefschetz_motive(s, V.dim))
    return 0 if s.rank() == complex_betti and collapsed.betti()[1::2] == [0] * V.dim else 1


def cmd_certificate(args, cfg: Config) -> int:
    V = build(cfg.spec)
    rep = star_certificate(V)
    print(rep.render())
    _emit(args, rep.to_json())
    return 0 if rep.valid else 1


COMMANDS = {
    "diamond": cmd_diamond,
    "motive": cmd_motive,
    "verify": cmd_verify,
    "supersingular": cmd_supersingular,
    "certificate": cmd_certificate,
}


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cymotive", description="Hodge numbers and motives of inductive Calabi-Yau builds")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--config", required=True, help="JSON construction config")
    p.add_argument("--json", help="write a machine-readable report here")
    p.add_argument("--cap", type=int, help="cap on enumerated group elements")
    return p


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, args.cap)
        return COMMANDS[args.command](args, cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (PipelineError, SupersingularError, GroupSizeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
