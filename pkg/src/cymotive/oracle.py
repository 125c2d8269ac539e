"""Independent ground truth: brute-force invariant counting and orbifold Hodge numbers.

Invariance is always decided by summing the character over every group
element and reading off the exact cyclotomic value (|G| or 0).  Nothing
here uses the closed-form annihilator, so agreement with the motive
algebra is evidence rather than a tautology.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .characters import DEFAULT_ENUMERATION_CAP, GroupSizeError, RelationSubgroup, enumerate_elements
from .curves import WHOLE_CURVE, CurveAction, fixed_points
from .cyclotomic import CyclotomicInteger
from .motives import HodgeDiamond, TranscendentalBlock, convolve

ASSIGNMENT_CAP = 10**5


class NonGorensteinError(ValueError):
    pass


class _Averager:
    """Explicit sum_{g in G} zeta^{<chi, g>}, cached per character vector."""

    def __init__(self, G: RelationSubgroup, cap: int):
        self.m = G.modulus
        self.order = G.order
        self.elements = np.array(enumerate_elements(G, cap), dtype=np.int64).reshape(-1, G.rank)
        self.cache: dict[tuple[int, ...], bool] = {}

    def invariant(self, chi: tuple[int, ...]) -> bool:
        hit = self.cache.get(chi)
        if hit is not None:
            return hit
        exps = (self.elements @ np.array(chi, dtype=np.int64)) % self.m
        counts = np.bincount(exps, minlength=self.m)
        value = CyclotomicInteger(self.m, counts.tolist()).to_int()
        if value not in (0, self.order):
            raise ArithmeticError(f"character sum {value} is neither 0 nor |G|")
        self.cache[chi] = value == self.order
        return self.cache[chi]


def _single_block(block: TranscendentalBlock, cap: int) -> dict[int, int]:
    G = block.group()
    size = 1
    for c in block.factors:
        size *= 2 * c.genus
    if size > ASSIGNMENT_CAP:
        raise GroupSizeError(f"{size} line assignments exceed cap {ASSIGNMENT_CAP}")
    avg = _Averager(G, cap)
    m = block.modulus
    lines = [
        [(1, w % m) for w in c.h10_weights] + [(0, (-w) % m) for w in c.h10_weights]
        for c in block.factors
    ]
    tally: Counter = Counter()
    for choice in itertools.product(*lines):
        chi = tuple(w for _, w in choice)
        if avg.invariant(chi):
            tally[sum(t for t, _ in choice)] += 1
    return {p: v for p, v in sorted(tally.items())}


def bruteforce_block_hodge(block: TranscendentalBlock, cap: int = DEFAULT_ENUMERATION_CAP) -> dict[int, int]:
    total: Counter = Counter({0: 1})
    for seg in block.segment_blocks():
        part = _single_block(seg, cap)
        nxt: Counter = Counter()
        for p, x in total.items():
            for q, y in part.items():
                nxt[p + q] += x * y
        total = nxt
    return {p: v for p, v in sorted(total.items()) if v}


@dataclass(frozen=True)
class OrbifoldSector:
    element: tuple[int, ...]
    fixed_set: tuple[object, ...]
    age: Fraction
    diamond: HodgeDiamond
    points: int


def _curve_lines(c: CurveAction) -> list[tuple[int, int, int]]:
    m = c.modulus
    out = [(0, 0, 0), (1, 1, 0)]
    out += [(1, 0, w % m) for w in c.h10_weights]
    out += [(0, 1, (-w) % m) for w in c.h10_weights]
    return out


def _invariant_diamond(curves, whole: Sequence[int], avg: _Averager, n: int) -> HodgeDiamond:
    k = len(whole)
    acc: Counter = Counter()
    per_factor = [Counter(_curve_lines(curves[j])) for j in whole]
    for combo in itertools.product(*[list(cnt.items()) for cnt in per_factor]):
        chi = [0] * n
        p = q = 0
        mult = 1
        for j, ((a, b, w), c) in zip(whole, combo):
            chi[j] = w
            p += a
            q += b
            mult *= c
        if avg.invariant(tuple(chi)):
            acc[(p, q)] += mult
    return HodgeDiamond.from_mapping(k, acc)


def orbifold_sectors(curves: Sequence[CurveAction], G: RelationSubgroup, cap: int = DEFAULT_ENUMERATION_CAP):
    n = len(curves)
    m = G.modulus
    avg = _Averager(G, cap)
    sectors = []
    for g in enumerate_elements(G, cap):
        whole = [j for j in range(n) if g[j] % m == 0]
        pts = [fixed_points(curves[j], g[j] % m) for j in range(n) if g[j] % m]
        inv = _invariant_diamond(curves, whole, avg, n)
        ages: Counter = Counter()
        for choice in itertools.product(*pts):
            ages[sum(Fraction(w % m, m) for _, w in choice)] += 1
        for age, count in sorted(ages.items()):
            fixed = tuple(WHOLE_CURVE if g[j] % m == 0 else "points" for j in range(n))
            sectors.append(OrbifoldSector(tuple(g), fixed, age, inv, count))
    return sectors


def chen_ruan_diamond(curves: Sequence[CurveAction], G: RelationSubgroup, cap: int = DEFAULT_ENUMERATION_CAP) -> HodgeDiamond:
    """Orbifold Hodge numbers of (C_1 x ... x C_n)/G.

    Sector g contributes the G-invariant Hodge numbers of its fixed set,
    shifted by (age, age).  Fixed points of the built-in curves are fixed by
    the whole cyclic group, so point factors only contribute a count.
    """
    n = len(curves)
    acc: Counter = Counter()
    for sec in orbifold_sectors(curves, G, cap):
        if sec.age.denominator != 1:
            raise NonGorensteinError(f"non-Gorenstein sector at g={sec.element} (age {sec.age})")
        a = int(sec.age)
        d = sec.diamond
        for p in range(d.dim + 1):
            for q in range(d.dim + 1):
                if d[p, q]:
                    acc[(p + a, q + a)] += sec.points * d[p, q]
    return HodgeDiamond.from_mapping(n, acc)


def identity_sector(curves: Sequence[CurveAction], G: RelationSubgroup, cap: int = DEFAULT_ENUMERATION_CAP) -> HodgeDiamond:
    avg = _Averager(G, cap)
    return _invariant_diamond(curves, list(range(len(curves))), avg, len(curves))


@dataclass
class ComparisonReport:
    label: str
    expected: HodgeDiamond
    actual: HodgeDiamond
    mismatches: list[tuple[int, int, int, int]]

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def render(self) -> str:
        if self.ok:
            return f"{self.label}: match"
        p, q, e, a = self.mismatches[0]
        more = f" (+{len(self.mismatches) - 1} more)" if len(self.mismatches) > 1 else ""
        return f"{self.label}: first divergence at h^{{{p},{q}}}: expected {e}, got {a}{more}"


def compare_diamonds(label: str, expected: HodgeDiamond, actual: HodgeDiamond) -> ComparisonReport:
    n = max(expected.dim, actual.dim)
    bad = [
        (p, q, expected[p, q], actual[p, q])
        for p in range(n + 1)
        for q in range(n + 1)
        if expected[p, q] != actual[p, q]
    ]
    if expected.dim != actual.dim:
        bad.insert(0, (-1, -1, expected.dim, actual.dim))
    return ComparisonReport(label, expected, actual, bad)


def convolve_diamonds(ds: Sequence[HodgeDiamond]) -> HodgeDiamond:
    out = HodgeDiamond.from_mapping(0, {(0, 0): 1})
    for d in ds:
        out = convolve(out, d)
    return out
