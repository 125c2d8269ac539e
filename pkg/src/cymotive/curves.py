"""Curves with a cyclic automorphism, stored as validated data tables.

A CurveAction records the eigenvalue exponents of the generator on
holomorphic 1-forms (f^* omega = zeta^w omega) and, for every nonzero
power k of the generator, its fixed points together with the exponent of
the eigenvalue of k on the tangent line there.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Mapping

from .cyclotomic import CyclotomicInteger, NonIntegralError

WHOLE_CURVE = "whole-curve"


class CurveDataError(ValueError):
    """Curve tables are inconsistent with the fixed-point formulas."""


@dataclass(frozen=True)
class CurveAction:
    genus: int
    modulus: int
    h10_weights: tuple[int, ...]
    fixed_point_table: Mapping[int, tuple[tuple[str, int], ...]] = field(hash=False, compare=False)
    quotient_rational: bool = True
    fixed_points_rationally_equivalent: bool = True
    name: str = "curve"
    params: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        if len(self.h10_weights) != self.genus:
            raise CurveDataError(
                f"{self.name}: {len(self.h10_weights)} weights for genus {self.genus}"
            )
        if self.quotient_rational and any(w % self.modulus == 0 for w in self.h10_weights):
            raise CurveDataError(f"{self.name}: invariant 1-form but quotient marked rational")

    @property
    def key(self) -> tuple:
        """Hashable identity used for equality of curve data."""
        table = tuple(sorted((k, tuple(v)) for k, v in self.fixed_point_table.items()))
        return (self.genus, self.modulus, tuple(sorted(self.h10_weights)), table)

    def __eq__(self, other):
        return isinstance(other, CurveAction) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def describe(self) -> dict:
        return {"kind": self.name, **dict(self.params)}


@dataclass(frozen=True)
class FixedPointClassFlag:
    rationally_equivalent: bool
    citation: str


def _hyperelliptic(g: int) -> CurveAction:
    if g < 1:
        raise ValueError("hyperelliptic_involution needs genus >= 1")
    pts = tuple((f"w{i}", 1) for i in range(2 * g + 2))
    return CurveAction(
        genus=g,
        modulus=2,
        h10_weights=(1,) * g,
        fixed_point_table={1: pts},
        name="hyperelliptic_involution",
        params=(("g", g),),
    )


def _mu_curve(g: int) -> CurveAction:
    # y^2 = x^(2g+1) + D with (x, y) -> (zeta x, y)
    if g < 1:
        raise ValueError("mu_curve needs genus >= 1")
    m = 2 * g + 1
    table = {}
    for k in range(1, m):
        # x is a local parameter at x = 0; t = y / x^(g+1) at infinity,
        # which scales by zeta^(-(g+1) k) = zeta^(g k)
        table[k] = (("0+", k % m), ("0-", k % m), ("inf", (g * k) % m))
    return CurveAction(
        genus=g,
        modulus=m,
        h10_weights=tuple(range(1, g + 1)),
        fixed_point_table=table,
        name="mu_curve",
        params=(("g", g),),
    )


def builtin_curve(kind: str, g: int | None = None, m: int | None = None) -> CurveAction:
    """Built-in curves: ``hyperelliptic_involution`` (m=2) or ``mu_curve`` (m=2g+1)."""
    if kind == "hyperelliptic_involution":
        if m not in (None, 2):
            raise ValueError("the hyperelliptic involution has order 2")
        return validated(_hyperelliptic(1 if g is None else g))
    if kind == "mu_curve":
        if m is not None:
            if m % 2 == 0:
                raise ValueError(f"mu_curve needs odd modulus, got {m}")
            if g is not None and m != 2 * g + 1:
                raise ValueError(f"mu_curve needs m = 2g+1, got g={g}, m={m}")
            g = (m - 1) // 2
        if g is None:
            g = 1
        return validated(_mu_curve(g))
    raise ValueError(f"unknown curve kind {kind!r}")


def power(curve: CurveAction, u: int) -> CurveAction:
    """The same curve with generator replaced by its u-th power (u a unit)."""
    m = curve.modulus
    if gcd(u, m) != 1:
        raise ValueError(f"{u} is not a unit mod {m}")
    u %= m
    if u == 1:
        return curve
    table = {}
    for k in range(1, m):
        src = _table_entry(curve, (k * u) % m)
        table[k] = tuple(src)
    return CurveAction(
        genus=curve.genus,
        modulus=m,
        h10_weights=tuple((w * u) % m for w in curve.h10_weights),
        fixed_point_table=table,
        quotient_rational=curve.quotient_rational,
        fixed_points_rationally_equivalent=curve.fixed_points_rationally_equivalent,
        name=curve.name,
        params=curve.params + (("power", u),),
    )


def _table_entry(curve: CurveAction, k: int) -> tuple[tuple[str, int], ...]:
    m = curve.modulus
    k %= m
    if k in curve.fixed_point_table:
        return tuple(curve.fixed_point_table[k])
    # tables may list only the generator; powers of the generator fix the same points
    base = curve.fixed_point_table.get(1)
    if base is None:
        raise CurveDataError(f"{curve.name}: no fixed-point data for k={k}")
    return tuple((lab, (w * k) % m) for lab, w in base)


def fixed_points(curve: CurveAction, k: int):
    m = curve.modulus
    if not 0 <= k < m:
        raise ValueError(f"k must lie in [0, {m}), got {k}")
    if k == 0:
        return WHOLE_CURVE
    return list(_table_entry(curve, k))


def h1_trace(curve: CurveAction, k: int) -> CyclotomicInteger:
    m = curve.modulus
    return CyclotomicInteger.from_exponents(
        m, [k * w for w in curve.h10_weights] + [-k * w for w in curve.h10_weights]
    )


def lefschetz_check(curve: CurveAction, k: int) -> bool:
    if k % curve.modulus == 0:
        raise ValueError("lefschetz_check needs k != 0")
    trace = h1_trace(curve, k % curve.modulus)
    if not trace.is_rational_integer():
        raise NonIntegralError(f"non-integral trace for {curve.name} at k={k}")
    return len(fixed_points(curve, k % curve.modulus)) == 2 - trace.to_int()


def holomorphic_lefschetz_check(curve: CurveAction, k: int) -> bool:
    """Holomorphic fixed-point formula, cleared of denominators.

    1 - sum_w zeta^(-k w) = sum_p 1/(1 - zeta^(t_p)), multiplied through by
    prod_p (1 - zeta^(t_p)) so that both sides live in Z[zeta].
    """
    m = curve.modulus
    k %= m
    pts = fixed_points(curve, k)
    one = CyclotomicInteger.from_int(m, 1)
    factors = []
    for _, t in pts:
        if t % m == 0:
            return False
        factors.append(one - CyclotomicInteger.zeta_power(m, t))
    lhs = one - CyclotomicInteger.from_exponents(m, [-k * w for w in curve.h10_weights])
    for f in factors:
        lhs = lhs * f
    rhs = CyclotomicInteger.from_int(m, 0)
    for i in range(len(factors)):
        term = one
        for j, f in enumerate(factors):
            if j != i:
                term = term * f
        rhs = rhs + term
    return lhs == rhs


def h1_realization(curve: CurveAction) -> list[tuple[tuple[int, int], int]]:
    m = curve.modulus
    lines = [((1, 0), w % m) for w in curve.h10_weights]
    lines += [((0, 1), (-w) % m) for w in curve.h10_weights]
    return lines


def validated(curve: CurveAction) -> CurveAction:
    """Run both fixed-point formulas for every nonzero k; raise on failure."""
    for k in range(1, curve.modulus):
        if not lefschetz_check(curve, k):
            raise CurveDataError(f"{curve.name}: fixed-point count fails at k={k}")
        if not holomorphic_lefschetz_check(curve, k):
            raise CurveDataError(f"{curve.name}: tangent weights fail at k={k}")
    return curve


def fixed_point_class_flag(curve: CurveAction) -> FixedPointClassFlag:
    cite = {
        "hyperelliptic_involution": "Weierstrass points are pairwise rationally equivalent",
        "mu_curve": "the fixed points define one rational-equivalence class",
    }.get(curve.name, "asserted by curve data")
    return FixedPointClassFlag(curve.fixed_points_rationally_equivalent, cite)
