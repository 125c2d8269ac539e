"""Formal motives: Lefschetz sums plus transcendental tensor blocks.

A transcendental block stands for the part of h^1(C_1) x ... x h^1(C_n)
that is invariant under a relation subgroup.  Blocks stay unexpanded; their
Hodge numbers come from a per-character polynomial product rather than from
enumerating the 2^n tensor lines.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Mapping, Sequence

from .characters import RelationSubgroup, make_relation_subgroup
from .curves import CurveAction, h1_realization
from .cyclotomic import CyclotomicInteger


class MotiveError(ValueError):
    pass


@dataclass(frozen=True)
class LefschetzSum:
    """Finite formal sum of Tate twists: {k: multiplicity of L^k}."""

    terms: tuple[tuple[int, int], ...] = ()

    @classmethod
    def of(cls, mapping: Mapping[int, int] | Iterable[tuple[int, int]] = ()) -> LefschetzSum:
        acc: Counter = Counter()
        items = mapping.items() if isinstance(mapping, Mapping) else mapping
        for k, mult in items:
            if k < 0 or mult < 0:
                raise MotiveError(f"invalid Lefschetz term L^{k} x {mult}")
            acc[int(k)] += int(mult)
        return cls(tuple(sorted((k, v) for k, v in acc.items() if v)))

    def as_dict(self) -> dict[int, int]:
        return dict(self.terms)

    def __add__(self, other: LefschetzSum) -> LefschetzSum:
        return LefschetzSum.of(list(self.terms) + list(other.terms))

    def __mul__(self, other: LefschetzSum) -> LefschetzSum:
        acc: Counter = Counter()
        for a, x in self.terms:
            for b, y in other.terms:
                acc[a + b] += x * y
        return LefschetzSum.of(acc)

    def scaled(self, c: int) -> LefschetzSum:
        return LefschetzSum.of({k: c * v for k, v in self.terms})

    def twisted(self, k: int) -> LefschetzSum:
        return LefschetzSum.of({a + k: v for a, v in self.terms})

    def rank(self) -> int:
        return sum(v for _, v in self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k, v in self.terms:
            base = "1" if k == 0 else ("L" if k == 1 else f"L^{k}")
            parts.append(base if v == 1 else (f"{v}" if k == 0 else f"{v}*{base}"))
        return " + ".join(parts)


ONE = LefschetzSum.of({0: 1})
L = LefschetzSum.of({1: 1})


@dataclass(frozen=True)
class TranscendentalBlock:
    """Invariant part of the tensor product of the factors' h^1.

    ``segments`` splits the factor list into consecutive runs; each run is
    averaged over its own relation subgroup (products of blocks keep their
    groups separate).
    """

    factors: tuple[CurveAction, ...]
    signs: tuple[int, ...]
    modulus: int
    segments: tuple[int, ...] = ()

    def __post_init__(self):
        if not self.factors:
            raise MotiveError("a block needs at least one factor")
        if len(self.signs) != len(self.factors):
            raise MotiveError("one sign per factor is required")
        if any(c.modulus != self.modulus for c in self.factors):
            raise MotiveError("all factors must share the block modulus")
        if not self.segments:
            object.__setattr__(self, "segments", (len(self.factors),))
        if sum(self.segments) != len(self.factors) or min(self.segments) < 1:
            raise MotiveError(f"bad segment lengths {self.segments}")

    @property
    def n(self) -> int:
        return len(self.factors)

    def segment_blocks(self) -> list[TranscendentalBlock]:
        out, i = [], 0
        for length in self.segments:
            out.append(
                TranscendentalBlock(self.factors[i : i + length], self.signs[i : i + length], self.modulus)
            )
            i += length
        return out

    def group(self) -> RelationSubgroup:
        if len(self.segments) != 1:
            raise MotiveError("a product block has no single relation subgroup")
        return make_relation_subgroup(self.modulus, self.signs)

    def describe(self) -> dict:
        return {
            "factors": [c.describe() for c in self.factors],
            "signs": list(self.signs),
            "modulus": self.modulus,
            "segments": list(self.segments),
        }


@dataclass(frozen=True)
class BlockTerm:
    block: TranscendentalBlock
    twist: int = 0
    multiplicity: int = 1


@dataclass(frozen=True)
class MotiveExpr:
    lefschetz: LefschetzSum
    blocks: tuple[BlockTerm, ...] = ()
    ambient_dim: int = 0


@dataclass(frozen=True)
class HodgeDiamond:
    dim: int
    entries: tuple[tuple[int, ...], ...]

    @classmethod
    def from_mapping(cls, dim: int, mapping: Mapping[tuple[int, int], int]) -> HodgeDiamond:
        rows = [[0] * (dim + 1) for _ in range(dim + 1)]
        for (p, q), v in mapping.items():
            if v == 0:
                continue
            if not (0 <= p <= dim and 0 <= q <= dim):
                raise MotiveError(f"entry ({p},{q}) outside a {dim}-dimensional diamond")
            rows[p][q] += v
        for row in rows:
            if min(row, default=0) < 0:
                raise MotiveError("negative Hodge number")
        return cls(dim, tuple(tuple(r) for r in rows))

    def __getitem__(self, pq: tuple[int, int]) -> int:
        p, q = pq
        if 0 <= p <= self.dim and 0 <= q <= self.dim:
            return self.entries[p][q]
        return 0

    def as_matrix(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def is_symmetric(self) -> bool:
        return all(self[p, q] == self[q, p] for p in range(self.dim + 1) for q in range(self.dim + 1))

    def has_serre_duality(self) -> bool:
        n = self.dim
        return all(self[p, q] == self[n - p, n - q] for p in range(n + 1) for q in range(n + 1))

    def euler(self) -> int:
        return sum((-1) ** (p + q) * self[p, q] for p in range(self.dim + 1) for q in range(self.dim + 1))

    def betti(self) -> list[int]:
        b = [0] * (2 * self.dim + 1)
        for p in range(self.dim + 1):
            for q in range(self.dim + 1):
                b[p + q] += self[p, q]
        return b

    def total(self) -> int:
        return sum(self.betti())

    def rows(self) -> list[list[int]]:
        """Rows of the diamond by total degree, h^{d,0} first."""
        out = []
        for d in range(2 * self.dim + 1):
            out.append([self[p, d - p] for p in range(min(d, self.dim), max(0, d - self.dim) - 1, -1)])
        return out

    def render(self) -> str:
        rows = self.rows()
        cells = [[f"{v:,}" for v in row] for row in rows]
        width = max(len(c) for row in cells for c in row)
        lines = [" ".join(c.center(width) for c in row) for row in cells]
        full = max(len(s) for s in lines)
        return "\n".join(s.center(full).rstrip() for s in lines)

    def to_json(self) -> list[list[int]]:
        return self.as_matrix()


def convolve(d1: HodgeDiamond, d2: HodgeDiamond) -> HodgeDiamond:
    acc: Counter = Counter()
    for p1 in range(d1.dim + 1):
        for q1 in range(d1.dim + 1):
            a = d1[p1, q1]
            if a:
                for p2 in range(d2.dim + 1):
                    for q2 in range(d2.dim + 1):
                        if d2[p2, q2]:
                            acc[(p1 + p2, q1 + q2)] += a * d2[p2, q2]
    return HodgeDiamond.from_mapping(d1.dim + d2.dim, acc)


def _weight_counts(curve: CurveAction) -> Counter:
    return Counter(w % curve.modulus for w in curve.h10_weights)


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def block_hodge_by_character(block: TranscendentalBlock) -> dict[int, dict[int, int]]:
    """For a single-segment block: residual character t -> {p: h^{p, n-p}}.

    The summand for t counts tensor lines whose character is
    (eps_1 t, ..., eps_n t); factor j contributes A_j(t) lines of type
    (1,0) and B_j(t) lines of type (0,1).
    """
    if len(block.segments) != 1:
        raise MotiveError("per-character split needs a single-segment block")
    m = block.modulus
    counts = [_weight_counts(c) for c in block.factors]
    out: dict[int, dict[int, int]] = {}
    for t in range(m):
        poly = [1]
        for cnt, s in zip(counts, block.signs):
            a = cnt[(s * t) % m]
            b = cnt[(-s * t) % m]
            poly = _poly_mul(poly, [b, a])
            if not any(poly):
                break
        if any(poly):
            out[t] = {p: v for p, v in enumerate(poly) if v}
    return out


def block_hodge(block: TranscendentalBlock) -> dict[int, int]:
    """p -> h^{p, n-p} of the block."""
    total: Counter = Counter({0: 1})
    for seg in block.segment_blocks():
        part: Counter = Counter()
        for per_t in block_hodge_by_character(seg).values():
            part.update(per_t)
        nxt: Counter = Counter()
        for p, x in total.items():
            for r, y in part.items():
                nxt[p + r] += x * y
        total = nxt
    return {p: v for p, v in sorted(total.items()) if v}


def block_rank(block: TranscendentalBlock) -> int:
    return sum(block_hodge(block).values())


def kuenneth_quotient_motive(curves: Sequence[CurveAction], G: RelationSubgroup) -> MotiveExpr:
    """Invariant part of h(C_1 x ... x C_n) under a relation subgroup.

    Each h(C_j) = 1 + h^1 + L; summands mixing h^1 factors with h^0/h^2
    factors carry a character that is nontrivial on G, so only the pure
    {h^0, h^2} words and the full h^1 word survive.
    """
    if len(curves) != G.rank:
        raise MotiveError(f"{len(curves)} curves for a rank-{G.rank} group")
    if any(c.modulus != G.modulus for c in curves):
        raise MotiveError("curve modulus does not match group modulus")
    n = len(curves)
    lef = LefschetzSum.of({k: comb(n, k) for k in range(n + 1)})
    block = TranscendentalBlock(tuple(curves), G.signs, G.modulus)
    blocks = (BlockTerm(block),) if all(c.genus for c in curves) else ()
    return MotiveExpr(lef, blocks, n)


def tensor(m1: MotiveExpr, m2: MotiveExpr) -> MotiveExpr:
    lef = m1.lefschetz * m2.lefschetz
    blocks = []
    for bt in m1.blocks:
        for k, v in m2.lefschetz.terms:
            blocks.append(BlockTerm(bt.block, bt.twist + k, bt.multiplicity * v))
    for bt in m2.blocks:
        for k, v in m1.lefschetz.terms:
            blocks.append(BlockTerm(bt.block, bt.twist + k, bt.multiplicity * v))
    for b1 in m1.blocks:
        for b2 in m2.blocks:
            if b1.block.modulus != b2.block.modulus:
                raise MotiveError(
                    f"cannot tensor blocks of modulus {b1.block.modulus} and {b2.block.modulus}"
                )
            joint = TranscendentalBlock(
                b1.block.factors + b2.block.factors,
                b1.block.signs + b2.block.signs,
                b1.block.modulus,
                b1.block.segments + b2.block.segments,
            )
            blocks.append(BlockTerm(joint, b1.twist + b2.twist, b1.multiplicity * b2.multiplicity))
    return MotiveExpr(lef, tuple(blocks), m1.ambient_dim + m2.ambient_dim)


def twist(m: MotiveExpr, k: int) -> MotiveExpr:
    return MotiveExpr(
        m.lefschetz.twisted(k),
        tuple(BlockTerm(b.block, b.twist + k, b.multiplicity) for b in m.blocks),
        m.ambient_dim,
    )


def direct_sum(m1: MotiveExpr, m2: MotiveExpr) -> MotiveExpr:
    return MotiveExpr(
        m1.lefschetz + m2.lefschetz, m1.blocks + m2.blocks, max(m1.ambient_dim, m2.ambient_dim)
    )


def diamond(m: MotiveExpr) -> HodgeDiamond:
    acc: Counter = Counter()
    for k, v in m.lefschetz.terms:
        acc[(k, k)] += v
    for bt in m.blocks:
        n = bt.block.n
        for p, v in block_hodge(bt.block).items():
            acc[(p + bt.twist, n - p + bt.twist)] += v * bt.multiplicity
    return HodgeDiamond.from_mapping(m.ambient_dim, acc)


class SupersingularError(MotiveError):
    pass


def supersingular_collapse(m: MotiveExpr) -> LefschetzSum:
    """Rewrite every block over supersingular elliptic factors as Lefschetz motives.

    h^1(E) x h^1(E) = 4 L, so the full tensor of 2r factors is 4^r L^r and
    any invariant sub-block of rank N becomes N L^r.
    """
    out = m.lefschetz
    for bt in m.blocks:
        blk = bt.block
        if any(c.genus != 1 for c in blk.factors):
            raise SupersingularError("supersingular collapse needs elliptic factors")
        if blk.n % 2:
            raise SupersingularError("odd-dimensional supersingular collapse unsupported")
        r = blk.n // 2
        out = out + LefschetzSum.of({r + bt.twist: block_rank(blk) * bt.multiplicity})
    return out


def lefschetz_motive(s: LefschetzSum, dim: int) -> MotiveExpr:
    return MotiveExpr(s, (), dim)


# --- realization identities -------------------------------------------------


@dataclass
class IdentityReport:
    passed: bool
    failures: list[str] = field(default_factory=list)
    checked: list[str] = field(default_factory=list)


def _diag(m: int, exps: Sequence[int | None]) -> list[CyclotomicInteger]:
    zero = CyclotomicInteger.from_int(m, 0)
    return [zero if e is None else CyclotomicInteger.zeta_power(m, e) for e in exps]


def realization_identities(curve: CurveAction) -> IdentityReport:
    """Check projector and group identities on H^0 + H^1 + H^2 of a curve.

    All operators are diagonal in the character basis, so composition is
    entrywise multiplication of cyclotomic integers.  The cup product is
    a 3-tensor mu[k][i][j] on basis indices.
    """
    rep = IdentityReport(True)
    if not curve.quotient_rational:
        rep.passed = False
        rep.failures.append("quotient_rational is false")
        return rep
    m, g = curve.modulus, curve.genus
    h1 = h1_realization(curve)
    degrees = [0] + [1] * (2 * g) + [2]
    weights = [0] + [w for _, w in h1] + [0]
    size = len(degrees)
    one, zero = CyclotomicInteger.from_int(m, 1), CyclotomicInteger.from_int(m, 0)

    def proj(i):
        return [one if d == i else zero for d in degrees]

    def fail(name):
        rep.passed = False
        rep.failures.append(name)

    projs = {i: proj(i) for i in range(3)}
    for i in range(3):
        for j in range(3):
            prod = [a * b for a, b in zip(projs[i], projs[j])]
            want = projs[i] if i == j else [zero] * size
            if prod != want:
                fail(f"projector {'idempotence' if i == j else 'orthogonality'} pi{i} pi{j}")
    rep.checked.append("projectors idempotent and orthogonal")
    if [sum(x) for x in zip(*projs.values())] != [one] * size:
        fail("projectors do not sum to the identity")

    rho = {h: _diag(m, [h * w for w in weights]) for h in range(m)}
    avg = [zero] * size
    for h in range(m):
        avg = [a + r * p for a, r, p in zip(avg, rho[h], projs[1])]
    if any(not x.is_zero() for x in avg):
        fail("group average does not kill pi1")
    rep.checked.append("sum over the group of rho(h) pi1 = 0")
    for h in range(m):
        for j in (0, 2):
            if [r * p for r, p in zip(rho[h], projs[j])] != projs[j]:
                fail(f"rho({h}) pi{j} != pi{j}")
    rep.checked.append("rho(h) pi0 = pi0 and rho(h) pi2 = pi2")

    # cup product: e0 is the unit, omega_a . bar(omega_a) = top class
    mu = [[[0] * size for _ in range(size)] for _ in range(size)]
    top = size - 1
    for i in range(size):
        mu[i][0][i] = mu[i][i][0] = 1
    for a in range(g):
        mu[top][1 + a][1 + g + a] = 1
        mu[top][1 + g + a][1 + a] = -1
    for k in range(size):
        for i in range(size):
            for j in range(size):
                if mu[k][i][j] and degrees[k] != degrees[i] + degrees[j]:
                    fail(f"cup product leaves degree: ({i},{j}) -> {k}")
                if mu[k][i][j] and (weights[i] + weights[j] - weights[k]) % m:
                    fail(f"cup product not equivariant at ({i},{j}) -> {k}")
    rep.checked.append("pi^k mu (pi^i x pi^j) = 0 unless k = i + j")
    rep.checked.append("cup product equivariant")
    return rep


# --- serialization ------------------------------------------------------------


def motive_to_json(m: MotiveExpr) -> dict:
    return {
        "ambient_dim": m.ambient_dim,
        "lefschetz": {str(k): v for k, v in m.lefschetz.terms},
        "blocks": [
            {
                **bt.block.describe(),
                "twist": bt.twist,
                "multiplicity": bt.multiplicity,
                "hodge": {str(p): v for p, v in block_hodge(bt.block).items()},
            }
            for bt in m.blocks
        ],
    }


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))
