"""Equivariant stratified spaces under blow-ups, quotients and contractions.

A space X of dimension n carries an action of A = (Z_m)^r.  It is cut into
locally closed smooth strata S, each with

* a stabilizer Stab(S) <= A, constant along S,
* the normal representation of Stab(S): a list of character lines, each
  tagged by the divisor whose local equation is that coordinate,
* an equivariant E-polynomial: A-character -> {(p, q): coefficient}.

Blow-ups along fixed loci are computed in the local linear model
S x (normal space): over a center stratum the fibre P(N) is split by the
isotypic support of a point, which keeps stabilizers constant.  A quotient
by a subgroup Q keeps the Q-invariant part of every E-polynomial and turns
a reflection coordinate z into z^|K|.  Everything is exact.
"""

from __future__ import annotations

import itertools
from collections import Counter, defaultdict
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Iterable, Sequence

from .curves import fixed_points

Elem = tuple[int, ...]
Char = tuple[int, ...]
HodgeKey = tuple[int, int]


class StrataError(RuntimeError):
    """A geometric precondition of the local calculus is violated."""


# --- small abelian group helpers ----------------------------------------------


def pair(chi: Char, g: Elem, m: int) -> int:
    return sum(c * x for c, x in zip(chi, g)) % m


@lru_cache(maxsize=None)
def all_elements(m: int, r: int) -> tuple[Elem, ...]:
    return tuple(itertools.product(range(m), repeat=r))


def generated(m: int, r: int, gens: Iterable[Elem]) -> frozenset[Elem]:
    return _generated(m, r, frozenset(tuple(x % m for x in g) for g in gens))


@lru_cache(maxsize=None)
def subgroup_sum(H1: frozenset[Elem], H2: frozenset[Elem], m: int) -> frozenset[Elem]:
    return frozenset(tuple((x + y) % m for x, y in zip(a, b)) for a in H1 for b in H2)


@lru_cache(maxsize=None)
def _generated(m: int, r: int, gens: frozenset[Elem]) -> frozenset[Elem]:
    group = {(0,) * r}
    frontier = list(group)
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = tuple((x + y) % m for x, y in zip(a, g))
                if b not in group:
                    group.add(b)
                    nxt.append(b)
        frontier = nxt
    return frozenset(group)


def _restriction(chi: Char, H: tuple[Elem, ...], m: int) -> tuple[int, ...]:
    return tuple(pair(chi, h, m) for h in H)


@lru_cache(maxsize=None)
def _canon_table(m: int, r: int, H: frozenset[Elem]) -> dict:
    Hs = tuple(sorted(H))
    table = {}
    for chi in all_elements(m, r):
        table.setdefault(_restriction(chi, Hs, m), chi)
    return table


@lru_cache(maxsize=None)
def canonical(chi: Char, H: frozenset[Elem], m: int) -> Char:
    """Smallest A-character with the same restriction to H."""
    r = len(chi)
    Hs = tuple(sorted(H))
    return _canon_table(m, r, H)[_restriction(tuple(x % m for x in chi), Hs, m)]


def trivial_on(chi: Char, H: Iterable[Elem], m: int) -> bool:
    if isinstance(H, frozenset):
        return _trivial_on(chi, H, m)
    return all(pair(chi, h, m) == 0 for h in H)


@lru_cache(maxsize=None)
def _trivial_on(chi: Char, H: frozenset[Elem], m: int) -> bool:
    return all(pair(chi, h, m) == 0 for h in H)


@lru_cache(maxsize=None)
def equalizer(H: frozenset[Elem], chars: tuple[Char, ...], m: int) -> frozenset[Elem]:
    """Elements of H on which all the given characters agree."""
    return frozenset(h for h in H if len({pair(chi, h, m) for chi in chars}) == 1)


def char_order_on(chi: Char, H: Iterable[Elem], m: int) -> int:
    """Order of the restriction of chi to H (H a subgroup)."""
    return len({pair(chi, h, m) for h in H})


@lru_cache(maxsize=None)
def _extend(chi: Char, stab: frozenset[Elem], Q: frozenset[Elem], m: int) -> Char:
    for psi in all_elements(m, len(chi)):
        if all(pair(psi, q, m) == 0 for q in Q) and all(
            pair(psi, s, m) == pair(chi, s, m) for s in stab
        ):
            return psi
    raise StrataError(f"character {chi} does not extend trivially across the quotient")


# --- equivariant E-polynomials ------------------------------------------------


@dataclass(frozen=True)
class EPoly:
    """Equivariant E-polynomial: sum of c * [chi] * u^p v^q."""

    terms: tuple[tuple[Char, int, int, int], ...] = ()

    @classmethod
    def of(cls, items: Iterable[tuple[Char, int, int, int]]) -> EPoly:
        acc: Counter = Counter()
        for chi, p, q, c in items:
            acc[(tuple(chi), p, q)] += c
        return cls(tuple(sorted((k[0], k[1], k[2], v) for k, v in acc.items() if v)))

    def __add__(self, other: EPoly) -> EPoly:
        return EPoly.of(self.terms + other.terms)

    def __neg__(self) -> EPoly:
        return EPoly(tuple((c, p, q, -v) for c, p, q, v in self.terms))

    def __sub__(self, other: EPoly) -> EPoly:
        return self + (-other)

    def times_lefschetz(self, poly: Sequence[int]) -> EPoly:
        """Multiply by sum_k poly[k] (uv)^k with trivial character."""
        return EPoly.of(
            (chi, p + k, q + k, v * a) for chi, p, q, v in self.terms for k, a in enumerate(poly) if a
        )

    def product(self, other: EPoly, m: int) -> EPoly:
        return EPoly.of(
            (tuple((a + b) % m for a, b in zip(c1, c2)), p1 + p2, q1 + q2, v1 * v2)
            for c1, p1, q1, v1 in self.terms
            for c2, p2, q2, v2 in other.terms
        )

    def map_chars(self, f) -> EPoly:
        return EPoly.of((f(c), p, q, v) for c, p, q, v in self.terms)

    def invariant(self, Q: Iterable[Elem], m: int) -> EPoly:
        Q = tuple(Q)
        return EPoly(tuple(t for t in self.terms if trivial_on(t[0], Q, m)))

    def total(self) -> dict[HodgeKey, int]:
        acc: Counter = Counter()
        for _, p, q, v in self.terms:
            acc[(p, q)] += v
        return {k: v for k, v in acc.items() if v}

    def by_char(self) -> dict[Char, dict[HodgeKey, int]]:
        out: dict = defaultdict(Counter)
        for c, p, q, v in self.terms:
            out[c][(p, q)] += v
        return {c: {k: v for k, v in d.items() if v} for c, d in out.items()}

    def divide_by_one_plus_l(self) -> EPoly:
        """Exact division by (1 + uv); raises if not divisible."""
        rem = Counter({(c, p, q): v for c, p, q, v in self.terms})
        out: Counter = Counter()
        while rem:
            key = min(rem, key=lambda k: (k[1] + k[2], k))
            c, p, q = key
            v = rem[key]
            out[key] += v
            for kk, vv in ((key, v), ((c, p + 1, q + 1), v)):
                rem[kk] -= vv
                if rem[kk] == 0:
                    del rem[kk]
            if len(out) > 10**6:
                raise StrataError("E-polynomial not divisible by 1 + L")
        quotient = EPoly.of((c, p, q, v) for (c, p, q), v in out.items())
        if quotient.times_lefschetz([1, 1]) != self:
            raise StrataError("E-polynomial not divisible by 1 + L")
        return quotient


def lefschetz_poly_pow(base: Sequence[int], k: int) -> list[int]:
    out = [1]
    for _ in range(k):
        out = _pmul(out, base)
    return out


def _pmul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


# --- strata -------------------------------------------------------------------


@dataclass(frozen=True)
class NormalLine:
    char: Char
    tag: str


@dataclass(frozen=True)
class Stratum:
    uid: int
    dim: int
    stab: frozenset[Elem]
    normal: tuple[NormalLine, ...]
    epoly: EPoly
    origin: str
    lineage: tuple[tuple[str, int, int], ...] = ()


@dataclass(frozen=True)
class CenterReport:
    """What a blow-up removed: enough evidence to audit the step."""

    tag: str
    element: Elem
    codims: tuple[int, ...]
    hodge: dict[HodgeKey, int]
    strata: int
    stable: bool


@dataclass(frozen=True)
class QuotientReport:
    generators: tuple[Elem, ...]
    order: int
    reflection_ok: bool
    detail: str = ""


@dataclass(frozen=True)
class ContractionReport:
    tag: str
    fibres: int
    bundle_ok: bool
    base_hodge: dict[HodgeKey, int] = field(default_factory=dict)


@dataclass(frozen=True)
class StrataSpace:
    m: int
    r: int
    dim: int
    strata: tuple[Stratum, ...]
    quotiented: frozenset[Elem]
    next_id: int = 0

    # construction --------------------------------------------------------

    @classmethod
    def from_curve(cls, curve, label: str = "C") -> StrataSpace:
        m = curve.modulus
        whole = frozenset(all_elements(m, 1))
        base = fixed_points(curve, 1)
        labels = sorted(lab for lab, _ in base)
        for k in range(2, m):
            pts = fixed_points(curve, k)
            if sorted(lab for lab, _ in pts) != labels:
                raise StrataError(
                    f"{curve.name}: powers of the generator fix different points; unsupported"
                )
        strata = []
        uid = 0
        for lab, t in base:
            strata.append(
                Stratum(
                    uid, 0, whole, (NormalLine((t % m,), ""),),
                    EPoly.of([((0,), 0, 0, 1)]), f"{label}.fix",
                )
            )
            uid += 1
        h1 = [((w % m,), 1, 0, -1) for w in curve.h10_weights]
        h1 += [((-w % m,), 0, 1, -1) for w in curve.h10_weights]
        open_part = EPoly.of([((0,), 0, 0, 1 - len(base)), ((0,), 1, 1, 1)] + h1)
        strata.append(Stratum(uid, 1, frozenset({(0,)}), (), open_part, f"{label}.open"))
        return cls(m, 1, 1, tuple(strata), frozenset({(0,)}), uid + 1).merged()

    def product(self, other: StrataSpace) -> StrataSpace:
        if self.m != other.m:
            raise StrataError("product of spaces with different moduli")
        m, r1, r2 = self.m, self.r, other.r
        pad1 = lambda c: tuple(c) + (0,) * r2
        pad2 = lambda c: (0,) * r1 + tuple(c)
        strata = []
        uid = 0
        for a in self.strata:
            for b in other.strata:
                stab = frozenset(x + y for x in a.stab for y in b.stab)
                normal = tuple(NormalLine(canonical(pad1(l.char), stab, m), l.tag) for l in a.normal)
                normal += tuple(NormalLine(canonical(pad2(l.char), stab, m), l.tag) for l in b.normal)
                e = a.epoly.map_chars(pad1).product(b.epoly.map_chars(pad2), m)
                strata.append(Stratum(uid, a.dim + b.dim, stab, normal, e, f"({a.origin})x({b.origin})"))
                uid += 1
        Q = frozenset(x + y for x in self.quotiented for y in other.quotiented)
        return StrataSpace(m, r1 + r2, self.dim + other.dim, tuple(strata), Q, uid).merged()

    def merged(self) -> StrataSpace:
        """Fuse strata of identical type; their E-polynomials add."""
        groups: dict = {}
        order = []
        for s in self.strata:
            key = (s.dim, s.stab, tuple(sorted((l.char, l.tag) for l in s.normal)), s.lineage)
            if key in groups:
                first = groups[key]
                groups[key] = replace(first, epoly=first.epoly + s.epoly)
            else:
                groups[key] = replace(s, normal=tuple(sorted(s.normal, key=lambda l: (l.char, l.tag))))
                order.append(key)
        kept = tuple(groups[k] for k in order if groups[k].epoly.terms)
        return replace(self, strata=kept)

    # invariants -----------------------------------------------------------

    def total_epoly(self) -> EPoly:
        out = EPoly()
        for s in self.strata:
            out = out + s.epoly
        return out

    def hodge(self) -> dict[HodgeKey, int]:
        """h^{p,q} of the (compact, smooth) space from its E-polynomial."""
        return {(p, q): (-1) ** (p + q) * v for (p, q), v in self.total_epoly().total().items()}

    def fixed_codim(self, s: Stratum, g: Elem) -> int:
        return sum(1 for l in s.normal if pair(l.char, g, self.m))

    def fixed_locus(self, g: Elem) -> list[tuple[Stratum, int]]:
        """Strata inside X^g with the codimension of X^g there."""
        g = tuple(x % self.m for x in g)
        return [(s, self.fixed_codim(s, g)) for s in self.strata if g in s.stab]

    # blow-up ---------------------------------------------------------------

    def blow_up(
        self, g: Elem, codims: Iterable[int] | None, tag: str, track: bool = False, named: bool = False
    ) -> tuple[StrataSpace, CenterReport]:
        """Blow up the components of X^g whose codimension lies in ``codims``.

        ``codims=None`` takes every component of codimension >= 2.  With
        ``track`` the new strata remember their base stratum, which a later
        contraction of the exceptional divisor needs.  Normal lines of the
        new divisor carry its tag only when ``named`` or ``track`` is set;
        anonymous lines let strata of the same type fuse.
        """
        m = self.m
        g = tuple(x % m for x in g)
        allowed = None if codims is None else set(codims)
        uid = self.next_id
        out: list[Stratum] = []
        center_e = EPoly()
        n_center = 0
        seen_codims = set()
        for s in self.strata:
            if g not in s.stab:
                out.append(s)
                continue
            moved = [l for l in s.normal if pair(l.char, g, m)]
            c = len(moved)
            if c < 2 or (allowed is not None and c not in allowed):
                out.append(s)
                continue
            seen_codims.add(c)
            n_center += 1
            center_e = center_e + s.epoly
            kept = [l for l in s.normal if not pair(l.char, g, m)]
            etag = f"{tag}c{c}"
            blocks: dict[Char, list[NormalLine]] = {}
            for l in moved:
                blocks.setdefault(canonical(l.char, s.stab, m), []).append(l)
            keys = sorted(blocks)
            for size in range(1, len(keys) + 1):
                for J in itertools.combinations(keys, size):
                    stab2 = equalizer(s.stab, J, m)
                    chi0 = J[0]
                    normal = [NormalLine(canonical(l.char, stab2, m), l.tag) for l in kept]
                    normal.append(NormalLine(canonical(chi0, stab2, m), etag if (named or track) else ""))
                    for key in keys:
                        if key in J:
                            continue
                        for l in blocks[key]:
                            diff = tuple((a - b) % m for a, b in zip(l.char, chi0))
                            normal.append(NormalLine(canonical(diff, stab2, m), l.tag))
                    poly = lefschetz_poly_pow([-1, 1], size - 1)
                    for key in J:
                        poly = _pmul(poly, [1] * len(blocks[key]))
                    dim2 = s.dim + sum(len(blocks[k]) for k in J) - 1
                    if dim2 + len(normal) != self.dim:
                        raise StrataError(f"dimension bookkeeping failed over {s.origin}")
                    label = "+".join(str(k) for k in J)
                    out.append(
                        Stratum(
                            uid, dim2, stab2, tuple(normal), s.epoly.times_lefschetz(poly),
                            f"{etag}[{label}]<{s.origin}>",
                            s.lineage + ((etag, s.uid, s.dim),) if track else s.lineage,
                        )
                    )
                    uid += 1
        report = CenterReport(
            tag, g, tuple(sorted(seen_codims)),
            {(p, q): (-1) ** (p + q) * v for (p, q), v in center_e.total().items()},
            n_center, True,
        )
        return replace(self, strata=tuple(out), next_id=uid).merged(), report

    # quotient ----------------------------------------------------------------

    def quotient(self, gens: Sequence[Elem]) -> tuple[StrataSpace, QuotientReport]:
        """Quotient by the subgroup generated by ``gens`` (plus earlier quotients).

        Smoothness of the image needs the part of the subgroup fixing a
        stratum to act on the normal space as a cyclic reflection group.
        """
        m = self.m
        Q = generated(m, self.r, list(self.quotiented) + [tuple(g) for g in gens])
        out = []
        for s in self.strata:
            K = s.stab & Q
            K = frozenset(K)
            moved = [i for i, l in enumerate(s.normal) if not trivial_on(l.char, K, m)]
            lines = list(s.normal)
            # the earlier quotient already acts trivially, so only K / (K & Q_old) matters
            k_eff = len(K) // len(K & self.quotiented)
            if k_eff > 1:
                if len(moved) != 1:
                    raise StrataError(
                        f"quotient is singular along {s.origin}: {len(moved)} normal directions move"
                    )
                i = moved[0]
                if char_order_on(lines[i].char, K, m) != k_eff:
                    raise StrataError(f"stabilizer acts non-effectively along {s.origin}")
                lines[i] = NormalLine(tuple((k_eff * x) % m for x in lines[i].char), lines[i].tag)
            stab2 = subgroup_sum(s.stab, Q, m)
            normal = tuple(
                NormalLine(canonical(_extend(l.char, s.stab, Q, m), stab2, m), l.tag) for l in lines
            )
            out.append(replace(s, stab=stab2, normal=normal, epoly=s.epoly.invariant(Q, m)))
        rep = QuotientReport(tuple(tuple(g) for g in gens), len(Q), True)
        return replace(self, strata=tuple(out), quotiented=Q).merged(), rep

    # contraction ---------------------------------------------------------------

    def blow_down(self, tag: str) -> tuple[StrataSpace, ContractionReport]:
        """Contract the divisor tagged ``tag``, a P^1-bundle over its base.

        Strata of the divisor are grouped by the base stratum recorded when
        the divisor was created.  In the local model over a base point the
        two normal characters alpha, beta of the base are recovered from a
        section point x: the divisor direction at x is alpha and the fibre
        direction is beta - alpha.
        """
        m = self.m
        groups: dict[int, list[Stratum]] = defaultdict(list)
        base_dim: dict[int, int] = {}
        rest = []
        for s in self.strata:
            if any(l.tag == tag for l in s.normal):
                entry = [e for e in s.lineage if e[0] == tag]
                if len(entry) != 1:
                    raise StrataError(f"stratum {s.origin} in {tag} has no unique base")
                _, bid, bdim = entry[0]
                groups[bid].append(s)
                base_dim[bid] = bdim
            else:
                rest.append(s)
        if not groups:
            raise StrataError(f"no divisor tagged {tag}")
        uid = self.next_id
        new = []
        base_e = EPoly()
        for bid in sorted(groups):
            members = groups[bid]
            bdim = base_dim[bid]
            sections = [s for s in members if s.dim == bdim]
            opens = [s for s in members if s.dim == bdim + 1]
            if len(sections) + len(opens) != len(members) or len(opens) != 1:
                raise StrataError(f"divisor {tag} is not a P^1-bundle over base {bid}")
            u = opens[0]
            if not sections:
                delta = [l for l in u.normal if l.tag == tag][0]
                others = [l for l in u.normal if l.tag != tag]
                normal = tuple(others) + (
                    NormalLine(delta.char, f"{tag}/a"), NormalLine(delta.char, f"{tag}/b"),
                )
                e = u.epoly.divide_by_one_plus_l()
                stab = u.stab
                ref = u
            else:
                # the open part is a C*-bundle over the base, the sections two copies of it
                e = _divide_by_l_minus_one(u.epoly)
                sec_total = EPoly()
                for x in sections:
                    sec_total = sec_total + x.epoly
                if sec_total != e + e or len(sections) > 2:
                    raise StrataError(f"sections of {tag} over base {bid} do not form two copies of the base")
                x = sections[0]
                y = sections[-1]
                if x.stab != y.stab:
                    raise StrataError(f"sections of {tag} over base {bid} have different stabilizers")
                phi_x = _fibre_line(x, u, tag)
                phi_y = _fibre_line(y, u, tag)
                delta = [l for l in x.normal if l.tag == tag][0]
                others = list(x.normal)
                others.remove(delta)
                others.remove(phi_x)
                beta = tuple((a + b) % m for a, b in zip(delta.char, phi_x.char))
                normal = tuple(others) + (
                    NormalLine(delta.char, phi_y.tag),
                    NormalLine(canonical(beta, x.stab, m), phi_x.tag),
                )
                stab = x.stab
                ref = x
            base_e = base_e + e
            lineage = tuple(t for t in ref.lineage if t[0] != tag)
            new.append(Stratum(uid, bdim, stab, normal, e, f"down[{tag}]<{ref.origin}>", lineage))
            uid += 1
        rep = ContractionReport(
            tag, len(groups), True,
            {(p, q): (-1) ** (p + q) * v for (p, q), v in base_e.total().items()},
        )
        return replace(self, strata=tuple(rest + new), next_id=uid), rep

    # change of group -----------------------------------------------------------

    def to_residual(self) -> StrataSpace:
        """Pass from A = (Z_m)^2 modulo ker(a1 + a2) to Z_m via a -> a1 + a2."""
        m = self.m
        if self.r != 2:
            raise StrataError("residual map needs a rank-2 group")
        kernel = frozenset((a, (-a) % m) for a in range(m))
        if self.quotiented != kernel:
            raise StrataError("residual map needs the quotient by ker(a1 + a2)")
        out = []
        for s in self.strata:
            stab = frozenset(((a + b) % m,) for a, b in s.stab)
            normal = [NormalLine(_residual_char(l.char, s.stab, stab, m), l.tag) for l in s.normal]

            def down(chi):
                if chi[0] != chi[1]:
                    raise StrataError(f"E-polynomial character {chi} is not invariant")
                return (chi[0],)

            normal = [NormalLine(l.char, "") for l in normal]
            out.append(replace(s, stab=stab, normal=tuple(normal), epoly=s.epoly.map_chars(down), lineage=()))
        return StrataSpace(m, 1, self.dim, tuple(out), frozenset({(0,)}), self.next_id).merged()


@lru_cache(maxsize=None)
def _residual_char(chi: Char, stab: frozenset[Elem], image: frozenset[Elem], m: int) -> Char:
    for t in range(m):
        if all(pair(chi, h, m) == (t * (h[0] + h[1])) % m for h in stab):
            return canonical((t,), image, m)
    raise StrataError(f"normal character {chi} is not residual")


def _divide_by_l_minus_one(e: EPoly) -> EPoly:
    """Exact division by (uv - 1)."""
    rem = Counter({(c, p, q): v for c, p, q, v in e.terms})
    out: Counter = Counter()
    while rem:
        c, p, q = key = min(rem, key=lambda k: (k[1] + k[2], k))
        v = rem.pop(key)
        # lowest term of quotient times (uv - 1) gives -coefficient at key
        out[key] -= v
        up = (c, p + 1, q + 1)
        rem[up] += v
        if rem[up] == 0:
            del rem[up]
        if p + q > 4 * 10**3:
            raise StrataError("E-polynomial not divisible by L - 1")
    quotient = EPoly.of((c, p, q, v) for (c, p, q), v in out.items())
    if quotient.times_lefschetz([-1, 1]) != e:
        raise StrataError("E-polynomial not divisible by L - 1")
    return quotient


def _fibre_line(x: Stratum, u: Stratum, tag: str) -> NormalLine:
    """Normal line at a section point that is tangent to the fibre."""
    u_tags = Counter(l.tag for l in u.normal if l.tag != tag)
    cand = []
    for l in x.normal:
        if l.tag == tag:
            continue
        if u_tags[l.tag]:
            u_tags[l.tag] -= 1
        else:
            cand.append(l)
    if len(cand) != 1:
        raise StrataError(f"cannot identify the fibre direction at {x.origin}")
    return cand[0]
