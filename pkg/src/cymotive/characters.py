"""Relation subgroups of (Z_m)^n and their characters.

A relation subgroup is G = {h in (Z_m)^n : sum_j eps_j h_j = 0 mod m} for a
sign vector eps.  Characters are exponent vectors chi acting by
h -> zeta^(sum_j chi_j h_j).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .cyclotomic import CyclotomicInteger

DEFAULT_ENUMERATION_CAP = 10**6


class GroupSizeError(ValueError):
    """Raised when an enumeration would exceed the configured cap."""


@dataclass(frozen=True)
class RelationSubgroup:
    modulus: int
    signs: tuple[int, ...]

    def __post_init__(self):
        if self.modulus < 2:
            raise ValueError(f"modulus must be at least 2, got {self.modulus}")
        if not self.signs:
            raise ValueError("sign list must be nonempty")
        if any(s not in (1, -1) for s in self.signs):
            raise ValueError(f"signs must be +1 or -1, got {self.signs}")

    @property
    def rank(self) -> int:
        return len(self.signs)

    @property
    def order(self) -> int:
        return self.modulus ** (self.rank - 1)

    def contains(self, h: Sequence[int]) -> bool:
        if len(h) != self.rank:
            return False
        return sum(s * x for s, x in zip(self.signs, h)) % self.modulus == 0


@dataclass(frozen=True)
class CharacterVector:
    modulus: int
    exponents: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "exponents", tuple(int(e) % self.modulus for e in self.exponents))

    def pairing(self, h: Sequence[int]) -> int:
        """Exponent of zeta in chi(h)."""
        return sum(c * x for c, x in zip(self.exponents, h)) % self.modulus

    def __len__(self) -> int:
        return len(self.exponents)


def make_relation_subgroup(m: int, signs: Iterable[int]) -> RelationSubgroup:
    return RelationSubgroup(int(m), tuple(int(s) for s in signs))


def enumerate_elements(G: RelationSubgroup, cap: int = DEFAULT_ENUMERATION_CAP) -> list[tuple[int, ...]]:
    """All elements of G in lexicographic order.

    The last coordinate is solved from the relation, so the work is m^(n-1).
    """
    if G.order > cap:
        raise GroupSizeError(
            f"group of order {G.order} exceeds enumeration cap {cap}"
        )
    m, signs = G.modulus, G.signs
    last = signs[-1]
    out = []
    for head in itertools.product(range(m), repeat=G.rank - 1):
        partial = sum(s * x for s, x in zip(signs, head))
        # last * h_n = -partial; last is +-1 so it is its own inverse
        out.append(head + ((-partial * last) % m,))
    out.sort()
    return out


def annihilator(G: RelationSubgroup) -> set[CharacterVector]:
    m = G.modulus
    return {CharacterVector(m, tuple(s * t for s in G.signs)) for t in range(m)}


def _as_character(G: RelationSubgroup, chi) -> CharacterVector:
    if isinstance(chi, CharacterVector):
        if chi.modulus != G.modulus:
            raise ValueError(f"character modulus {chi.modulus} does not match group modulus {G.modulus}")
        out = chi
    else:
        out = CharacterVector(G.modulus, tuple(chi))
    if len(out) != G.rank:
        raise ValueError(f"character has length {len(out)}, group rank is {G.rank}")
    return out


def is_invariant_character(G: RelationSubgroup, chi) -> bool:
    """True iff chi is trivial on G, tested by annihilator membership."""
    chi = _as_character(G, chi)
    m = G.modulus
    # chi = (eps_1 t, ..., eps_n t) for t = eps_1 chi_1
    t = (G.signs[0] * chi.exponents[0]) % m
    return all((s * t - e) % m == 0 for s, e in zip(G.signs, chi.exponents))


def character_sum(G: RelationSubgroup, chi, cap: int = DEFAULT_ENUMERATION_CAP) -> CyclotomicInteger:
    """Exact value of sum_{g in G} chi(g) by explicit enumeration."""
    chi = _as_character(G, chi)
    return CyclotomicInteger.from_exponents(
        G.modulus, (chi.pairing(g) for g in enumerate_elements(G, cap))
    )
