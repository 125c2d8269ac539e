"""Exact arithmetic in the cyclotomic integers Z[zeta_m].

Elements are stored as integer vectors indexed by Z_m (the coefficient of
zeta^k sits at index k).  Ring operations act on these group-ring vectors
directly; reduction modulo the cyclotomic polynomial only happens when an
element is compared or converted to a rational integer.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable


def _poly_divmod(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    """Divide integer polynomials (low degree first) by a monic divisor."""
    num = list(num)
    if den[-1] != 1:
        raise ValueError("divisor must be monic")
    dd = len(den) - 1
    if len(num) - 1 < dd:
        return [0], num
    quot = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c:
            quot[i - dd] = c
            for j, dc in enumerate(den):
                num[i - dd + j] -= c * dc
    rem = num[:dd] or [0]
    return quot, rem


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Coefficients of Phi_m, lowest degree first."""
    if m < 1:
        raise ValueError(f"modulus must be positive, got {m}")
    poly = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            poly, rem = _poly_divmod(poly, list(cyclotomic_polynomial(d)))
            assert not any(rem), "x^m - 1 not divisible by Phi_d"
    return tuple(poly)


def euler_phi(m: int) -> int:
    return len(cyclotomic_polynomial(m)) - 1


class NonIntegralError(ArithmeticError):
    """An exact cyclotomic value was asserted to be a rational integer but is not."""


class CyclotomicInteger:
    """An element sum_k c_k zeta^k of Z[zeta_m], zeta a primitive m-th root of unity."""

    __slots__ = ("m", "coeffs")

    def __init__(self, m: int, coeffs: Iterable[int] = ()):
        if m < 1:
            raise ValueError(f"modulus must be positive, got {m}")
        vec = [0] * m
        for k, c in enumerate(coeffs):
            vec[k % m] += int(c)
        self.m = m
        self.coeffs = tuple(vec)

    @classmethod
    def zeta_power(cls, m: int, k: int) -> CyclotomicInteger:
        vec = [0] * m
        vec[k % m] = 1
        return cls(m, vec)

    @classmethod
    def from_int(cls, m: int, n: int) -> CyclotomicInteger:
        return cls(m, [n])

    @classmethod
    def from_exponents(cls, m: int, exponents: Iterable[int]) -> CyclotomicInteger:
        """Sum of zeta^e over the given exponents (with repetition)."""
        vec = [0] * m
        for e in exponents:
            vec[e % m] += 1
        return cls(m, vec)

    def _coerce(self, other) -> CyclotomicInteger:
        if isinstance(other, CyclotomicInteger):
            if other.m != self.m:
                raise ValueError(f"modulus mismatch: {self.m} vs {other.m}")
            return other
        if isinstance(other, int):
            return CyclotomicInteger.from_int(self.m, other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return CyclotomicInteger(self.m, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicInteger(self.m, [-a for a in self.coeffs])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        m = self.m
        vec = [0] * m
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    if b:
                        vec[(i + j) % m] += a * b
        return CyclotomicInteger(m, vec)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not defined in Z[zeta]")
        result = CyclotomicInteger.from_int(self.m, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def galois(self, u: int) -> CyclotomicInteger:
        """Apply zeta -> zeta^u (u a unit mod m)."""
        vec = [0] * self.m
        for k, c in enumerate(self.coeffs):
            vec[(k * u) % self.m] += c
        return CyclotomicInteger(self.m, vec)

    def conjugate(self) -> CyclotomicInteger:
        return self.galois(-1)

    def reduced(self) -> tuple[int, ...]:
        """Canonical coefficients modulo Phi_m (length phi(m))."""
        phi = cyclotomic_polynomial(self.m)
        _, rem = _poly_divmod(list(self.coeffs), list(phi))
        deg = len(phi) - 1
        return tuple(rem + [0] * (deg - len(rem)))

    def is_zero(self) -> bool:
        return not any(self.reduced())

    def is_rational_integer(self) -> bool:
        red = self.reduced()
        return not any(red[1:])

    def to_int(self) -> int:
        red = self.reduced()
        if any(red[1:]):
            raise NonIntegralError(f"{self!r} is not a rational integer")
        return red[0]

    def __eq__(self, other) -> bool:
        o = self._coerce(other) if isinstance(other, (int, CyclotomicInteger)) else NotImplemented
        if o is NotImplemented:
            return NotImplemented
        return (self - o).is_zero()

    def __hash__(self):
        return hash((self.m, self.reduced()))

    def __complex__(self) -> complex:
        import cmath

        z = cmath.exp(2j * cmath.pi / self.m)
        return sum(c * z**k for k, c in enumerate(self.coeffs))

    def __repr__(self) -> str:
        terms = [f"{c}*z^{k}" for k, c in enumerate(self.coeffs) if c]
        return f"CyclotomicInteger({self.m}: {' + '.join(terms) or '0'})"
