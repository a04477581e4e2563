"""Exact arithmetic in cyclotomic fields Q(zeta_N).

A value at level N is stored as its residue modulo the N-th cyclotomic
polynomial, so two scalars at the same level are equal exactly when their
coefficient vectors agree. Mixed levels are compared after coercion into
Q(zeta_lcm).
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Sequence

MAX_LEVEL = 10_000


class LevelError(ValueError):
    """Raised when a cyclotomic level is outside the supported range."""


def _check_level(n: int) -> None:
    if not isinstance(n, int) or n < 1 or n > MAX_LEVEL:
        raise LevelError(f"cyclotomic level must be an integer in [1, {MAX_LEVEL}], got {n!r}")


def _divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _poly_divmod(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    """Exact division of integer polynomials (low degree first), monic divisor."""
    if den[-1] != 1:
        raise ValueError("divisor must be monic")
    rem = list(num)
    q = [0] * max(len(num) - len(den) + 1, 1)
    for i in range(len(num) - len(den), -1, -1):
        c = rem[i + len(den) - 1]
        if c:
            q[i] = c
            for j, d in enumerate(den):
                rem[i + j] -= c * d
    rem = rem[: len(den) - 1] or [0]
    return q, rem


def _poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Return the coefficients of Phi_n, lowest degree first.

    Computed by dividing x^n - 1 by Phi_d for every proper divisor d of n.
    """
    _check_level(n)
    num = [-1] + [0] * (n - 1) + [1]
    den = [1]
    for d in _divisors(n)[:-1]:
        den = _poly_mul(den, cyclotomic_polynomial(d))
    q, rem = _poly_divmod(num, den)
    if any(rem):
        raise ArithmeticError(f"x^{n}-1 not divisible by product of lower cyclotomics")
    while len(q) > 1 and q[-1] == 0:
        q.pop()
    return tuple(q)


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    return len(cyclotomic_polynomial(n)) - 1


@lru_cache(maxsize=None)
def _mobius(n: int) -> int:
    result, p, m = 1, 2, n
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            result = -result
        p += 1
    if m > 1:
        result = -result
    return result


def _reduce(coeffs: Sequence[Fraction], n: int) -> tuple[Fraction, ...]:
    """Reduce a polynomial in zeta_n modulo Phi_n."""
    phi = cyclotomic_polynomial(n)
    deg = len(phi) - 1
    work = [Fraction(c) for c in coeffs]
    # fold x^n = 1 first so the long division below stays short
    if len(work) > n:
        folded = [Fraction(0)] * n
        for i, c in enumerate(work):
            folded[i % n] += c
        work = folded
    for i in range(len(work) - 1, deg - 1, -1):
        c = work[i]
        if c:
            work[i] = Fraction(0)
            for j in range(deg):
                work[i - deg + j] -= c * phi[j]
    work += [Fraction(0)] * (deg - len(work))
    return tuple(work[:deg])


class CyclotomicScalar:
    """Immutable element of Q(zeta_level)."""

    __slots__ = ("_level", "_coeffs")

    def __init__(self, level: int, coeffs: Iterable[int | Fraction] = ()):
        _check_level(level)
        object.__setattr__(self, "_level", level)
        object.__setattr__(self, "_coeffs", _reduce(list(coeffs), level))

    def __setattr__(self, name, value):
        raise AttributeError("CyclotomicScalar is immutable")

    # construction helpers
    @classmethod
    def zero(cls, level: int = 1) -> CyclotomicScalar:
        return cls(level, [])

    @classmethod
    def one(cls, level: int = 1) -> CyclotomicScalar:
        return cls(level, [1])

    @classmethod
    def rational(cls, q: int | Fraction, level: int = 1) -> CyclotomicScalar:
        return cls(level, [Fraction(q)])

    @classmethod
    def zeta(cls, level: int, k: int = 1) -> CyclotomicScalar:
        """The root of unity zeta_level ** k."""
        _check_level(level)
        k %= level
        return cls(level, [0] * k + [1])

    @property
    def level(self) -> int:
        return self._level

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self._coeffs

    def coerce(self, level: int) -> CyclotomicScalar:
        """Embed into Q(zeta_level); ``level`` must be a multiple of ``self.level``."""
        _check_level(level)
        if level % self._level:
            raise LevelError(f"cannot embed level {self._level} into level {level}")
        if level == self._level:
            return self
        step = level // self._level
        poly = [Fraction(0)] * ((len(self._coeffs) - 1) * step + 1)
        for i, c in enumerate(self._coeffs):
            poly[i * step] = c
        return CyclotomicScalar(level, poly)

    def _common(self, other: CyclotomicScalar) -> tuple[CyclotomicScalar, CyclotomicScalar]:
        if self._level == other._level:
            return self, other
        lcm = self._level * other._level // math.gcd(self._level, other._level)
        if lcm > MAX_LEVEL:
            raise LevelError(f"common level {lcm} exceeds {MAX_LEVEL}")
        return self.coerce(lcm), other.coerce(lcm)

    @staticmethod
    def _lift(x) -> CyclotomicScalar | None:
        if isinstance(x, CyclotomicScalar):
            return x
        if isinstance(x, (int, Fraction, Rational)):
            return CyclotomicScalar(1, [Fraction(x)])
        return None

    # arithmetic
    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        a, b = self._common(o)
        return CyclotomicScalar(a._level, [x + y for x, y in zip(a._coeffs, b._coeffs)])

    __radd__ = __add__

    def __neg__(self) -> CyclotomicScalar:
        return CyclotomicScalar(self._level, [-c for c in self._coeffs])

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        a, b = self._common(o)
        prod = [Fraction(0)] * (len(a._coeffs) + len(b._coeffs) - 1)
        for i, x in enumerate(a._coeffs):
            if x:
                for j, y in enumerate(b._coeffs):
                    if y:
                        prod[i + j] += x * y
        return CyclotomicScalar(a._level, prod)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return CyclotomicScalar(self._level, [c / other for c in self._coeffs])
        return NotImplemented

    def __pow__(self, k: int) -> CyclotomicScalar:
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = CyclotomicScalar.one(self._level)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # comparison
    def __eq__(self, other) -> bool:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        a, b = self._common(o)
        return a._coeffs == b._coeffs

    def __hash__(self) -> int:
        # the trace divided by the field degree does not depend on the level
        return hash(self.normalized_trace())

    def normalized_trace(self) -> Fraction:
        """Tr_{Q(zeta_N)/Q}(x) / phi(N); independent of the level used."""
        n = self._level
        total = Fraction(0)
        for k, c in enumerate(self._coeffs):
            if c:
                m = n // math.gcd(k, n)
                total += c * Fraction(_mobius(m), euler_phi(m))
        return total

    def is_zero(self) -> bool:
        return not any(self._coeffs)

    def is_rational(self) -> bool:
        return not any(self._coeffs[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self._coeffs[0]

    def to_complex(self) -> complex:
        """Floating-point evaluation; display only."""
        w = cmath.exp(2j * math.pi / self._level)
        return sum((float(c) * w**k for k, c in enumerate(self._coeffs)), 0j)

    def decimal(self, digits: int = 12) -> str:
        z = self.to_complex()
        re = 0.0 if abs(z.real) < 10.0**-digits else z.real
        im = 0.0 if abs(z.imag) < 10.0**-digits else z.imag
        if im == 0.0:
            return f"{re:.{digits}g}"
        return f"{re:.{digits}g}{im:+.{digits}g}i"

    # serialization
    def to_json(self) -> dict:
        return {
            "level": self._level,
            "numerators": [c.numerator for c in self._coeffs],
            "denominators": [c.denominator for c in self._coeffs],
        }

    @classmethod
    def from_json(cls, data: dict) -> CyclotomicScalar:
        nums, dens = data["numerators"], data["denominators"]
        if len(nums) != len(dens):
            raise ValueError("numerator and denominator arrays differ in length")
        level = int(data["level"])
        if len(nums) != euler_phi(level):
            raise ValueError(f"level {level} expects {euler_phi(level)} coefficients, got {len(nums)}")
        return cls(level, [Fraction(int(p), int(q)) for p, q in zip(nums, dens)])

    def __repr__(self) -> str:
        return f"CyclotomicScalar({self._level}, {[str(c) for c in self._coeffs]})"

    def __str__(self) -> str:
        if self.is_rational():
            return str(self._coeffs[0])
        terms = []
        for k, c in enumerate(self._coeffs):
            if c:
                terms.append(str(c) if k == 0 else f"({c})*z{self._level}^{k}")
        return " + ".join(terms)


def root_of_unity(level: int, k: int) -> CyclotomicScalar:
    return CyclotomicScalar.zeta(level, k)
