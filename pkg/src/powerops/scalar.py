"""Fixed-precision p-adic scalars and the nilpotent coefficient ring Z_p[v3]/(v3^2).

A nonzero scalar is stored as (valuation, unit, prec) meaning

    value = p^valuation * unit,   unit coprime to p,  unit known mod p^prec.

Multiplication and division are exact at the tracked relative precision;
addition may lose significance on cancellation, and the loss is recorded.
Values divided by p (negative valuation) are first-class, which is what the
logarithm x + (v3/p) x^(p^3) and the binomial quotients C(ip,i)/p require.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

__all__ = [
    "PAdicScalar",
    "CoeffV3",
    "TeichmullerRoot",
    "PrecisionLossError",
    "teichmuller",
    "primitive_teichmuller_root",
    "reduce_mod_p",
    "binomial_scalar",
    "set_precision_floor",
    "get_precision_floor",
]

DEFAULT_PRECISION = 8

# Operations raise once the guaranteed number of significant digits of a
# nonzero result falls below this floor.  One digit is enough for the mod-p
# assertions downstream; raise the floor to harden golden-value runs.
_PRECISION_FLOOR = 1


class PrecisionLossError(ArithmeticError):
    """Result precision fell below the configured floor."""


def set_precision_floor(digits: int) -> None:
    global _PRECISION_FLOOR
    if digits < 1:
        raise ValueError("precision floor must be >= 1")
    _PRECISION_FLOOR = digits


def get_precision_floor() -> int:
    return _PRECISION_FLOOR


def _valuation_of_int(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        v += 1
        n //= p
    return v


@dataclass(frozen=True)
class PAdicScalar:
    """Element of Q_p with explicit valuation and unit part mod p^prec."""

    p: int
    valuation: int
    unit: int
    prec: int
    is_zero_flag: bool = field(default=False, repr=False)

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, p: int) -> "PAdicScalar":
        return cls(p, 0, 0, 0, is_zero_flag=True)

    @classmethod
    def from_int(cls, p: int, n: int, prec: int = DEFAULT_PRECISION) -> "PAdicScalar":
        if n == 0:
            return cls.zero(p)
        v = _valuation_of_int(abs(n), p)
        unit = (n // p**v) % p**prec
        return cls(p, v, unit, prec)

    @classmethod
    def from_ratio(cls, p: int, num: int, den: int, prec: int = DEFAULT_PRECISION) -> "PAdicScalar":
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        return cls.from_int(p, num, prec) / cls.from_int(p, den, prec)

    # -- predicates --------------------------------------------------------

    def is_zero(self) -> bool:
        return self.is_zero_flag

    def is_integral(self) -> bool:
        return self.is_zero_flag or self.valuation >= 0

    # -- arithmetic --------------------------------------------------------

    def _check_floor(self) -> "PAdicScalar":
        if not self.is_zero_flag and self.prec < _PRECISION_FLOOR:
            raise PrecisionLossError(
                f"precision dropped to {self.prec} digits (floor {_PRECISION_FLOOR})"
            )
        return self

    def __add__(self, other: "PAdicScalar") -> "PAdicScalar":
        p = self.p
        if self.is_zero_flag:
            return other
        if other.is_zero_flag:
            return self
        v = min(self.valuation, other.valuation)
        # absolute precision of each operand, relative to p^v
        m = min(
            self.valuation + self.prec - v,
            other.valuation + other.prec - v,
        )
        mod = p**m
        s = (self.unit * p ** (self.valuation - v) + other.unit * p ** (other.valuation - v)) % mod
        if s == 0:
            # cancellation to below the known precision; the uses in this
            # package only cancel structurally exact values
            return PAdicScalar.zero(p)
        t = _valuation_of_int(s, p)
        return PAdicScalar(p, v + t, (s // p**t) % p ** (m - t), m - t)._check_floor()

    def __neg__(self) -> "PAdicScalar":
        if self.is_zero_flag:
            return self
        return PAdicScalar(self.p, self.valuation, (-self.unit) % self.p**self.prec, self.prec)

    def __sub__(self, other: "PAdicScalar") -> "PAdicScalar":
        return self + (-other)

    def __mul__(self, other: "PAdicScalar") -> "PAdicScalar":
        p = self.p
        if self.is_zero_flag or other.is_zero_flag:
            return PAdicScalar.zero(p)
        prec = min(self.prec, other.prec)
        return PAdicScalar(
            p, self.valuation + other.valuation, (self.unit * other.unit) % p**prec, prec
        )._check_floor()

    def __truediv__(self, other: "PAdicScalar") -> "PAdicScalar":
        p = self.p
        if other.is_zero_flag:
            raise ZeroDivisionError("division by p-adic zero")
        if self.is_zero_flag:
            return self
        prec = min(self.prec, other.prec)
        inv = pow(other.unit, -1, p**prec)
        return PAdicScalar(
            p, self.valuation - other.valuation, (self.unit * inv) % p**prec, prec
        )._check_floor()

    def mul_int(self, n: int) -> "PAdicScalar":
        return self * PAdicScalar.from_int(self.p, n, max(self.prec, 1))

    def __pow__(self, n: int) -> "PAdicScalar":
        if n < 0:
            raise ValueError("use division for negative powers")
        out = PAdicScalar.from_int(self.p, 1, self.prec if not self.is_zero_flag else DEFAULT_PRECISION)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- comparison --------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PAdicScalar):
            if isinstance(other, int):
                other = PAdicScalar.from_int(self.p, other, max(self.prec, 1))
            else:
                return NotImplemented
        if self.is_zero_flag or other.is_zero_flag:
            return self.is_zero_flag and other.is_zero_flag
        if self.valuation != other.valuation:
            return False
        m = self.p ** min(self.prec, other.prec)
        return (self.unit - other.unit) % m == 0

    __hash__ = None  # mutable-precision equality; not hashable

    # -- reductions --------------------------------------------------------

    def residue(self) -> int:
        """Image in F_p; requires a p-adic integer."""
        if self.is_zero_flag:
            return 0
        if self.valuation < 0:
            raise ValueError("negative valuation: not a p-adic integer")
        if self.valuation > 0:
            return 0
        return self.unit % self.p

    def lift(self, digits: int | None = None) -> int:
        """Integer representative of p^val * unit mod p^(val+digits), val >= 0."""
        if self.is_zero_flag:
            return 0
        if self.valuation < 0:
            raise ValueError("negative valuation")
        d = self.prec if digits is None else min(digits, self.prec)
        return (self.p**self.valuation * self.unit) % self.p ** (self.valuation + d)

    def __repr__(self) -> str:
        if self.is_zero_flag:
            return "0"
        return f"{self.p}^{self.valuation}*{self.unit}(+O({self.p}^{self.valuation + self.prec}))"


def reduce_mod_p(a: PAdicScalar) -> int:
    """Residue in F_p of a p-adic integer."""
    return a.residue()


def binomial_scalar(p: int, n: int, k: int, prec: int = DEFAULT_PRECISION) -> PAdicScalar:
    """C(n, k) computed over exact integers, then embedded p-adically."""
    return PAdicScalar.from_int(p, math.comb(n, k), prec)


# ---------------------------------------------------------------------------
# Teichmuller lifts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TeichmullerRoot:
    """A (p-1)st root of unity in Z_p, exact to the stored precision."""

    omega: PAdicScalar
    order: int

    def power(self, i: int) -> PAdicScalar:
        return self.omega ** (i % self.order)


def teichmuller(residue: int, p: int, prec: int = DEFAULT_PRECISION) -> TeichmullerRoot:
    """Lift of a unit residue to the root of unity fixed by x -> x^p mod p^prec.

    Frobenius iteration converges in at most `prec` steps.
    """
    if residue % p == 0:
        raise ValueError("residue must be a unit mod p")
    mod = p**prec
    a = residue % mod
    for _ in range(prec + 2):
        b = pow(a, p, mod)
        if b == a:
            break
        a = b
    else:
        raise ArithmeticError("Teichmuller iteration failed to stabilize")
    return TeichmullerRoot(PAdicScalar(p, 0, a, prec), p - 1)


def _is_primitive_root(g: int, p: int) -> bool:
    n = p - 1
    factors = set()
    m, q = n, 2
    while q * q <= m:
        while m % q == 0:
            factors.add(q)
            m //= q
        q += 1
    if m > 1:
        factors.add(m)
    return all(pow(g, n // q, p) != 1 for q in factors)


def primitive_teichmuller_root(p: int, prec: int = DEFAULT_PRECISION) -> TeichmullerRoot:
    """Teichmuller lift of the smallest primitive root mod p."""
    for g in range(2, p):
        if _is_primitive_root(g, p):
            return teichmuller(g, p, prec)
    raise ValueError(f"{p} is not an odd prime")


# ---------------------------------------------------------------------------
# The ring Z_p[v3]/(v3^2)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CoeffV3:
    """Element a + b*v3 with v3^2 = 0.

    (a + b v3)(c + d v3) = ac + (ad + bc) v3; the v3 part never feeds back
    into the plain part.
    """

    plain: PAdicScalar
    v3part: PAdicScalar

    @classmethod
    def zero(cls, p: int) -> "CoeffV3":
        z = PAdicScalar.zero(p)
        return cls(z, z)

    @classmethod
    def one(cls, p: int, prec: int = DEFAULT_PRECISION) -> "CoeffV3":
        return cls(PAdicScalar.from_int(p, 1, prec), PAdicScalar.zero(p))

    @classmethod
    def from_plain(cls, a: PAdicScalar) -> "CoeffV3":
        return cls(a, PAdicScalar.zero(a.p))

    @classmethod
    def from_v3(cls, b: PAdicScalar) -> "CoeffV3":
        return cls(PAdicScalar.zero(b.p), b)

    @classmethod
    def from_int(cls, p: int, n: int, prec: int = DEFAULT_PRECISION) -> "CoeffV3":
        return cls.from_plain(PAdicScalar.from_int(p, n, prec))

    @property
    def p(self) -> int:
        return self.plain.p

    def is_zero(self) -> bool:
        return self.plain.is_zero() and self.v3part.is_zero()

    def __add__(self, other: "CoeffV3") -> "CoeffV3":
        return CoeffV3(self.plain + other.plain, self.v3part + other.v3part)

    def __neg__(self) -> "CoeffV3":
        return CoeffV3(-self.plain, -self.v3part)

    def __sub__(self, other: "CoeffV3") -> "CoeffV3":
        return self + (-other)

    def __mul__(self, other: "CoeffV3") -> "CoeffV3":
        return CoeffV3(
            self.plain * other.plain,
            self.plain * other.v3part + self.v3part * other.plain,
        )

    def scale(self, a: PAdicScalar) -> "CoeffV3":
        return CoeffV3(self.plain * a, self.v3part * a)

    def mul_int(self, n: int) -> "CoeffV3":
        return CoeffV3(self.plain.mul_int(n), self.v3part.mul_int(n))

    def times_v3(self) -> "CoeffV3":
        """Multiplication by v3 (kills the existing v3 part)."""
        return CoeffV3(PAdicScalar.zero(self.p), self.plain)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CoeffV3):
            return NotImplemented
        return self.plain == other.plain and self.v3part == other.v3part

    __hash__ = None

    def __repr__(self) -> str:
        if self.is_zero():
            return "0"
        if self.v3part.is_zero():
            return repr(self.plain)
        if self.plain.is_zero():
            return f"({self.v3part!r})*v3"
        return f"{self.plain!r} + ({self.v3part!r})*v3"
