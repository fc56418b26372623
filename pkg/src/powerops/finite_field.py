"""Small finite extension fields F_(p^e) with log-table multiplication.

Elements are ints packing base-p coefficient vectors of residues modulo a
monic irreducible polynomial.  Multiplication and powering go through
discrete-log tables, so a power sum costs one table lookup per term; this
is what makes the randomized polynomial-identity checks cheap.
"""

from __future__ import annotations

import random

__all__ = ["GaloisField"]


def _poly_mul_mod(a: list[int], b: list[int], mod: list[int], p: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    # reduce modulo the monic polynomial `mod`
    e = len(mod) - 1
    for i in range(len(out) - 1, e - 1, -1):
        c = out[i]
        if c:
            out[i] = 0
            for j in range(e):
                out[i - e + j] = (out[i - e + j] - c * mod[j]) % p
    out = out[:e]
    while len(out) < e:
        out.append(0)
    return out


def _poly_pow_x(n: int, mod: list[int], p: int) -> list[int]:
    """x^n modulo the given monic polynomial."""
    result = [1] + [0] * (len(mod) - 2)
    base = ([0, 1] + [0] * (len(mod) - 3))[: len(mod) - 1]
    while n:
        if n & 1:
            result = _poly_mul_mod(result, base, mod, p)
        base = _poly_mul_mod(base, base, mod, p)
        n >>= 1
    return result


def _poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = a[:], b[:]
    while any(b):
        while b and b[-1] == 0:
            b.pop()
        if not b:
            break
        inv = pow(b[-1], -1, p)
        r = a[:]
        while len(r) >= len(b) and any(r):
            while r and r[-1] == 0:
                r.pop()
            if len(r) < len(b):
                break
            c = r[-1] * inv % p
            off = len(r) - len(b)
            for j in range(len(b)):
                r[off + j] = (r[off + j] - c * b[j]) % p
        a, b = b, r
    return a


def _is_irreducible(f: list[int], p: int) -> bool:
    """Monic degree-e polynomial test: x^(p^e) = x and gcd(x^(p^(e/q)) - x, f) = 1."""
    e = len(f) - 1
    xq = _poly_pow_x(p**e, f, p)
    x = [0, 1] + [0] * (e - 2)
    if xq != x[:e]:
        return False
    primes = set()
    m = e
    q = 2
    while q * q <= m:
        while m % q == 0:
            primes.add(q)
            m //= q
        q += 1
    if m > 1:
        primes.add(m)
    for q in primes:
        g = _poly_pow_x(p ** (e // q), f, p)
        diff = [(a - b) % p for a, b in zip(g, x[:e])]
        gcd = _poly_gcd(f, diff + [0], p)
        while gcd and gcd[-1] == 0:
            gcd.pop()
        if len(gcd) != 1:
            return False
    return True


class GaloisField:
    """F_(p^e); elements are ints in [0, p^e) packing coefficient vectors."""

    def __init__(self, p: int, e: int):
        self.p = p
        self.e = e
        self.size = p**e
        rng = random.Random(p * 1009 + e)
        if e == 1:
            self.modulus = [0, 1]
        else:
            while True:
                f = [rng.randrange(p) for _ in range(e)] + [1]
                if _is_irreducible(f, p):
                    self.modulus = f
                    break
        self._digits = [self._unpack(a) for a in range(self.size)]
        self._build_log_tables()

    def _unpack(self, a: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.e):
            out.append(a % self.p)
            a //= self.p
        return tuple(out)

    def _pack(self, digits) -> int:
        out = 0
        for d in reversed(digits):
            out = out * self.p + d
        return out

    def _raw_mul(self, a: int, b: int) -> int:
        prod = _poly_mul_mod(list(self._digits[a]), list(self._digits[b]), self.modulus, self.p)
        return self._pack(prod)

    def _build_log_tables(self):
        n = self.size - 1
        factors = set()
        m, q = n, 2
        while q * q <= m:
            while m % q == 0:
                factors.add(q)
                m //= q
            q += 1
        if m > 1:
            factors.add(m)
        g = None
        for cand in range(2, self.size):
            if all(self._pow_raw(cand, n // q) != 1 for q in factors):
                g = cand
                break
        if g is None:
            raise ArithmeticError("no multiplicative generator found")
        self.exp = [1] * n
        self.log = [0] * self.size
        acc = 1
        for i in range(n):
            self.exp[i] = acc
            self.log[acc] = i
            acc = self._raw_mul(acc, g)

    def _pow_raw(self, a: int, n: int) -> int:
        out = 1
        while n:
            if n & 1:
                out = self._raw_mul(out, a)
            a = self._raw_mul(a, a)
            n >>= 1
        return out

    # -- public operations --------------------------------------------------

    def add(self, a: int, b: int) -> int:
        da, db = self._digits[a], self._digits[b]
        return self._pack([(x + y) % self.p for x, y in zip(da, db)])

    def neg(self, a: int) -> int:
        return self._pack([(-x) % self.p for x in self._digits[a]])

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        n = self.size - 1
        return self.exp[(self.log[a] + self.log[b]) % n]

    def pow(self, a: int, m: int) -> int:
        if a == 0:
            return 0 if m else 1
        n = self.size - 1
        return self.exp[(self.log[a] * m) % n]

    def mul_int(self, a: int, c: int) -> int:
        return self._pack([(x * c) % self.p for x in self._digits[a]])

    def sample_nonzero(self, rng: random.Random) -> int:
        return rng.randrange(1, self.size)

    def sample(self, rng: random.Random) -> int:
        return rng.randrange(self.size)
