"""Sparse truncated multivariate power series over Z_p[v3]/(v3^2).

Terms live in a dict mapping exponent tuples to CoeffV3 coefficients; a term
whose exponent reaches the per-variable bound is identically discarded, so a
series is understood modulo those powers.  Binary operations take the
componentwise minimum of the operand bounds.

Composition, multiplicative inverse and series reversion split every series
into plain + v3 * (v3 part); since v3^2 = 0 the expensive inner loops only
ever run on plain series, which stay tiny in this pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .scalar import CoeffV3, PAdicScalar

__all__ = [
    "TruncatedSeries",
    "QuotientNormalForm",
    "quotient_normalize",
    "divide_by_alpha_power",
]


@dataclass(frozen=True, repr=False)
class TruncatedSeries:
    vars: tuple[str, ...]
    bounds: tuple[int, ...]
    terms: dict[tuple[int, ...], CoeffV3]
    p: int

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for exp in sorted(self.terms, key=lambda e: (sum(e), e))[:8]:
            mono = "*".join(
                f"{v}^{k}" if k > 1 else v
                for v, k in zip(self.vars, exp)
                if k
            ) or "1"
            bits.append(f"({self.terms[exp]!r})*{mono}")
        tail = " + ..." if len(self.terms) > 8 else ""
        return " + ".join(bits) + tail

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, p: int, vars: tuple[str, ...], bounds: tuple[int, ...]) -> "TruncatedSeries":
        return cls(vars, tuple(bounds), {}, p)

    @classmethod
    def constant(
        cls, p: int, c: CoeffV3, vars: tuple[str, ...], bounds: tuple[int, ...]
    ) -> "TruncatedSeries":
        zero_exp = (0,) * len(vars)
        terms = {} if c.is_zero() else {zero_exp: c}
        return cls(vars, tuple(bounds), terms, p)

    @classmethod
    def one(cls, p: int, vars: tuple[str, ...], bounds: tuple[int, ...], prec: int) -> "TruncatedSeries":
        return cls.constant(p, CoeffV3.one(p, prec), vars, bounds)

    @classmethod
    def variable(
        cls,
        p: int,
        name: str,
        vars: tuple[str, ...],
        bounds: tuple[int, ...],
        prec: int,
    ) -> "TruncatedSeries":
        i = vars.index(name)
        exp = tuple(1 if j == i else 0 for j in range(len(vars)))
        if bounds[i] <= 1:
            return cls.zero(p, vars, bounds)
        return cls(vars, tuple(bounds), {exp: CoeffV3.one(p, prec)}, p)

    @classmethod
    def from_terms(
        cls,
        p: int,
        vars: tuple[str, ...],
        bounds: tuple[int, ...],
        items: Mapping[tuple[int, ...], CoeffV3] | Iterable[tuple[tuple[int, ...], CoeffV3]],
    ) -> "TruncatedSeries":
        out: dict[tuple[int, ...], CoeffV3] = {}
        pairs = items.items() if isinstance(items, Mapping) else items
        for exp, c in pairs:
            if c.is_zero():
                continue
            if any(e >= b for e, b in zip(exp, bounds)):
                continue
            if exp in out:
                c = out[exp] + c
                if c.is_zero():
                    del out[exp]
                    continue
            out[exp] = c
        return cls(vars, tuple(bounds), out, p)

    # -- bookkeeping -------------------------------------------------------

    def index(self, var: str) -> int:
        return self.vars.index(var)

    def with_bounds(self, bounds: tuple[int, ...]) -> "TruncatedSeries":
        return TruncatedSeries.from_terms(self.p, self.vars, bounds, self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, var: str, k: int) -> "TruncatedSeries":
        """Coefficient of var^k, as a series with that exponent zeroed."""
        i = self.index(var)
        out = {}
        for exp, c in self.terms.items():
            if exp[i] == k:
                out[exp[:i] + (0,) + exp[i + 1 :]] = c
        return TruncatedSeries(self.vars, self.bounds, out, self.p)

    def constant_term(self) -> CoeffV3:
        return self.terms.get((0,) * len(self.vars), CoeffV3.zero(self.p))

    def slots(self, var: str) -> dict[int, "TruncatedSeries"]:
        """Decompose as sum_k var^k * c_k(other vars)."""
        i = self.index(var)
        buckets: dict[int, dict] = {}
        for exp, c in self.terms.items():
            buckets.setdefault(exp[i], {})[exp[:i] + (0,) + exp[i + 1 :]] = c
        return {
            k: TruncatedSeries(self.vars, self.bounds, d, self.p) for k, d in buckets.items()
        }

    def degrees(self, var: str) -> set[int]:
        i = self.index(var)
        return {exp[i] for exp in self.terms}

    # -- v3 splitting ------------------------------------------------------

    def plain_part(self) -> "TruncatedSeries":
        out = {}
        for exp, c in self.terms.items():
            if not c.plain.is_zero():
                out[exp] = CoeffV3.from_plain(c.plain)
        return TruncatedSeries(self.vars, self.bounds, out, self.p)

    def v3_part(self) -> "TruncatedSeries":
        """Series of v3-coefficients (returned as plain coefficients)."""
        out = {}
        for exp, c in self.terms.items():
            if not c.v3part.is_zero():
                out[exp] = CoeffV3.from_plain(c.v3part)
        return TruncatedSeries(self.vars, self.bounds, out, self.p)

    def times_v3(self) -> "TruncatedSeries":
        out = {}
        for exp, c in self.terms.items():
            t = c.times_v3()
            if not t.is_zero():
                out[exp] = t
        return TruncatedSeries(self.vars, self.bounds, out, self.p)

    # -- ring operations ---------------------------------------------------

    def _merge_bounds(self, other: "TruncatedSeries") -> tuple[int, ...]:
        if self.vars != other.vars:
            raise ValueError(f"incompatible variable sets {self.vars} vs {other.vars}")
        return tuple(min(a, b) for a, b in zip(self.bounds, other.bounds))

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        bounds = self._merge_bounds(other)
        out = dict(self.terms)
        for exp, c in other.terms.items():
            if exp in out:
                s = out[exp] + c
                if s.is_zero():
                    del out[exp]
                else:
                    out[exp] = s
            else:
                out[exp] = c
        return TruncatedSeries.from_terms(self.p, self.vars, bounds, out)

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(
            self.vars, self.bounds, {e: -c for e, c in self.terms.items()}, self.p
        )

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return self + (-other)

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        bounds = self._merge_bounds(other)
        out: dict[tuple[int, ...], CoeffV3] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                if any(e >= b for e, b in zip(exp, bounds)):
                    continue
                c = c1 * c2
                if c.is_zero():
                    continue
                if exp in out:
                    c = out[exp] + c
                    if c.is_zero():
                        del out[exp]
                        continue
                out[exp] = c
        return TruncatedSeries(self.vars, bounds, out, self.p)

    def scale(self, c: CoeffV3) -> "TruncatedSeries":
        out = {}
        for exp, a in self.terms.items():
            v = a * c
            if not v.is_zero():
                out[exp] = v
        return TruncatedSeries(self.vars, self.bounds, out, self.p)

    def scale_scalar(self, a: PAdicScalar) -> "TruncatedSeries":
        return self.scale(CoeffV3.from_plain(a))

    def mul_int(self, n: int) -> "TruncatedSeries":
        out = {}
        for exp, c in self.terms.items():
            v = c.mul_int(n)
            if not v.is_zero():
                out[exp] = v
        return TruncatedSeries(self.vars, self.bounds, out, self.p)

    def pow(self, n: int) -> "TruncatedSeries":
        if n < 0:
            raise ValueError("negative power")
        result = TruncatedSeries.one(self.p, self.vars, self.bounds, _prec_of(self))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def shift(self, var: str, k: int) -> "TruncatedSeries":
        """Multiply by var^k (k may not be negative; see divide_by_alpha_power)."""
        i = self.index(var)
        out = {}
        for exp, c in self.terms.items():
            e = exp[:i] + (exp[i] + k,) + exp[i + 1 :]
            if e[i] < self.bounds[i]:
                out[e] = c
        return TruncatedSeries(self.vars, self.bounds, out, self.p)

    # -- calculus ----------------------------------------------------------

    def derivative(self, var: str) -> "TruncatedSeries":
        """Formal partial derivative; the bound in `var` drops by one."""
        i = self.index(var)
        bounds = tuple(b - 1 if j == i and b > 0 else b for j, b in enumerate(self.bounds))
        out = {}
        for exp, c in self.terms.items():
            n = exp[i]
            if n == 0:
                continue
            v = c.mul_int(n)
            if v.is_zero():
                continue
            out[exp[:i] + (n - 1,) + exp[i + 1 :]] = v
        return TruncatedSeries.from_terms(self.p, self.vars, bounds, out)

    # -- composition and inversion ------------------------------------------

    def substitute(self, var: str, g: "TruncatedSeries") -> "TruncatedSeries":
        """Substitute `var := g`, other variables passing through.

        Requires g to share this series' variable tuple and have zero
        constant term.  Correct modulo the bounds of g, provided this
        series' bound in `var` covers the needed powers.
        """
        if self.vars != g.vars:
            raise ValueError("incompatible variable sets")
        if not g.constant_term().is_zero():
            raise ValueError("substitution requires zero constant term")
        f0, f1 = self.plain_part(), self.v3_part()
        g0, g1 = g.plain_part(), g.v3_part()
        out = _substitute_plain(f0, var, g0)
        if f1.terms:
            out = out + _substitute_plain(f1, var, g0).times_v3()
        if g1.terms:
            df0 = f0.derivative(var).with_bounds(g.bounds)
            out = out + (_substitute_plain(df0, var, g0) * g1).times_v3()
        return out

    def inverse(self) -> "TruncatedSeries":
        """Multiplicative inverse; the constant term must be a unit."""
        c0 = self.constant_term()
        if c0.plain.is_zero():
            raise ValueError("constant term is not a unit")
        f0, f1 = self.plain_part(), self.v3_part()
        inv0 = _inverse_plain(f0)
        out = inv0
        if f1.terms:
            out = out - (inv0 * inv0 * f1).times_v3()
        return out


def series_precision(f: TruncatedSeries) -> int:
    """Tracked precision of the first nonzero coefficient (default if none)."""
    for c in f.terms.values():
        if not c.plain.is_zero():
            return c.plain.prec
        if not c.v3part.is_zero():
            return c.v3part.prec
    from .scalar import DEFAULT_PRECISION

    return DEFAULT_PRECISION


_prec_of = series_precision


def _substitute_plain(f: TruncatedSeries, var: str, g: TruncatedSeries) -> TruncatedSeries:
    """f(var := g) for plain series, by a power ladder over the sparse slots."""
    slots = f.slots(var)
    out = TruncatedSeries.zero(f.p, g.vars, g.bounds)
    if not slots:
        return out
    prec = max(_prec_of(f), _prec_of(g))
    power = TruncatedSeries.one(f.p, g.vars, g.bounds, prec)
    prev = 0
    for k in sorted(slots):
        power = power * g.pow(k - prev) if k != prev else power
        prev = k
        out = out + slots[k].with_bounds(g.bounds) * power
    return out


def _inverse_plain(f: TruncatedSeries) -> TruncatedSeries:
    c0 = f.constant_term().plain
    prec = _prec_of(f)
    one = TruncatedSeries.one(f.p, f.vars, f.bounds, prec)
    v = TruncatedSeries.constant(
        f.p, CoeffV3.from_plain(PAdicScalar.from_int(f.p, 1, prec) / c0), f.vars, f.bounds
    )
    # Newton iteration v <- v(2 - f v), quadratic convergence
    limit = sum(f.bounds).bit_length() + 2
    for _ in range(limit):
        e = one - f * v
        if e.is_zero():
            break
        v = v + v * e
    return v


def lagrange_invert(k: TruncatedSeries, var: str = "y") -> TruncatedSeries:
    """Compositional inverse of k in `var`: k(invert(k)) = var to bounds.

    Requires zero constant term and linear coefficient exactly 1.  The plain
    part is reverted by Newton iteration on composition; the v3 correction is
    r1 = -(k1 o r0) / (k0' o r0), exact because v3^2 = 0.
    """
    i = k.index(var)
    lin = tuple(1 if j == i else 0 for j in range(len(k.vars)))
    if not k.constant_term().is_zero():
        raise ValueError("reversion requires zero constant term")
    c1 = k.terms.get(lin, CoeffV3.zero(k.p))
    if not (c1.v3part.is_zero() and c1.plain == PAdicScalar.from_int(k.p, 1, max(c1.plain.prec, 1))):
        raise ValueError("reversion requires linear coefficient 1")
    prec = _prec_of(k)
    # headroom so that the derivative below does not lose the top slot
    padded = tuple(b + 1 if j == i else b for j, b in enumerate(k.bounds))
    kp = k.with_bounds(padded)
    k0, k1 = kp.plain_part(), kp.v3_part()
    y = TruncatedSeries.variable(k.p, var, k.vars, k.bounds, prec)
    r0 = _revert_plain(k0.with_bounds(k.bounds), var, y)
    dk0 = k0.derivative(var).with_bounds(k.bounds)
    out = r0
    if k1.terms:
        denom = _inverse_plain(_substitute_plain(dk0, var, r0))
        r1 = -(_substitute_plain(k1.with_bounds(k.bounds), var, r0) * denom)
        out = out + r1.times_v3()
    return out


def _revert_plain(k0: TruncatedSeries, var: str, y: TruncatedSeries) -> TruncatedSeries:
    i = k0.index(var)
    dk0 = k0.with_bounds(
        tuple(b + 1 if j == i else b for j, b in enumerate(k0.bounds))
    ).derivative(var).with_bounds(k0.bounds)
    g = y
    limit = k0.bounds[i].bit_length() + 2
    for _ in range(limit):
        e = _substitute_plain(k0, var, g) - y
        if e.is_zero():
            break
        g = g - e * _inverse_plain(_substitute_plain(dk0, var, g))
    else:
        raise ArithmeticError("reversion did not converge")
    return g


def divide_by_alpha_power(f: TruncatedSeries, m: int, var: str = "alpha") -> TruncatedSeries:
    """Exact division by var^m; every term must have var-exponent >= m."""
    if m < 0:
        raise ValueError("negative shift")
    i = f.index(var)
    out = {}
    for exp, c in f.terms.items():
        if exp[i] < m:
            raise ValueError(f"term with {var}-exponent {exp[i]} < {m}: not divisible")
        out[exp[:i] + (exp[i] - m,) + exp[i + 1 :]] = c
    return TruncatedSeries(f.vars, f.bounds, out, f.p)


# ---------------------------------------------------------------------------
# Normal form in R[[alpha]] / (p alpha - (p^(p^3-1) - 1) v3 alpha^(p^3))
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuotientNormalForm:
    """Canonical representative modulo the p-series of the target law.

    For alpha-degree >= 1 both components of each coefficient are reduced to
    {0, ..., p-1}; the rewriting rules are p*v3*alpha^k = 0 and
    p*c*alpha^k -> -c*v3*alpha^(k + p^3 - 1), iterated, then truncation at
    alpha^(p^3).  The constant term is kept at full precision.
    """

    p: int
    constant: CoeffV3
    plain: dict[int, int]
    v3: dict[int, int]

    def is_zero(self) -> bool:
        return self.constant.is_zero() and not self.plain and not self.v3

    def coefficient(self, k: int) -> CoeffV3:
        """Coefficient of alpha^k; for k >= 1 a mod-p representative."""
        if k == 0:
            return self.constant
        return CoeffV3(
            PAdicScalar.from_int(self.p, self.plain.get(k, 0), 1),
            PAdicScalar.from_int(self.p, self.v3.get(k, 0), 1),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QuotientNormalForm):
            return NotImplemented
        return (
            self.p == other.p
            and self.constant == other.constant
            and self.plain == other.plain
            and self.v3 == other.v3
        )

    __hash__ = None

    def render(self) -> str:
        """Human-readable form with signed residues, e.g. '-v3 * alpha^104'."""
        if self.is_zero():
            return "0"
        items: list[tuple[bool, str]] = []
        if not self.constant.is_zero():
            items.append((False, repr(self.constant)))
        for k in sorted(set(self.plain) | set(self.v3)):
            for table, marker in ((self.plain, ""), (self.v3, "v3 * ")):
                r = table.get(k, 0)
                if r == 0:
                    continue
                signed = r if r <= (self.p - 1) // 2 else r - self.p
                coeff = "" if abs(signed) == 1 else f"{abs(signed)} * "
                items.append((signed < 0, f"{coeff}{marker}alpha^{k}"))
        out = ""
        for i, (neg, term) in enumerate(items):
            if i == 0:
                out = ("-" if neg else "") + term
            else:
                out += (" - " if neg else " + ") + term
        return out


def quotient_normalize(f: TruncatedSeries, law=None) -> QuotientNormalForm:
    """Reduce an alpha-only series to its quotient normal form.

    `law` may be the formal group law (its prime fixes the truncation
    exponent p^3), the exponent itself, or omitted.  Raises on any
    coefficient of negative valuation (the element would not be integral,
    which signals an upstream error).
    """
    p = f.p
    if law is None:
        p3 = p**3
    elif isinstance(law, int):
        p3 = law
    else:
        p3 = law.p**3
    ia = f.index("alpha")
    constant = CoeffV3.zero(p)
    plain: dict[int, int] = {}
    v3: dict[int, int] = {}
    for exp, c in f.terms.items():
        for j, e in enumerate(exp):
            if j != ia and e != 0:
                raise ValueError("quotient normal form requires an alpha-only series")
        k = exp[ia]
        if k == 0:
            constant = constant + c
            continue
        if not c.plain.is_zero():
            if c.plain.valuation < 0:
                raise ValueError(f"non-integral plain coefficient at alpha^{k}")
            if k < p3:
                r = c.plain.residue()
                if r:
                    plain[k] = (plain.get(k, 0) + r) % p
                    if plain[k] == 0:
                        del plain[k]
            # the excess p * c1 * alpha^k rewrites to -c1 * v3 * alpha^(k+p3-1),
            # which lies at or beyond alpha^p3 for k >= 1 and is truncated
        if not c.v3part.is_zero():
            if c.v3part.valuation < 0:
                raise ValueError(f"non-integral v3 coefficient at alpha^{k}")
            if k < p3:
                r = c.v3part.residue()
                if r:
                    v3[k] = (v3.get(k, 0) + r) % p
                    if v3[k] == 0:
                        del v3[k]
    return QuotientNormalForm(p, constant, plain, v3)
