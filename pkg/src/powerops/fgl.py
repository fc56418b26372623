"""Formal group laws presented by their logarithms over Z_p[v3]/(v3^2).

The target law has logarithm x + (v3/p) x^(p^3) (a p-typical logarithm with a
single correction term), so its p-series is

    p*x - (p^(p^3-1) - 1) * v3 * x^(p^3)

and, because p^3 = 1 mod (p-1), the (p-1)st roots of unity act linearly:
[w^i](x) = w^i * x.  The additive law is kept as a second built-in for
oracle tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .scalar import (
    DEFAULT_PRECISION,
    CoeffV3,
    PAdicScalar,
    TeichmullerRoot,
    primitive_teichmuller_root,
)
from .series import TruncatedSeries, lagrange_invert

__all__ = ["Logarithm", "FormalGroupLaw"]


@dataclass(frozen=True)
class Logarithm:
    """Coefficients m_n of x^n with m_1 = 1 (sparse; only nonzero entries)."""

    p: int
    prec: int
    coeffs: dict[int, CoeffV3]

    def __post_init__(self):
        one = CoeffV3.one(self.p, self.prec)
        if self.coeffs.get(1) != one:
            raise ValueError("a logarithm must have linear coefficient 1")

    @classmethod
    def additive(cls, p: int, prec: int = DEFAULT_PRECISION) -> "Logarithm":
        return cls(p, prec, {1: CoeffV3.one(p, prec)})

    @classmethod
    def v3_deformation(cls, p: int, prec: int = DEFAULT_PRECISION) -> "Logarithm":
        """x + (v3/p) x^(p^3), the logarithm of the target law."""
        v3_over_p = CoeffV3.from_v3(PAdicScalar(p, -1, 1, prec))
        return cls(p, prec, {1: CoeffV3.one(p, prec), p**3: v3_over_p})

    def series(self, f: TruncatedSeries) -> TruncatedSeries:
        """Apply the logarithm to a series with zero constant term."""
        if not f.constant_term().is_zero():
            raise ValueError("logarithm needs zero constant term")
        out = TruncatedSeries.zero(f.p, f.vars, f.bounds)
        for n in sorted(self.coeffs):
            c = self.coeffs[n]
            out = out + f.pow(n).scale(c)
        return out

    def inverse_series(self, var: str, vars: tuple[str, ...], bounds: tuple[int, ...]) -> TruncatedSeries:
        """exp = log^(-1) as a series in `var` to the given bounds."""
        ell = TruncatedSeries.from_terms(
            self.p,
            vars,
            bounds,
            {
                tuple(n if v == var else 0 for v in vars): c
                for n, c in self.coeffs.items()
            },
        )
        return lagrange_invert(ell, var)


@dataclass
class FormalGroupLaw:
    """A formal group law with cached n-series, angle-p series and Euler class.

    Default truncation: x and y at degree p^2, alpha at degree p^3 + p.
    Pipelines that divide by higher powers of the Euler class pass wider
    alpha bounds explicitly.
    """

    p: int
    log: Logarithm
    omega: TeichmullerRoot
    prec: int = DEFAULT_PRECISION
    x_bound: int = 0
    alpha_bound: int = 0
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.x_bound == 0:
            self.x_bound = self.p**2
        if self.alpha_bound == 0:
            self.alpha_bound = self.p**3 + self.p

    @classmethod
    def v3_truncated(
        cls,
        p: int,
        prec: int = DEFAULT_PRECISION,
        x_bound: int = 0,
        alpha_bound: int = 0,
    ) -> "FormalGroupLaw":
        return cls(
            p,
            Logarithm.v3_deformation(p, prec),
            primitive_teichmuller_root(p, prec),
            prec,
            x_bound,
            alpha_bound,
        )

    @classmethod
    def additive(
        cls,
        p: int,
        prec: int = DEFAULT_PRECISION,
        x_bound: int = 0,
        alpha_bound: int = 0,
    ) -> "FormalGroupLaw":
        return cls(
            p,
            Logarithm.additive(p, prec),
            primitive_teichmuller_root(p, prec),
            prec,
            x_bound,
            alpha_bound,
        )

    # -- helpers -------------------------------------------------------------

    def _exp(self, vars: tuple[str, ...], bounds: tuple[int, ...]) -> TruncatedSeries:
        """log^(-1) in an auxiliary variable wide enough for any substitution."""
        key = ("exp", vars, bounds)
        if key not in self._cache:
            zbound = sum(bounds) - len(bounds) + 2
            aux = self.log.inverse_series("_z", ("_z",), (zbound,))
            self._cache[key] = (aux, zbound)
        return self._cache[key]

    def exp_of(self, u: TruncatedSeries) -> TruncatedSeries:
        """Evaluate log^(-1) on a series with zero constant term."""
        aux, zbound = self._exp(u.vars, u.bounds)
        # widen the auxiliary series onto u's variables, then substitute
        lifted = TruncatedSeries.from_terms(
            self.p,
            ("_z",) + u.vars,
            (zbound,) + u.bounds,
            {(k,) + (0,) * len(u.vars): c for (k,), c in aux.terms.items()},
        )
        wide_u = TruncatedSeries.from_terms(
            self.p,
            ("_z",) + u.vars,
            (zbound,) + u.bounds,
            {(0,) + e: c for e, c in u.terms.items()},
        )
        result = lifted.substitute("_z", wide_u)
        return TruncatedSeries.from_terms(
            self.p, u.vars, u.bounds, {e[1:]: c for e, c in result.terms.items()}
        )

    def formal_sum(self, a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
        """a +_F b = exp(log(a) + log(b)) for series with zero constant term."""
        return self.exp_of(self.log.series(a) + self.log.series(b))

    # -- the named series ------------------------------------------------------

    def addition_series(self, x_bound: int | None = None, y_bound: int | None = None) -> TruncatedSeries:
        """F(x, y) with F(x,0) = x, F = exp(log x + log y).

        The denominators introduced by the logarithm must cancel; a
        non-integral coefficient means the logarithm does not present a
        formal group law over the integral coefficient ring.
        """
        xb = x_bound or self.x_bound
        yb = y_bound or self.x_bound
        key = ("F", xb, yb)
        if key not in self._cache:
            vars, bounds = ("x", "y"), (xb, yb)
            x = TruncatedSeries.variable(self.p, "x", vars, bounds, self.prec)
            y = TruncatedSeries.variable(self.p, "y", vars, bounds, self.prec)
            F = self.formal_sum(x, y)
            for exp, c in F.terms.items():
                if (not c.plain.is_zero() and c.plain.valuation < 0) or (
                    not c.v3part.is_zero() and c.v3part.valuation < 0
                ):
                    raise ArithmeticError(
                        f"non-integral coefficient at {exp}: wrong logarithm"
                    )
            self._cache[key] = F
        return self._cache[key]

    def scalar_series(
        self,
        c: PAdicScalar | int,
        var: str = "x",
        bound: int | None = None,
    ) -> TruncatedSeries:
        """[c](x) = exp(c * log(x)); an integer c gives the usual n-series."""
        if isinstance(c, int):
            c = PAdicScalar.from_int(self.p, c, self.prec)
        b = bound or self.alpha_bound
        key = ("scalar", var, b, c.valuation, c.unit if not c.is_zero() else 0)
        if key not in self._cache:
            x = TruncatedSeries.variable(self.p, var, (var,), (b,), self.prec)
            self._cache[key] = self.exp_of(self.log.series(x).scale_scalar(c))
        return self._cache[key]

    def p_series(self, var: str = "alpha", bound: int | None = None) -> TruncatedSeries:
        return self.scalar_series(self.p, var, bound)

    def angle_p_series(self, var: str = "alpha", bound: int | None = None) -> TruncatedSeries:
        """[p](x) / x, an exact division."""
        key = ("angle", var, bound or self.alpha_bound)
        if key not in self._cache:
            ps = self.p_series(var, bound)
            i = ps.index(var)
            out = {}
            for exp, c in ps.terms.items():
                out[exp[:i] + (exp[i] - 1,) + exp[i + 1 :]] = c
            self._cache[key] = TruncatedSeries(ps.vars, ps.bounds, out, self.p)
        return self._cache[key]

    def euler_class(self, var: str = "alpha", bound: int | None = None) -> TruncatedSeries:
        """prod_{i=1}^{p-1} [w^i](alpha), the Euler class of the reduced
        regular representation of the order-p cyclic group."""
        key = ("euler", var, bound or self.alpha_bound)
        if key not in self._cache:
            b = bound or self.alpha_bound
            out = TruncatedSeries.one(self.p, (var,), (b,), self.prec)
            for i in range(1, self.p):
                out = out * self.scalar_series(self.omega.power(i), var, b)
            self._cache[key] = out
        return self._cache[key]
