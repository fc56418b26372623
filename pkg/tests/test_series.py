import random
from fractions import Fraction

import pytest

from powerops.scalar import CoeffV3, PAdicScalar
from powerops.series import (
    TruncatedSeries,
    divide_by_alpha_power,
    lagrange_invert,
    quotient_normalize,
)

P = 3
K = 8


def var(name, vars=("x", "alpha"), bounds=(10, 12), p=P):
    return TruncatedSeries.variable(p, name, vars, bounds, K)


def const(c, vars=("x", "alpha"), bounds=(10, 12), p=P):
    return TruncatedSeries.constant(p, CoeffV3.from_int(p, c, K), vars, bounds)


def test_mul_examples():
    x, a = var("x"), var("alpha")
    assert (x * a).terms == {(1, 1): CoeffV3.one(P, K)}
    # (x^(p-1) - alpha^(p-1)) * x = x^p - alpha^(p-1) x
    lhs = (x.pow(P - 1) - a.pow(P - 1)) * x
    assert lhs == x.pow(P) - a.pow(P - 1) * x
    f = x * a + x.pow(2) * const(2)
    assert (f - f).is_zero()


def test_bounds_truncate_and_merge():
    x = var("x", bounds=(3, 5))
    assert x.pow(3).is_zero()
    y = var("x", bounds=(5, 5))
    prod = x * y  # min bound applies
    assert prod.bounds == (3, 5)


def test_compose_identity_and_linear():
    vars, bounds = ("y", "alpha"), (8, 8)
    y = TruncatedSeries.variable(P, "y", vars, bounds, K)
    f = y + y.pow(2)
    assert f.substitute("y", y) == f
    two_y = y.mul_int(2)
    assert f.substitute("y", two_y) == two_y + two_y.pow(2)


def test_derivative_examples():
    p = 3
    vars, bounds = ("x",), (p**3 + 2,)
    x = TruncatedSeries.variable(p, "x", vars, bounds, K)
    v3_over_p = CoeffV3.from_v3(PAdicScalar(p, -1, 1, K))
    ell = x + x.pow(p**3).scale(v3_over_p)
    d = ell.derivative("x")
    # derivative of x + (v3/p) x^(p^3) is 1 + p^2 v3 x^(p^3 - 1)
    expected = TruncatedSeries.from_terms(
        p,
        vars,
        (p**3 + 1,),
        {
            (0,): CoeffV3.one(p, K),
            (p**3 - 1,): CoeffV3.from_v3(PAdicScalar.from_int(p, p * p, K)),
        },
    )
    assert d == expected
    xa = TruncatedSeries.variable(p, "x", ("x", "alpha"), (6, 6), K)
    al = TruncatedSeries.variable(p, "alpha", ("x", "alpha"), (6, 6), K)
    assert al.pow(4).derivative("x").is_zero()
    assert (xa * al).derivative("x") == al.with_bounds((5, 6))


def test_derivative_leibniz_random():
    rng = random.Random(7)
    vars, bounds = ("x", "alpha"), (7, 7)
    for _ in range(10):
        f = TruncatedSeries.from_terms(
            P, vars, bounds,
            {(rng.randrange(6), rng.randrange(6)): CoeffV3.from_int(P, rng.randrange(1, 9), K)
             for _ in range(4)},
        )
        g = TruncatedSeries.from_terms(
            P, vars, bounds,
            {(rng.randrange(6), rng.randrange(6)): CoeffV3.from_int(P, rng.randrange(1, 9), K)
             for _ in range(4)},
        )
        fp = f.with_bounds((8, 7)).derivative("x")
        gp = g.with_bounds((8, 7)).derivative("x")
        lhs = (f.with_bounds((8, 7)) * g.with_bounds((8, 7))).derivative("x")
        rhs = fp * g + f * gp
        assert lhs == rhs.with_bounds(lhs.bounds)


def _revert_oracle(coeffs: dict[int, Fraction], order: int) -> list[Fraction]:
    """Residue-formula reversion oracle over exact rationals:

        [y^n] k^(-1) = (1/n) [y^(n-1)] (y / k(y))^n

    kept independent of the package's Newton-iteration implementation."""

    def mul(a, b):
        out = [Fraction(0)] * order
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                if i + j < order:
                    out[i + j] += x * y
        return out

    # y / k(y) = 1 / (1 + c_2 y + c_3 y^2 + ...)
    denom = [Fraction(0)] * order
    denom[0] = Fraction(1)
    for n, c in coeffs.items():
        if n >= 2 and n - 1 < order:
            denom[n - 1] = Fraction(c)
    inv = [Fraction(0)] * order
    inv[0] = Fraction(1)
    for m in range(1, order):
        inv[m] = -sum(denom[j] * inv[m - j] for j in range(1, m + 1))
    out = [Fraction(0), Fraction(1)]
    power = inv[:]  # (y/k)^1
    for n in range(2, order):
        power = mul(power, inv)
        out.append(Fraction(power[n - 1], n))
    return out


def test_lagrange_invert_pinned_example():
    # p=3, chi = -alpha^2: the inverse of y - chi y^3 is
    # y + chi y^3 + 3 chi^2 y^5 + 12 chi^3 y^7 + O(y^9)
    p = 3
    vars, bounds = ("y", "alpha"), (9, 9)
    y = TruncatedSeries.variable(p, "y", vars, bounds, K)
    alpha = TruncatedSeries.variable(p, "alpha", vars, bounds, K)
    chi = -alpha.pow(2)
    k = y - chi * y.pow(3)
    inv = lagrange_invert(k, "y")
    expected = y + chi * y.pow(3) + (chi * chi * y.pow(5)).mul_int(3) + (
        chi.pow(3) * y.pow(7)
    ).mul_int(12)
    assert inv == expected
    # round trips both ways
    yb = TruncatedSeries.variable(p, "y", vars, inv.bounds, K)
    assert k.substitute("y", inv) == yb
    assert inv.substitute("y", k.with_bounds(inv.bounds)) == yb


def test_lagrange_invert_residue_formula_oracle():
    # single-variable random series against the exact rational oracle
    rng = random.Random(11)
    p, order = 5, 9
    coeffs = {n: rng.randrange(0, 7) for n in range(2, 6)}
    oracle = _revert_oracle({n: Fraction(c) for n, c in coeffs.items()}, order)
    vars, bounds = ("y",), (order,)
    y = TruncatedSeries.variable(p, "y", vars, bounds, K)
    k = y
    for n, c in coeffs.items():
        k = k + y.pow(n).mul_int(c)
    inv = lagrange_invert(k, "y")
    for n in range(1, order):
        got = inv.terms.get((n,), CoeffV3.zero(p))
        frac = oracle[n]
        want = PAdicScalar.from_ratio(p, frac.numerator, frac.denominator, K)
        assert got.plain == want or (got.plain.is_zero() and frac == 0)


def test_lagrange_invert_trivial_and_errors():
    vars, bounds = ("y",), (6,)
    y = TruncatedSeries.variable(P, "y", vars, bounds, K)
    assert lagrange_invert(y, "y") == y
    with pytest.raises(ValueError):
        lagrange_invert(y.mul_int(2), "y")
    with pytest.raises(ValueError):
        lagrange_invert(y + TruncatedSeries.one(P, vars, bounds, K), "y")


def test_quotient_normalize_examples():
    p = 3
    vars, bounds = ("alpha",), (p**3 + 2,)
    a = TruncatedSeries.variable(p, "alpha", vars, bounds, K)
    pv3a = a.scale(CoeffV3.from_v3(PAdicScalar.from_int(p, p, K)))
    assert quotient_normalize(pv3a).is_zero()
    # p * alpha rewrites to a v3 term at alpha^(p^3), gone after truncation
    assert quotient_normalize(a.mul_int(p)).is_zero()
    stay = a.pow(p**3 - 1 - 2 * (p - 1)).scale(CoeffV3.from_v3(PAdicScalar.from_int(p, 1, K)))
    n = quotient_normalize(stay)
    assert n.v3 == {p**3 - 1 - 2 * (p - 1): 1} and not n.plain


def test_quotient_normalize_flags_non_integral():
    p = 3
    vars, bounds = ("alpha",), (p**3 + 2,)
    a = TruncatedSeries.variable(p, "alpha", vars, bounds, K)
    bad = a.scale(CoeffV3.from_plain(PAdicScalar.from_ratio(p, 1, p, K)))
    with pytest.raises(ValueError):
        quotient_normalize(bad)


def test_quotient_normalize_idempotent_additive_random():
    p = 3
    rng = random.Random(3)
    vars, bounds = ("alpha",), (p**3 + 2,)
    for _ in range(10):
        f = TruncatedSeries.from_terms(
            p, vars, bounds,
            {(rng.randrange(1, p**3),): CoeffV3(
                PAdicScalar.from_int(p, rng.randrange(0, 27), K),
                PAdicScalar.from_int(p, rng.randrange(0, 27), K))
             for _ in range(6)},
        )
        g = TruncatedSeries.from_terms(
            p, vars, bounds,
            {(rng.randrange(1, p**3),): CoeffV3.from_int(p, rng.randrange(0, 27), K)
             for _ in range(6)},
        )
        nf, ng = quotient_normalize(f), quotient_normalize(g)
        direct = quotient_normalize(f + g)
        resum = quotient_normalize(_as_series(nf, p) + _as_series(ng, p))
        assert direct == resum
        assert quotient_normalize(_as_series(nf, p)) == nf


def _as_series(nf, p):
    terms = {}
    if not nf.constant.is_zero():
        terms[(0,)] = nf.constant
    for k, v in nf.plain.items():
        terms[(k,)] = CoeffV3.from_int(p, v, 4)
    for k, v in nf.v3.items():
        c = CoeffV3.from_v3(PAdicScalar.from_int(p, v, 4))
        terms[(k,)] = terms.get((k,), CoeffV3.zero(p)) + c
    return TruncatedSeries.from_terms(p, ("alpha",), (p**3 + 2,), terms)


def test_divide_by_alpha_power():
    p = 3
    i = 2
    vars, bounds = ("alpha",), (40,)
    a = TruncatedSeries.variable(p, "alpha", vars, bounds, K)
    assert divide_by_alpha_power(a.pow(5), 2) == a.pow(3)
    # exponent arithmetic p^3-1 + i(p-1)(p-2) - i(p-1)^2 = p^3-1 - i(p-1)
    e = p**3 - 1 + i * (p - 1) * (p - 2)
    t = a.pow(e).scale(CoeffV3.from_v3(PAdicScalar.from_int(p, 1, K)))
    q = divide_by_alpha_power(t, i * (p - 1) ** 2)
    assert list(q.terms) == [(p**3 - 1 - i * (p - 1),)]
    with pytest.raises(ValueError):
        divide_by_alpha_power(TruncatedSeries.one(p, vars, bounds, K) + a, 1)


def test_mul_commutative_associative_random():
    rng = random.Random(5)
    vars, bounds = ("x", "alpha"), (6, 6)
    def rand():
        return TruncatedSeries.from_terms(
            P, vars, bounds,
            {(rng.randrange(5), rng.randrange(5)): CoeffV3.from_int(P, rng.randrange(1, 9), K)
             for _ in range(4)},
        )
    for _ in range(10):
        f, g, h = rand(), rand(), rand()
        assert f * g == g * f
        assert (f * g) * h == f * (g * h)
