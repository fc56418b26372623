import random

import pytest

from powerops.fgl import FormalGroupLaw, Logarithm
from powerops.scalar import CoeffV3, PAdicScalar, primitive_teichmuller_root
from powerops.series import TruncatedSeries

K = 8


def test_additive_law_addition_series():
    F = FormalGroupLaw.additive(3, K)
    add = F.addition_series(5, 5)
    vars, bounds = ("x", "y"), (5, 5)
    x = TruncatedSeries.variable(3, "x", vars, bounds, K)
    y = TruncatedSeries.variable(3, "y", vars, bounds, K)
    assert add == x + y


def test_target_law_addition_series_closed_form():
    # F = x + y + (v3/p)(x^(p^3) + y^(p^3) - (x+y)^(p^3)) at small x bound
    p = 3
    F = FormalGroupLaw.v3_truncated(p, K)
    xb, yb = 3, p**3 + 2
    add = F.addition_series(xb, yb)
    vars, bounds = ("x", "y"), (xb, yb)
    x = TruncatedSeries.variable(p, "x", vars, bounds, K)
    y = TruncatedSeries.variable(p, "y", vars, bounds, K)
    v3_over_p = CoeffV3.from_v3(PAdicScalar(p, -1, 1, K))
    closed = x + y + (
        x.pow(p**3) + y.pow(p**3) - (x + y).pow(p**3)
    ).scale(v3_over_p)
    assert add == closed
    # coefficient of x y^(p^3-1): -(v3/p) C(p^3, 1) = -p^2 v3
    c = add.terms[(1, p**3 - 1)]
    assert c.plain.is_zero()
    assert c.v3part == PAdicScalar.from_int(p, -(p * p), K)
    # all coefficients integral
    assert all(
        (t.plain.is_zero() or t.plain.valuation >= 0)
        and (t.v3part.is_zero() or t.v3part.valuation >= 0)
        for t in add.terms.values()
    )


def test_log_functional_equation():
    p = 3
    F = FormalGroupLaw.v3_truncated(p, K)
    vars, bounds = ("x", "y"), (4, p**3 + 4)
    x = TruncatedSeries.variable(p, "x", vars, bounds, K)
    y = TruncatedSeries.variable(p, "y", vars, bounds, K)
    s = F.formal_sum(x, y)
    assert F.log.series(s) == F.log.series(x) + F.log.series(y)


def test_scalar_series_examples():
    p = 3
    F = FormalGroupLaw.v3_truncated(p, K)
    b = p**3 + 2
    x = TruncatedSeries.variable(p, "x", ("x",), (b,), K)
    assert F.scalar_series(1, "x", b) == x
    # [w^i](x) = w^i x exactly for the p-typical target law
    for i in range(1, p):
        wi = F.omega.power(i)
        assert F.scalar_series(wi, "x", b) == x.scale_scalar(wi)
    # [p](x) = px - (p^(p^3-1) - 1) v3 x^(p^3)
    ps = F.p_series("x", b)
    expected = x.mul_int(p) + x.pow(p**3).scale(
        CoeffV3.from_v3(PAdicScalar.from_int(p, 1 - p ** (p**3 - 1), K))
    )
    assert ps == expected


def test_angle_p_series():
    p = 3
    F = FormalGroupLaw.v3_truncated(p, K)
    angle = F.angle_p_series()
    a = TruncatedSeries.variable(p, "alpha", ("alpha",), angle.bounds, K)
    expected = TruncatedSeries.one(p, ("alpha",), angle.bounds, K).mul_int(p) + a.pow(
        p**3 - 1
    ).scale(CoeffV3.from_v3(PAdicScalar.from_int(p, 1 - p ** (p**3 - 1), K)))
    assert angle == expected
    # <p> * alpha = [p](alpha)
    assert angle * a == F.p_series("alpha")
    assert FormalGroupLaw.additive(p, K).angle_p_series() == TruncatedSeries.one(
        p, ("alpha",), (p**3 + p,), K
    ).mul_int(p)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_euler_class(p):
    F = FormalGroupLaw.v3_truncated(p, K)
    chi = F.euler_class()
    a = TruncatedSeries.variable(p, "alpha", ("alpha",), chi.bounds, K)
    assert chi == -a.pow(p - 1)
    # additive law with the same roots of unity gives the same product
    assert FormalGroupLaw.additive(p, K).euler_class() == -a.pow(p - 1)


def test_euler_class_p3_direct_product_oracle():
    # p=3: omega = 8 mod 3^K, chi = (omega a)(omega^2 a) = omega^3 a^2 = -a^2
    p, Kp = 3, 6
    w = primitive_teichmuller_root(p, Kp)
    prod = (w.omega * w.omega * w.omega).unit
    assert prod % p**Kp == p**Kp - 1  # omega^3 = -1


def test_fgl_axioms_target_law():
    p = 3
    F = FormalGroupLaw.v3_truncated(p, K)
    vars, bounds = ("x", "y", "z"), (4, 4, 4)
    x = TruncatedSeries.variable(p, "x", vars, bounds, K)
    y = TruncatedSeries.variable(p, "y", vars, bounds, K)
    z = TruncatedSeries.variable(p, "z", vars, bounds, K)
    zero = TruncatedSeries.zero(p, vars, bounds)
    assert F.formal_sum(x, zero) == x
    assert F.formal_sum(x, y) == F.formal_sum(y, x)
    assert F.formal_sum(F.formal_sum(x, y), z) == F.formal_sum(x, F.formal_sum(y, z))


def test_scalar_series_additive_in_scalar():
    p = 3
    F = FormalGroupLaw.v3_truncated(p, K)
    rng = random.Random(2)
    b = p**3 + 2
    for _ in range(4):
        m, n = rng.randrange(1, 4), rng.randrange(1, 4)
        lhs = F.scalar_series(m + n, "x", b)
        a1 = F.scalar_series(m, "x", b)
        a2 = F.scalar_series(n, "x", b)
        assert lhs == F.formal_sum(a1, a2)


def test_logarithm_requires_unit_linear_term():
    with pytest.raises(ValueError):
        Logarithm(3, K, {1: CoeffV3.from_int(3, 2, K)})


def test_addition_series_flags_wrong_logarithm():
    # a log with a bare 1/p coefficient is not a law over the integral ring
    p = 3
    coeffs = {
        1: CoeffV3.one(p, K),
        2: CoeffV3.from_plain(PAdicScalar.from_ratio(p, 1, p, K)),
    }
    bad = FormalGroupLaw(p, Logarithm(p, K, coeffs), primitive_teichmuller_root(p, K), K)
    with pytest.raises(ArithmeticError):
        bad.addition_series(4, 4)


def test_log_composed_with_inverse_is_identity():
    p = 3
    log = Logarithm.v3_deformation(p, K)
    bound = p**3 + 4
    inv = log.inverse_series("z", ("z",), (bound,))
    assert log.series(inv) == TruncatedSeries.variable(p, "z", ("z",), (bound,), K)
    # the inverse of x + (v3/p) x^(p^3) is x - (v3/p) x^(p^3) exactly
    z = TruncatedSeries.variable(p, "z", ("z",), (bound,), K)
    v3_over_p = CoeffV3.from_v3(PAdicScalar(p, -1, 1, K))
    assert inv == z - z.pow(p**3).scale(v3_over_p)
