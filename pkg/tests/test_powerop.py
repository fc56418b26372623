import math
import time

import pytest

from powerops.fgl import FormalGroupLaw
from powerops.powerop import (
    f_coefficient,
    g_series,
    h_polynomial,
    isogeny_derivative_check,
    isogeny_log_additivity_check,
    k_series,
    power_operation_value,
    psi_coefficient_lift,
    reduce_g_mod_p_series,
    run_pipeline,
    sigma_dl_coefficient,
)
from powerops.scalar import CoeffV3, PAdicScalar
from powerops.series import TruncatedSeries

K = 8


def _monomial(p, vars, bounds, exp, coeff):
    return TruncatedSeries.from_terms(p, vars, bounds, {exp: coeff})


@pytest.fixture(scope="module")
def trace3():
    p = 3
    F = FormalGroupLaw.v3_truncated(p, K, x_bound=p**2, alpha_bound=p**3 + p * (p - 1) ** 2 + 1)
    return F, run_pipeline(F)


def test_g_series_structure(trace3):
    F, tr = trace3
    p = F.p
    g = tr.g
    # plain part is exactly chi*x + x^p = x^p - alpha^(p-1) x
    plain = g.plain_part()
    x = TruncatedSeries.variable(p, "x", g.vars, g.bounds, K)
    a = TruncatedSeries.variable(p, "alpha", g.vars, g.bounds, K)
    assert plain == x.pow(p) - a.pow(p - 1) * x
    # x^1 coefficient is chi exactly: the v3 correction cancels by the
    # vanishing of the root-of-unity sum
    c1 = g.coefficient("x", 1)
    assert all(c.v3part.is_zero() for c in c1.terms.values())
    # quotient reduction kills every v3 term: g = chi x + x^p + O(x^(p^2))
    assert reduce_g_mod_p_series(g) == plain


def test_g_series_additive_law():
    p = 3
    F = FormalGroupLaw.additive(p, K)
    g = g_series(F, 6, 10)
    x = TruncatedSeries.variable(p, "x", g.vars, g.bounds, K)
    a = TruncatedSeries.variable(p, "alpha", g.vars, g.bounds, K)
    assert g == x * (x.pow(p - 1) - a.pow(p - 1))


def test_k_series_golden(trace3):
    F, tr = trace3
    p = F.p
    k = tr.k
    # k = y - alpha^((p-1)(p-2)) y^p + v3 corrections + O(y^(p^2))
    y = TruncatedSeries.variable(p, "y", k.vars, k.bounds, K)
    a = TruncatedSeries.variable(p, "alpha", k.vars, k.bounds, K)
    assert k.plain_part() == y - a.pow((p - 1) * (p - 2)) * y.pow(p)
    assert k.terms[(1,) + (0,) * (len(k.vars) - 1)] == CoeffV3.one(p, K)


def test_k_inverse_golden_and_roundtrip(trace3):
    F, tr = trace3
    p = F.p
    kinv = tr.k_inverse
    # plain coefficients: [y^(n(p-1)+1)] = C(np,n)/(n(p-1)+1) alpha^(n(p-2)(p-1))
    for n in range(1, p + 1):
        deg = n * (p - 1) + 1
        c = math.comb(n * p, n) // 1
        want = PAdicScalar.from_ratio(p, math.comb(n * p, n), n * (p - 1) + 1, K)
        slot = kinv.coefficient("y", deg)
        key = tuple(
            n * (p - 2) * (p - 1) if v == "alpha" else 0 for v in kinv.vars
        )
        assert slot.terms[key].plain == want
    y = TruncatedSeries.variable(p, "y", kinv.vars, kinv.bounds, K)
    assert tr.k.substitute("y", kinv) == y
    assert kinv.substitute("y", tr.k.with_bounds(kinv.bounds)) == y


def test_chi_squared_k_equals_g_of_chi_y(trace3):
    F, tr = trace3
    p = F.p
    # recompute g(chi*y, alpha) and compare with chi^2 * k
    from powerops.powerop import _lift

    vars, bounds = ("x", "y", "alpha"), (tr.g.bounds[0], tr.g.bounds[0], tr.g.bounds[1])
    g3 = _lift(tr.g, vars, bounds)
    y = TruncatedSeries.variable(p, "y", vars, bounds, K)
    chi3 = _lift(tr.chi, vars, bounds)
    lhs = g3.substitute("x", chi3 * y)
    k3 = _lift(tr.k, vars, bounds)
    assert lhs == chi3 * chi3 * k3


def test_f_and_h_goldens(trace3):
    F, tr = trace3
    p = F.p
    for i in (2, p):
        n = i * (p - 1)
        f_n = f_coefficient(tr, n)
        key = (i * (p - 2) * (p - 1),)
        assert f_n.terms[key].plain == PAdicScalar.from_int(p, math.comb(i * p, i), K)
        h_n = h_polynomial(f_n, CoeffV3.zero(p), F, n)
        assert h_n.terms[key].plain == PAdicScalar.from_ratio(
            p, math.comb(i * p, i), p, K
        )
        # the defining congruence: f - h*<p> = 0 modulo alpha^(2n(p-1)+1)
        s = f_n - h_n * tr.angle_p
        cutoff = 2 * n * (p - 1)
        assert all(exp[0] > cutoff for exp in s.terms)


def test_f1_vanishes(trace3):
    # the y^1 coefficient of the generating product is 0: (k^(-1))' has no
    # y^1 term and the logarithm-derivative factor is 1 below the y bound
    F, tr = trace3
    assert f_coefficient(tr, 1).is_zero()


def test_h_polynomial_unit_case():
    p = 3
    F = FormalGroupLaw.v3_truncated(p, K)
    angle = F.angle_p_series()
    h = h_polynomial(angle, CoeffV3.zero(p), F, 1)
    one = TruncatedSeries.one(p, ("alpha",), angle.bounds, K)
    assert h == one


@pytest.mark.parametrize("p", [3, 5, 7])
def test_power_operation_values(p):
    F = FormalGroupLaw.v3_truncated(p, K)
    for i in (2, p):
        res = power_operation_value(F, i)
        exp = p**3 - 1 - i * (p - 1)
        want_coeff = (-(math.comb(i * p, i) // p)) % p
        assert res.value.plain == {}
        assert res.value.constant.is_zero()
        assert res.value.v3 == {exp: want_coeff}
        assert res.n == i * (p - 1)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_sigma_dl_extraction(p):
    F = FormalGroupLaw.v3_truncated(p, K)
    res2 = power_operation_value(F, 2)
    c = sigma_dl_coefficient(res2, p * p + p - 1)
    assert c.v3part.residue() == 1 and c.plain.is_zero()
    resp = power_operation_value(F, p)
    c = sigma_dl_coefficient(resp, p * p + 1)
    assert c.v3part.residue() == p - 1 and c.plain.is_zero()
    # off-support indices give zero
    assert sigma_dl_coefficient(res2, 1).is_zero()
    with pytest.raises(ValueError):
        sigma_dl_coefficient(res2, p**3)


def test_degree_bookkeeping_and_general_coefficient():
    # every index i gives a single v3 term -C(ip,i)/p mod p at the exact
    # exponent p^3 - 1 - i(p-1)
    p = 5
    F = FormalGroupLaw.v3_truncated(p, K)
    for i in (2, 3, 4, 5):
        res = power_operation_value(F, i)
        exp = p**3 - 1 - i * (p - 1)
        assert res.value.v3 == {exp: (-(math.comb(i * p, i) // p)) % p}
        assert res.value.plain == {}


def test_power_operation_rejects_bad_index():
    F = FormalGroupLaw.v3_truncated(3, K)
    with pytest.raises(ValueError):
        power_operation_value(F, 1)
    with pytest.raises(ValueError):
        power_operation_value(F, 4)


def test_runtimes_small_primes():
    for p in (3, 5):
        F = FormalGroupLaw.v3_truncated(p, K)
        t0 = time.perf_counter()
        power_operation_value(F, 2)
        assert time.perf_counter() - t0 < 1.0


@pytest.mark.parametrize("p", [3, 5])
def test_isogeny_derivative_form(p):
    F = FormalGroupLaw.v3_truncated(p, K)
    assert isogeny_derivative_check(F)


def test_isogeny_two_variable_form_p3():
    F = FormalGroupLaw.v3_truncated(3, K)
    assert isogeny_log_additivity_check(F)


def test_psi_lift_matches_low_degrees(trace3):
    # the degree-1 coefficient lift vanishes (the image of the degree-2
    # generator is 0 in the coefficient ring), the degree-0 one is 1
    F, tr = trace3
    assert psi_coefficient_lift(tr, F, 1).is_zero()


@pytest.mark.parametrize("p", [3, 5])
def test_alpha_headroom_stability(p):
    # the final normal form is independent of extra alpha headroom
    F = FormalGroupLaw.v3_truncated(p, K)
    for i in (2, p):
        base = power_operation_value(F, i).value
        wide = power_operation_value(F, i, alpha_headroom=2 * p).value
        assert base == wide
