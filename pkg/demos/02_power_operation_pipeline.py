"""Walk through the whole power-operation pipeline at p = 3, printing every
intermediate series the final value is extracted from."""

from powerops.fgl import FormalGroupLaw
from powerops.powerop import (
    f_coefficient,
    h_polynomial,
    power_operation_value,
    run_pipeline,
    sigma_dl_coefficient,
)
from powerops.scalar import CoeffV3

p = 3
F = FormalGroupLaw.v3_truncated(p)
print(f"target law at p={p}: logarithm x + (v3/p) x^{p**3}")

print()
print("== the cast of characters ==")
print("chi   =", F.euler_class())
print("[p]   has terms at", sorted(F.p_series().degrees("alpha")))
print("<p>   has terms at", sorted(F.angle_p_series().degrees("alpha")))

trace = run_pipeline(
    FormalGroupLaw.v3_truncated(p, x_bound=p**2, alpha_bound=p**3 + p * (p - 1) ** 2 + 1)
)
print()
print("== pipeline stages (x-degrees / y-degrees present) ==")
for name in ("g", "k", "k_inverse"):
    series = getattr(trace, name)
    var = "x" if name == "g" else "y"
    print(f"{name:10s} {trace.labels[name]}")
    print(f"{'':10s} {var}-degrees {sorted(series.degrees(var))[:8]} ...")

print()
print("== extraction for i = 2, ..., p ==")
for i in range(2, p + 1):
    n = i * (p - 1)
    f_n = f_coefficient(trace, n)
    h_n = h_polynomial(f_n, CoeffV3.zero(p), F, n)
    print(f"i={i}: f_{n} terms {sorted(f_n.terms)}, h_{n} terms {sorted(h_n.terms)}")
    res = power_operation_value(F, i)
    print(f"     value = {res.value.render()}")
    k = p * p + p - 1 if i == 2 else p * p + 1
    c = sigma_dl_coefficient(res, k)
    print(f"     coefficient at index {k}(p-1): v3-part {c.v3part.residue()} mod p")
