"""
Upper bounds on the Bohr radius
===============================

If every f with |f| < 1 on a level set has Faber coefficients bounded by
2 re(a0) / (R**n - 1), the majorant series stays below one as soon as
sum 2 M_n / (R**n - 1) <= 1.  The smallest such R is an upper bound.
"""

# %%
import mpmath

from bohrlab import NormModel, solve_upper
from bohrlab import norms, oracles

# %%
models = {
    "disk": NormModel(norms.EXACT_DISK),
    "three cusps": NormModel(norms.EXACT_H3),
    "four cusps": NormModel(norms.EXACT_H4),
    "any convex set": NormModel(norms.BOUND_CONVEX),
    "any continuum": NormModel(norms.BOUND_GENERAL),
}
for label, model in models.items():
    rep = solve_upper(model)
    print(f"{label:15s} R = {rep.R:.10f}   terms {rep.truncationN}, tail {rep.tailEstimate:.1e}")

# %%
# A slow but independent check: 200 terms at 50 digits, plain bisection.
print(oracles.series_root_oracle(oracles.m3_mp))
print(oracles.series_root_oracle(lambda n: 2 * mpmath.sqrt(n * mpmath.log(n) + 2 * n)))
