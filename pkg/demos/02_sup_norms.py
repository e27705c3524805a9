"""
Sup-norms of Faber polynomials
==============================

Bohr-type bounds need M_n >= ||F_n|| on the continuum.  Here the closed forms
for the three- and four-cusped hypocycloids are compared with boundary
sampling and with the value F_n(psi(1)) available for maps with nonnegative
coefficients.
"""

# %%
from bohrlab import NormModel, get_condenser, norm_positive_class, norm_sampled
from bohrlab import norms

# %%
for name, kind in (("h3", norms.EXACT_H3), ("h4", norms.EXACT_H4)):
    fmap = get_condenser(name).map
    exact = NormModel(kind)
    print(name)
    for n in range(1, 9):
        print(f"  n={n}  closed form {exact.value(n):.12f}  "
              f"sampled {norm_sampled(fmap, n):.12f}  psi(1) {norm_positive_class(fmap, n):.12f}")

# %%
# The m-cusped bound (m/(m-1))**(m-1) is attained at n = m - 1.
for m in (5, 6):
    fmap = get_condenser(f"h{m}").map
    worst = max(norm_sampled(fmap, n) for n in range(1, 9))
    print(m, norms.hypocycloid_bound(m), worst)

# %%
# Convex sets have ||F_n|| <= 2; every continuum obeys 2 sqrt(n ln n + 2n).
ell = get_condenser("level:segment:2").map
print([round(norm_sampled(ell, n), 6) for n in range(1, 7)])
print([round(norms.general_bound(n), 3) for n in range(1, 7)])
