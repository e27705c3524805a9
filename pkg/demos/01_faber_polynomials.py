"""
Faber polynomials of a few continua
===================================

A continuum is described by the inverse of its exterior map,
psi(w) = w/gamma + beta0 + sum beta_j w**-j.  The n-th Faber polynomial is
the polynomial whose composition with psi is w**n plus negative powers only.
"""

# %%
import numpy as np
from numpy.polynomial import chebyshev

from bohrlab import faber_oracle, faber_polys, get_condenser

# %%
# On the unit disk the Faber polynomials are the monomials.
for p in faber_polys(get_condenser("disk").map, 4):
    print(p.n, np.round(p.z_coeffs.real, 12))

# %%
# On [-1, 1] they are twice the Chebyshev polynomials (F_0 = 1 is the exception).
seg = get_condenser("segment").map
for p in faber_polys(seg, 5)[1:]:
    c = np.zeros(p.n + 1)
    c[-1] = 2
    print(p.n, p.z_coeffs.real, np.allclose(p.z_coeffs.real, chebyshev.cheb2poly(c)))

# %%
# The three-cusped hypocycloid: F_2 = z**2, and the negative part of
# F_2(psi(w)) is w**-1 + w**-4 / 4.
h3 = get_condenser("h3").map
p2 = faber_polys(h3, 2)[2]
print("F_2 coefficients:", p2.z_coeffs.real)
print("tail alpha_1..alpha_4:", p2.alpha_tail.real)

# %%
# The contour integral of w**(n+1) psi'(w) / (psi(w) - z) gives an
# independent value of F_n(z).
z = 0.3 + 0.1j
for p in faber_polys(h3, 6):
    print(p.n, abs(p(z) - faber_oracle(h3, p.n, z, rho=2.0)))
