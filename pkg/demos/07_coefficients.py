"""
Faber coefficients from boundary samples
========================================

Sampling f(psi(rho e^{i theta})) on an equispaced grid and taking an FFT
gives the Faber coefficients, since F_n(psi(w)) = w**n + O(w**-1).  The decay
of the recovered coefficients reveals the largest level set on which f is
holomorphic.
"""

# %%
import numpy as np

from bohrlab import faber_coefficients, faber_polys, get_condenser, holomorphy_radius
from bohrlab.faber import extraction_floor

# %%
seg = get_condenser("segment").map
rng = np.random.default_rng(0)
N = 128
n = np.arange(N + 1)
a = 3.0 ** -n * rng.uniform(0.5, 1.0, N + 1) * np.exp(2j * np.pi * rng.random(N + 1))

w = 2.0 * np.exp(2j * np.pi * np.arange(1024) / 1024)
samples = sum(ak * p.composed(w) for ak, p in zip(a, faber_polys(seg, N)))
got = faber_coefficients(samples, seg, 2.0, N)
print("max error, n <= 12:", np.abs(got[:13] - a[:13]).max())

# %%
est = holomorphy_radius(got, noise=extraction_floor(samples, 2.0, N))
print("radius", est.radius, "fit quality", est.quality)
