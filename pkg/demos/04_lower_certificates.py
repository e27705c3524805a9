"""
Certified lower bounds
======================

The family f = -r1 + (1/r1 - r1) sum (r1/R)**n F_n is a Moebius map of
e^{i theta} plus a small Faber tail.  When its majorant sum S beats a rigorous
bound T on sup |f| over the level R, the Bohr property fails there, so the
Bohr radius is at least R.
"""

# %%
import numpy as np

from bohrlab import get_condenser, lower_certificate, lower_scan
from bohrlab import oracles

# %%
# On the disk S has a closed form and crosses 1 only below R = 3.
disk = get_condenser("disk")
for R in (2.5, 2.9, 3.0):
    cert = lower_certificate(disk.map, disk.exact_norms, R, 0.999)
    print(R, cert.bohrSum, oracles.disk_bohr_sum(0.999, R), cert.certified)

# %%
# Three cusps: the certificate succeeds beyond 3.
h3 = get_condenser("h3")
cert = lower_certificate(h3.map, h3.exact_norms, 3.0, 0.99)
print(cert.bohrSum, cert.boundarySup, cert.boundarySampled, cert.certified)

# %%
grid = np.round(np.arange(2.8, 4.5, 0.01), 10)
for name in ("disk", "segment", "h3", "h4"):
    cond = get_condenser(name)
    print(name, lower_scan(cond.map, cond.exact_norms, grid, (0.9, 0.99, 0.999, 0.9999)).R)
