"""
Bohr radii of growing level sets
================================

The level sets of the Green function of [-1, 1] are confocal ellipses.  As
they grow they look more and more like disks, and the bracket
[lower, upper] on their Bohr radius closes in on 3.
"""

# %%
from bohrlab import get_condenser, theorem2_experiment

# %%
rows = theorem2_experiment(get_condenser("segment").map, [2, 4, 8, 16, 32])
print("   r    lower      upper")
for row in rows:
    print(f"{row.r:4g}  {row.lowerB:.4f}  {row.upperB:.6f}")

# %%
# For the three-cusped hypocycloid only the upper end uses the same machinery.
for row in theorem2_experiment(get_condenser("h3").map, [2, 8, 32]):
    print(row.r, row.upperB, row.lowerMethod)
