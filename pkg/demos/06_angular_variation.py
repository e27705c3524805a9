"""
Angular variation of polygons
=============================

For a curve of bounded turning, ||F_n|| <= V / pi where V is the total
variation of the tangent angle.  For a polygon V is the sum of the absolute
turning angles: 2 pi for convex polygons, more when there are reflex corners.
"""

# %%
import math

from bohrlab import NormModel, PolygonCurve, angular_variation, solve_upper
from bohrlab import norms

# %%
shapes = {
    "square": [0, 1, 1 + 1j, 1j],
    "triangle": [0, 1, 0.5 + math.sqrt(3) / 2 * 1j],
    "L hexagon": [0, 2, 2 + 1j, 1 + 1j, 1 + 2j, 2j],
}
for name, verts in shapes.items():
    V = angular_variation(PolygonCurve(verts))
    R = solve_upper(NormModel(norms.BOUND_ANGULAR, param=V)).R
    print(f"{name:10s} V/pi = {V / math.pi:.12f}   upper bound {R:.6f}")
