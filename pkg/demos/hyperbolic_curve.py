"""Equilateral triangles in the hyperbolic plane get relatively cheaper to
connect with a Steiner point as they grow: m(r) falls from sqrt(3)/2 towards 3/4.

Prints the closed form next to the numerical solver for a few circumradii.
"""

import math

from steinerlab.ratio import SQRT3_2, hyperbolic_triangle, m_curve, ratio

print(f"{'r':>6} {'closed form':>14} {'solver':>14}")
for r in (0.1, 0.5, 1.0, 2.0, 3.0, 5.0, 8.0):
    tri = hyperbolic_triangle(r)
    est = ratio(tri.configuration())
    print(f"{r:6.2f} {tri.m_of_r:14.10f} {est.ratio:14.10f}")

curve = m_curve(0.01, 60.0, 400)
print(f"\nm(0.01) - sqrt3/2 = {curve[0].m - SQRT3_2:.3e}")
print(f"m(60)   - 3/4     = {curve[-1].m - 0.75:.3e}  (about 0.108 / r)")
print("strictly decreasing:", all(a.m > b.m for a, b in zip(curve, curve[1:])))
print("first r with m < 0.8:", next(s.r for s in curve if s.m < 0.8))
assert math.isclose(hyperbolic_triangle(3.0).m_of_r, 0.78754429573, rel_tol=1e-10)
