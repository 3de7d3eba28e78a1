"""Searching the unit sphere for configurations with a small Steiner ratio.

Small equilateral triangles are nearly flat and sit just above sqrt(3)/2;
larger ones are worse, so the search settles on the tiny seeds.
"""

from steinerlab.geometry import GeometrySpec
from steinerlab.ratio import ratio_search

sphere = GeometrySpec.sphere()
for n in (3, 4, 5):
    best = ratio_search(sphere, n, 32, seed=1)
    print(f"n={n}: best ratio {best.ratio:.10f}")
    for p in best.config.terminals:
        print("    " + ", ".join(f"{c:+.6f}" for c in p))
