"""Steiner trees on the flat torus, the Klein bottle and the projective plane
are found on the universal cover; projecting never lengthens anything."""

import math

from steinerlab.geometry import CoveringSpec, GeometrySpec, sphere_point
from steinerlab.ratio import lift_experiment, ratio
from steinerlab.spanning import Configuration

h = 0.1 * math.sqrt(3) / 2
cases = {
    "torus": Configuration(GeometrySpec.torus(), ((0.95, 0.4), (0.05, 0.4), (0.0, 0.4 + h))),
    "klein": Configuration(GeometrySpec.klein(1.0, 1.0), ((0.3, 0.95), (0.4, 0.95), (0.35, 0.95 + h))),
    # a small cap triangle turned onto the equator, where antipodal charts meet
    "projective": Configuration(GeometrySpec.projective(),
                                [(x, z, -y) for x, y, z in (sphere_point(0.05, t) for t in (0.0, 2.1, 4.2))]),
}

for name, config in cases.items():
    est = ratio(config)
    print(f"{name:10s} mst={est.mst_weight:.12f} smt={est.smt_weight:.12f} ratio={est.ratio:.10f}")
    report = lift_experiment(CoveringSpec.over(config.geom), config)
    for line in report.lines()[1:]:
        print("    " + line)
