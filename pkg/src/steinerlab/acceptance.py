"""The acceptance suite: ten self-contained checks with embedded fixtures.

Each check returns a :class:`CriterionResult`; a criterion passes when every
tolerance holds and it finished inside its time budget.
"""

import math
import time
import warnings
from dataclasses import dataclass

import numpy as np

from steinerlab import geometry
from steinerlab.geometry import CoveringSpec, GeometrySpec, distances, project, sphere_point
from steinerlab.ratio import (
    SQRT3_2, TAYLOR_C, hyperbolic_triangle, lift_experiment, m_curve, m_of_r,
    random_configuration, ratio, ratio_search, ratios, taylor_residual,
)
from steinerlab.spanning import Configuration, DuplicateTerminalWarning, mst, mst_brute
from steinerlab.steiner import enumerate_topologies, smt_upper

SQRT3 = math.sqrt(3.0)


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float
    budget: float

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.number:2d} {self.name}: {self.detail} ({self.seconds:.2f}s / {self.budget:g}s)"


def _equilateral_plane(side=1.0, origin=(0.0, 0.0)):
    x, y = origin
    return ((x, y), (x + side, y), (x + side / 2, y + side * SQRT3 / 2))


def _all_geometries():
    return [GeometrySpec.plane(), GeometrySpec.disk(), GeometrySpec.sphere(),
            GeometrySpec.torus(), GeometrySpec.klein(1.0, 1.0), GeometrySpec.projective()]


def euclidean_triangle(seed):
    config = Configuration(GeometrySpec.plane(), _equilateral_plane())
    est = ratio(config, seed)
    ok = (abs(est.mst_weight - 2.0) <= 1e-12 and abs(est.smt_weight - SQRT3) <= 1e-6
          and abs(est.ratio - 0.8660254) <= 1e-6)
    return ok, f"mst={est.mst_weight:.15g} smt={est.smt_weight:.15g} ratio={est.ratio:.10g}"


def hyperbolic_curve(seed):
    samples = m_curve(0.01, 20.0, 200)
    m = np.array([s.m for s in samples])
    decreasing = bool(np.all(np.diff(m) < 0))
    m0, m100 = m_of_r(0.01), m_of_r(100.0)
    ok = (abs(m0 - SQRT3_2) <= 1e-4 and decreasing and bool(np.all(m > 0.75))
          and 0.7510 < m100 < 0.7511)
    return ok, f"m(0.01)={m0:.10g} decreasing={decreasing} min={m.min():.10g} m(100)={m100:.10g}"


def taylor_check(seed):
    rs = (0.05, 0.1, 0.2)
    res = {r: taylor_residual(r) for r in rs}
    bounded = all(abs(res[r]) <= TAYLOR_C * r ** 4 for r in rs)
    scaling = [res[2 * r] / res[r] for r in (0.05, 0.1)]
    ok = bounded and all(8 <= s <= 24 for s in scaling)
    return ok, (f"C={TAYLOR_C} max|res|/r^4={max(abs(res[r]) / r ** 4 for r in rs):.6g} "
                f"scaling={scaling[0]:.4f},{scaling[1]:.4f}")


def closed_form_vs_solver(seed):
    worst_smt = worst_mst = 0.0
    for r in (0.5, 1.0, 2.0):
        tri = hyperbolic_triangle(r)
        est = ratio(tri.configuration(), seed)
        worst_smt = max(worst_smt, abs(est.smt_weight - 3 * r) / (3 * r))
        exact_mst = 2 * math.acosh(1 + 1.5 * math.sinh(r) ** 2)
        worst_mst = max(worst_mst, abs(est.mst_weight - exact_mst))
    ok = worst_smt <= 1e-4 and worst_mst <= 1e-6
    return ok, f"max rel smt err={worst_smt:.3g} max mst err={worst_mst:.3g}"


def strict_deficit(seed):
    tri = hyperbolic_triangle(0.5)
    est = ratio(tri.configuration(), seed)
    ok = est.ratio < SQRT3_2 - 1e-3
    return ok, f"r=0.5 disk triangle ratio={est.ratio:.10g} (target < {SQRT3_2 - 1e-3:.10g})"


def quotient_consistency(seed):
    flat = ratio(Configuration(GeometrySpec.plane(), _equilateral_plane(0.1)), seed).ratio
    torus = ratio(Configuration(GeometrySpec.torus(), _equilateral_plane(0.1, (0.95, 0.4))), seed).ratio
    klein = ratio(Configuration(GeometrySpec.klein(1.0, 1.0), _equilateral_plane(0.1, (0.3, 0.95))),
                  seed).ratio
    cap = [sphere_point(0.05, t) for t in (0.0, 2 * math.pi / 3, 4 * math.pi / 3)]
    sphere = ratio(Configuration(GeometrySpec.sphere(), cap), seed).ratio
    # tilted so the triangle straddles the equator, where projective charts wrap
    tilt = [(x, z, -y) for x, y, z in cap]
    proj = ratio(Configuration(GeometrySpec.projective(), tilt), seed).ratio
    errs = (abs(torus - flat), abs(klein - flat), abs(proj - sphere))
    ok = max(errs) <= 1e-4
    return ok, f"torus={torus:.10g} klein={klein:.10g} flat={flat:.10g} projective={proj:.10g} sphere={sphere:.10g}"


def moore_bounds(seed, per_cell=417):
    lo, hi, count = math.inf, -math.inf, 0
    for gi, geom in enumerate(_all_geometries()):
        for n in range(2, 6):
            rng = np.random.default_rng([seed, gi, n])
            configs = [random_configuration(geom, n, rng) for _ in range(per_cell)]
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", DuplicateTerminalWarning)
                values = [e.ratio for e in ratios(configs, seed)]
            lo, hi, count = min(lo, min(values)), max(hi, max(values)), count + len(values)
    ok = count >= 10_000 and lo >= 0.5 - 1e-9 and hi <= 1 + 1e-9
    return ok, f"{count} configurations, ratios in [{lo:.6f}, {hi:.6f}]"


def _random_total_point(total, rng):
    if total.kind == "plane":
        return tuple(rng.uniform(-3, 3, size=2))
    v = rng.normal(size=3)
    return tuple(v / np.linalg.norm(v))


def covering_properties(seed, pairs=1000, runs=100):
    rng = np.random.default_rng([seed, 8])
    covers = [CoveringSpec.over(GeometrySpec.torus()), CoveringSpec.over(GeometrySpec.klein(1.0, 1.0)),
              CoveringSpec.over(GeometrySpec.projective())]
    worst = -math.inf
    for cover in covers:
        P = np.array([_random_total_point(cover.total, rng) for _ in range(pairs)])
        Q = np.array([_random_total_point(cover.total, rng) for _ in range(pairs)])
        up = distances(cover.total, P, Q)
        down = distances(cover.base, np.array([project(cover, p) for p in P]),
                         np.array([project(cover, q) for q in Q]))
        worst = max(worst, float(np.max(down - up)))
    passed = 0
    for k in range(runs):
        cover = covers[k % 3]
        n = 1 + k % 4
        local = np.random.default_rng([seed, 8, k])
        config = random_configuration(cover.base, n, local)
        passed += lift_experiment(cover, config, seed).passed
    ok = worst <= 1e-12 and passed == runs
    return ok, f"max(base - total distance)={worst:.3g}; lift experiments passed {passed}/{runs}"


def oracle_equivalence(seed, count=200):
    rng = np.random.default_rng([seed, 9])
    geoms = _all_geometries()
    mismatches = 0
    for k in range(count):
        geom = geoms[k % len(geoms)]
        n = 2 + k % 6
        config = random_configuration(geom, n, rng)
        mismatches += mst(config).weight != mst_brute(config).weight
    counts = tuple(len(enumerate_topologies(n)) for n in (3, 4, 5))
    ok = mismatches == 0 and counts == (1, 3, 15)
    return ok, f"{mismatches} mismatches in {count} configurations; topology counts {counts}"


def sphere_probe(seed):
    best = ratio_search(GeometrySpec.sphere(), 3, 16, seed)
    ok = 0.5 - 1e-9 <= best.ratio <= 0.8661
    return ok, f"best sphere ratio={best.ratio:.10g}"


CRITERIA = (
    (1, "Euclidean triangle exactness", euclidean_triangle, 1.0),
    (2, "hyperbolic curve", hyperbolic_curve, 1.0),
    (3, "Taylor check", taylor_check, 1.0),
    (4, "closed form vs solver", closed_form_vs_solver, 10.0),
    (5, "strict-deficit witness", strict_deficit, 10.0),
    (6, "quotient consistency", quotient_consistency, 10.0),
    (7, "Moore bounds", moore_bounds, 300.0),
    (8, "covering properties", covering_properties, 60.0),
    (9, "oracle equivalence", oracle_equivalence, 60.0),
    (10, "sphere probe", sphere_probe, 60.0),
)


def run_criterion(number, seed=0):
    num, name, check, budget = CRITERIA[number - 1]
    start = time.perf_counter()
    try:
        ok, detail = check(seed)
    except Exception as exc:  # a crash is a failure, reported on the criterion line
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    seconds = time.perf_counter() - start
    if seconds > budget:
        ok, detail = False, f"{detail}; over time budget"
    return CriterionResult(num, name, bool(ok), detail, seconds, budget)


def run_all(seed=0, numbers=None, stream=None):
    results = []
    for number in numbers or range(1, len(CRITERIA) + 1):
        res = run_criterion(number, seed)
        results.append(res)
        if stream is not None:
            stream.write(res.line() + "\n")
            stream.flush()
    return results
