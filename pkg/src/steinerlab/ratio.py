"""Steiner ratio estimates, the hyperbolic equilateral curve m(r) and experiments.

Every ratio here is ``smt_upper / mst`` for a concrete configuration, so it is an
upper bound on that configuration's true ratio, and the minimum over any family
of configurations is an upper bound on the Steiner ratio of the surface.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from steinerlab import geometry
from steinerlab.geometry import (
    DISK, KLEIN, PLANE, PROJECTIVE, SPHERE, TORUS, CoveringSpec, GeometryError,
    comparison_bounds, distance, exp_map, point,
)
from steinerlab.spanning import Configuration, NetworkTree, mst
from steinerlab.steiner import MAX_TERMINALS, smt_upper, smt_upper_many

SQRT3_2 = math.sqrt(3.0) / 2.0
TAYLOR_C = 0.012
TAYLOR_MAX_R = 0.5
MOORE_SLACK = 1e-9
PERTURB_SIGMA = 0.05
# beyond this circumradius the triangle vertices leave the representable disk
MAX_DISK_CIRCUMRADIUS = 25.0


def _acosh1p(x):
    """arccosh(1 + x) without cancellation for small x."""
    return math.log1p(x + math.sqrt(x * (x + 2.0)))


@dataclass(frozen=True)
class RatioEstimate:
    """Ratio of an upper-bound Steiner tree to the minimal spanning tree."""

    config: Configuration
    mst_weight: float
    smt_weight: float
    ratio: float
    mst_tree: NetworkTree = field(default=None, repr=False, compare=False)
    smt_tree: NetworkTree = field(default=None, repr=False, compare=False)

    def to_dict(self):
        out = {
            "geometry": str(self.config.geom),
            "terminals": [list(p) for p in self.config.terminals],
            "mst_weight": self.mst_weight,
            "smt_weight": self.smt_weight,
            "ratio": self.ratio,
        }
        if self.mst_tree is not None:
            out["mst"] = self.mst_tree.to_dict()
        if self.smt_tree is not None:
            out["smt"] = self.smt_tree.to_dict()
        return out


def _estimate(config, smt_result):
    spanning = mst(config)
    m, s = spanning.weight, smt_result.weight
    value = 1.0 if m == 0.0 else s / m
    if not 0.5 - MOORE_SLACK <= value <= 1.0 + MOORE_SLACK:
        raise ArithmeticError(f"ratio {value!r} violates the bounds [1/2, 1]")
    return RatioEstimate(config, m, s, value, spanning, smt_result.tree)


def _check_size(config):
    if not 2 <= config.n <= MAX_TERMINALS:
        raise ValueError(f"ratio needs between 2 and {MAX_TERMINALS} terminals, got {config.n}")


def ratio(config, seed=0):
    """Upper-bound Steiner ratio ``smt_upper / mst`` of one configuration."""
    _check_size(config)
    return _estimate(config, smt_upper(config, seed))


def ratios(configs, seed=0):
    """:func:`ratio` for many configurations, solved in shared batches."""
    configs = list(configs)
    for c in configs:
        _check_size(c)
    return [_estimate(c, r) for c, r in zip(configs, smt_upper_many(configs, seed))]


# ---------------------------------------------------------------------------
# hyperbolic equilateral triangles


@dataclass(frozen=True)
class HyperbolicEquilateral:
    """Regular triangle inscribed in a circle of hyperbolic radius ``r``.

    Its Steiner tree is the three radii (length 3r) and its spanning tree is two
    sides of length ``a`` with cosh a = 1 + (3/2) sinh^2 r.
    """

    r: float
    a: float
    mst_weight: float
    smt_weight: float
    m_of_r: float

    def configuration(self):
        """The triangle as a disk configuration centered at the origin."""
        if self.r > MAX_DISK_CIRCUMRADIUS:
            raise ValueError(f"circumradius {self.r} does not fit in the disk chart")
        rho = math.tanh(self.r / 2.0)
        pts = [(rho * math.cos(t), rho * math.sin(t))
               for t in (math.pi / 2, math.pi / 2 + 2 * math.pi / 3, math.pi / 2 + 4 * math.pi / 3)]
        return Configuration(geometry.GeometrySpec.disk(), tuple(pts))


def _side(r):
    if r > 20.0:
        # arccosh(y) = log(2y) - O(y^-2) and 2y = (3/4) e^{2r} (1 + O(e^{-2r}))
        return 2.0 * r + math.log(0.75)
    return _acosh1p(1.5 * math.sinh(r) ** 2)


def hyperbolic_triangle(r):
    r = float(r)
    if not (r > 0.0 and math.isfinite(r)):
        raise ValueError(f"circumradius must be positive and finite, got {r!r}")
    a = _side(r)
    return HyperbolicEquilateral(r, a, 2.0 * a, 3.0 * r, 1.5 * r / a)


def m_of_r(r):
    return hyperbolic_triangle(r).m_of_r


@dataclass(frozen=True)
class CurveSample:
    r: float
    m: float


def m_curve(r_min, r_max, steps):
    """m(r) on a uniform grid of ``steps`` points from ``r_min`` to ``r_max``."""
    if not 0.0 < r_min < r_max or not math.isfinite(r_max):
        raise ValueError(f"need 0 < r_min < r_max, got {r_min!r}, {r_max!r}")
    if int(steps) != steps or steps < 2:
        raise ValueError(f"need at least 2 steps, got {steps!r}")
    return [CurveSample(float(r), m_of_r(r)) for r in np.linspace(r_min, r_max, int(steps))]


def write_curve_csv(samples, stream):
    stream.write("r,m\n")
    for s in samples:
        stream.write(f"{s.r:.17g},{s.m:.17g}\n")


def taylor_residual(r):
    """m(r) minus its second-order expansion sqrt(3)/2 - r^2 / (16 sqrt(3))."""
    r = float(r)
    if not 0.0 < r <= TAYLOR_MAX_R:
        raise ValueError(f"taylor_residual is validated on (0, {TAYLOR_MAX_R}], got {r!r}")
    return m_of_r(r) - (SQRT3_2 - r * r / (16.0 * math.sqrt(3.0)))


# ---------------------------------------------------------------------------
# search


def _regular_polygon(geom, n, radius, center_angle=0.0):
    """Regular n-gon of (chart) circumradius ``radius`` around the chart origin."""
    angles = center_angle + 2 * math.pi * np.arange(n) / n + math.pi / 2
    if geom.kind == DISK:
        rho = math.tanh(radius / 2.0)
        return [(rho * math.cos(t), rho * math.sin(t)) for t in angles]
    if geom.kind in (SPHERE, PROJECTIVE):
        return [geometry.sphere_point(radius, t) for t in angles]
    center = _domain_center(geom)
    return [(center[0] + radius * math.cos(t), center[1] + radius * math.sin(t)) for t in angles]


def _domain_center(geom):
    if geom.kind == TORUS:
        a, b = (np.array(v) for v in geom.torus_basis)
        return tuple((a + b) / 2)
    if geom.kind == KLEIN:
        return (geom.klein_width / 2, geom.klein_height / 2)
    return (0.0, 0.0)


def _lattice_patch(geom, n, spacing):
    """First ``n`` points of a triangular lattice spiral with the given spacing."""
    pts = [(0.0, 0.0), (1.0, 0.0), (0.5, SQRT3_2), (-0.5, SQRT3_2), (-1.0, 0.0), (-0.5, -SQRT3_2)]
    cx, cy = _domain_center(geom)
    chart = [(cx + spacing * x, cy + spacing * y) for x, y in pts[:n]]
    if geom.kind == DISK:
        return [exp_map(geom, (0.0, 0.0), p) for p in chart]
    if geom.kind in (SPHERE, PROJECTIVE):
        return [exp_map(geom, (0.0, 0.0, 1.0), p) for p in chart]
    return chart


def structured_seeds(geom, n):
    """Equilateral, regular-polygon and lattice configurations worth trying first."""
    kind = geom.kind
    if kind == PLANE:
        radii = [1.0 / math.sqrt(3.0)]
    elif kind == DISK:
        radii = [0.5, 1.0, 2.0, 3.0, 5.0, 8.0]
    elif kind in (SPHERE, PROJECTIVE):
        radii = [0.01, 0.001, 0.1, 0.5, 1.0]
    else:
        radii = [0.1 * geom.systole, 0.25 * geom.systole]
    seeds = [_regular_polygon(geom, n, r) for r in radii]
    if n > 3:
        spacing = {PLANE: 1.0, DISK: 1.0, SPHERE: 0.05, PROJECTIVE: 0.05}.get(
            kind, 0.15 * (geom.systole if geom.is_quotient else 1.0))
        seeds.append(_lattice_patch(geom, n, spacing))
    return [Configuration(geom, tuple(point(geom, p) for p in s)) for s in seeds]


def random_configuration(geom, n, rng):
    """Random terminals in a geometry-specific window of random scale."""
    kind = geom.kind
    if kind == PLANE:
        pts = rng.random((n, 2))
    elif kind == DISK:
        # uniform direction, hyperbolic radius up to a random window size
        size = math.exp(rng.uniform(math.log(0.1), math.log(6.0)))
        rad = size * np.sqrt(rng.random(n))
        ang = 2 * math.pi * rng.random(n)
        rho = np.tanh(rad / 2)
        pts = np.c_[rho * np.cos(ang), rho * np.sin(ang)]
    elif kind in (SPHERE, PROJECTIVE):
        if rng.random() < 0.5:
            v = rng.normal(size=(n, 3))
            pts = v / np.linalg.norm(v, axis=1)[:, None]
        else:
            cap = math.exp(rng.uniform(math.log(0.01), math.log(math.pi / 2)))
            polar = np.arccos(1 - rng.random(n) * (1 - math.cos(cap)))
            az = 2 * math.pi * rng.random(n)
            pts = np.c_[np.sin(polar) * np.cos(az), np.sin(polar) * np.sin(az), np.cos(polar)]
    elif kind == TORUS:
        pts = rng.random((n, 2)) @ geom._basis.T
    else:
        pts = rng.random((n, 2)) * [geom.klein_width, geom.klein_height]
    return Configuration(geom, tuple(tuple(float(c) for c in p) for p in pts))


def perturb(config, sigma, rng):
    """Move every terminal by a Gaussian normal-coordinate step of size ``sigma``."""
    geom = config.geom
    pts = [exp_map(geom, p, rng.normal(scale=sigma, size=2)) for p in config.terminals]
    if geom.kind == DISK:
        pts = [p if math.hypot(*p) < 1 - 1e-9 else q for p, q in zip(pts, config.terminals)]
    return Configuration(geom, tuple(pts))


def _diameter(config):
    D = config.distance_matrix()
    return float(D.max())


def _witness_key(est):
    return (est.ratio, est.config.terminals)


def ratio_search(geom, n, iterations, seed=0, block=8):
    """Randomized and structured search for a configuration with small ratio.

    Trials come in blocks: a quarter are structured seeds (equilateral triangles,
    regular polygons, lattice patches), half are random configurations and a
    quarter perturb the incumbent as it stood before the block.  Trial ``i``
    draws from its own generator seeded by ``(seed, i)``.  Returns the best
    :class:`RatioEstimate`; ties go to the lexicographically smallest witness.
    """
    if not 3 <= n <= MAX_TERMINALS:
        raise ValueError(f"ratio_search needs 3 <= n <= {MAX_TERMINALS}, got {n}")
    if iterations < 1:
        raise ValueError("need at least one iteration")
    seeds = structured_seeds(geom, n)
    best = None
    structured = 0
    for start in range(0, iterations, block):
        trials = []
        for i in range(start, min(start + block, iterations)):
            rng = np.random.default_rng([seed, i])
            slot = i % 4
            if slot == 0 or (slot == 3 and best is None):
                trials.append(seeds[structured % len(seeds)])
                structured += 1
            elif slot == 3:
                sigma = PERTURB_SIGMA * max(_diameter(best.config), 1e-12)
                trials.append(perturb(best.config, sigma, rng))
            else:
                trials.append(random_configuration(geom, n, rng))
        for est in ratios(trials, seed):
            if best is None or _witness_key(est) < _witness_key(best):
                best = est
    return best


# ---------------------------------------------------------------------------
# experiments


@dataclass
class Report:
    """Measured quantities plus named pass/fail checks."""

    title: str
    values: dict
    checks: dict

    @property
    def passed(self):
        return all(self.checks.values())

    def lines(self):
        out = [f"# {self.title}"]
        out += [f"{k}: {_fmt(v)}" for k, v in self.values.items()]
        out += [f"{'PASS' if ok else 'FAIL'} {name}" for name, ok in self.checks.items()]
        return out

    def text(self):
        return "\n".join(self.lines()) + "\n"


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def _lift_tree(cover, tree):
    """Lift a base tree edge by edge from the canonical lift of vertex 0."""
    base = cover.base
    verts = [np.asarray(v, dtype=float) for v in tree.vertices]
    lifted = {0: verts[0]}
    adj = {i: [] for i in range(len(verts))}
    for i, j in tree.edges:
        adj[i].append(j)
        adj[j].append(i)
    stack = [0]
    while stack:
        i = stack.pop()
        for j in adj[i]:
            if j not in lifted:
                lifted[j] = np.asarray(geometry._lift_near(base, lifted[i], verts[j]), dtype=float)
                stack.append(j)
    return NetworkTree.build(cover.total, [tuple(lifted[i]) for i in range(len(verts))],
                             tree.n_terminals, tree.edges)


def _adversarial_lifts(cover, config, rng, count):
    """Lift assignments chosen to be far from minimal: all sign patterns on the
    projective plane, random deck translates otherwise."""
    n = config.n
    if cover.base.kind == PROJECTIVE:
        signs = ((np.arange(2 ** n)[:, None] >> np.arange(n)) & 1) * -2 + 1
        arr = config.array()
        return [arr * s[:, None] for s in signs]
    lifts = [np.array(geometry.enumerate_lifts(cover, p)) for p in config.terminals]
    return [np.array([L[rng.integers(len(L))] for L in lifts]) for _ in range(count)]


def lift_experiment(cover, config_base, seed=0, adversarial=8):
    """Lift a near-minimal base tree to the covering space and check that

    (i)   the lifted tree has the same weight,
    (ii)  the covering-space solver does at least as well on the lifted terminals,
    (iii) the base MST is no longer than the MST of any lift of the terminals
          (the canonical one and adversarial ones).
    """
    if config_base.geom != cover.base:
        raise GeometryError("configuration does not live in the base of the covering")
    n = config_base.n
    base_mst = mst(config_base).weight
    values = {"cover": f"{cover.total} -> {cover.base}", "n": n, "base_mst": base_mst}
    if n == 1:
        values.update(base_tree=0.0, lifted_tree=0.0, cover_smt=0.0, lifted_mst=0.0)
        return Report("lift experiment", values,
                      {"weight_preserved": True, "cover_smt_not_longer": True,
                       "projection_monotone": True})

    base_tree = smt_upper(config_base, seed).tree
    lifted = _lift_tree(cover, base_tree)
    lifted_terms = Configuration(cover.total, lifted.vertices[:n])
    cover_smt = smt_upper(lifted_terms, seed).weight
    lifted_mst = mst(lifted_terms).weight

    rng = np.random.default_rng([seed, n])
    worst_gap = lifted_mst - base_mst
    strict = lifted_mst > base_mst + 1e-12
    for arr in _adversarial_lifts(cover, config_base, rng, adversarial):
        w = mst(Configuration(cover.total, tuple(map(tuple, arr)))).weight
        worst_gap = min(worst_gap, w - base_mst)
        strict = strict or w > base_mst + 1e-12
    values.update(base_tree=base_tree.weight, lifted_tree=lifted.weight, cover_smt=cover_smt,
                  lifted_mst=lifted_mst, min_mst_gap=worst_gap, strict_somewhere=strict)
    checks = {
        "weight_preserved": abs(lifted.weight - base_tree.weight) <= 1e-9,
        "cover_smt_not_longer": cover_smt <= base_tree.weight + 1e-9,
        "projection_monotone": worst_gap >= -1e-12,
    }
    return Report("lift experiment", values, checks)


def _small_configurations(geom, base, delta, seed, count):
    rng = np.random.default_rng(seed)
    out = []
    for k in range(count):
        n = 3 + k % 3
        r = delta * np.sqrt(rng.random(n))
        t = 2 * math.pi * rng.random(n)
        out.append(Configuration(geom, tuple(exp_map(geom, base, (a * math.cos(b), a * math.sin(b)))
                                             for a, b in zip(r, t))))
    eq = [exp_map(geom, base, (0.5 * delta * math.cos(t), 0.5 * delta * math.sin(t)))
          for t in (math.pi / 2, math.pi / 2 + 2 * math.pi / 3, math.pi / 2 + 4 * math.pi / 3)]
    out.append(Configuration(geom, tuple(eq)))
    return out


def bilipschitz_ratio_bounds(geom, base, delta, seed=0, count=24, tol=1e-4):
    """Compare ratios inside the normal ball U(delta) with the plane value.

    With c1 rho_e <= rho <= c2 rho_e measured on U(delta), every configuration
    ratio is at least (c1/c2) times its flat counterpart, hence at least
    (c1/c2) sqrt(3)/2.  The matching upper bound is a statement about the
    infimum, so it is checked on the best configuration found.
    """
    if geom.is_quotient:
        raise GeometryError("bi-Lipschitz bounds are computed on the plane, disk or sphere")
    report = comparison_bounds(geom, base, delta, seed=seed)
    c1, c2 = report.measured_min_ratio, report.measured_max_ratio
    configs = _small_configurations(geom, report.center, delta, seed, count)
    ests = ratios(configs, seed)
    values = [e.ratio for e in ests]
    lower = (c1 / c2) * SQRT3_2 - tol
    upper = (c2 / c1) * SQRT3_2 + tol
    envelope = math.sqrt((1 + 4 * report.epsilon) / (1 - 4 * report.epsilon))
    vals = {
        "geometry": str(geom), "delta": float(delta), "epsilon": report.epsilon,
        "c1": c1, "c2": c2, "lower_bound": lower, "upper_bound": upper,
        "min_ratio": min(values), "max_ratio": max(values), "equilateral_ratio": values[-1],
        "configurations": len(values),
    }
    checks = {
        "comparison_envelope": c2 / c1 <= envelope + 1e-12 and report.holds(),
        "ratios_above_lower": min(values) >= lower,
        "infimum_below_upper": min(values) <= upper,
    }
    return Report("bi-Lipschitz ratio bounds", vals, checks)
