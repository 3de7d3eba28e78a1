"""The six model surfaces: exact distances, geodesics, normal coordinates, coverings.

Points are plain tuples of floats in chart coordinates:

* ``plane``, ``torus``, ``klein``: ``(x, y)``
* ``disk``: ``(x, y)`` inside the open unit disk (Poincare model, curvature -1)
* ``sphere``, ``projective``: unit 3-vectors (radius-1 sphere model)

Quotient points are always stored as the canonical representative of their
orbit: torus points inside the fundamental parallelogram spanned by the basis,
Klein bottle points inside ``[0, w) x [0, h)``, projective points with their
first nonzero coordinate positive.
"""

import itertools
import math
import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from steinerlab._manifolds import Flat, Hyperboloid, Sphere, disk_to_hyperboloid, hyperboloid_to_disk

PLANE = "plane"
DISK = "disk"
SPHERE = "sphere"
TORUS = "torus"
KLEIN = "klein"
PROJECTIVE = "projective"
KINDS = (PLANE, DISK, SPHERE, TORUS, KLEIN, PROJECTIVE)

DISK_MARGIN = 1e-12
UNIT_TOL = 1e-12
METRIC_GRID = 32


class GeometryError(ValueError):
    """Invalid geometry description, point, or chart request."""


class GeodesicTieWarning(UserWarning):
    """Emitted when a minimizing geodesic is not unique and a tie rule was applied."""


def _fmt(x):
    return f"{float(x):.17g}"


@dataclass(frozen=True)
class GeometrySpec:
    """One of the six metric surfaces together with its moduli."""

    kind: str
    torus_basis: tuple | None = None
    klein_width: float | None = None
    klein_height: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise GeometryError(f"unknown geometry kind {self.kind!r}")
        if self.kind == TORUS:
            if self.torus_basis is None:
                raise GeometryError("torus needs two basis vectors")
            basis = np.asarray(self.torus_basis, dtype=float)
            if basis.shape != (2, 2) or not np.all(np.isfinite(basis)):
                raise GeometryError("torus basis must be two finite plane vectors")
            if abs(np.linalg.det(basis)) <= 1e-12:
                raise GeometryError("degenerate torus basis (vectors are linearly dependent)")
            object.__setattr__(self, "torus_basis", tuple(tuple(float(c) for c in v) for v in basis))
        elif self.torus_basis is not None:
            raise GeometryError("torus_basis only applies to the torus")
        if self.kind == KLEIN:
            w, h = self.klein_width, self.klein_height
            if w is None or h is None or not (w > 0 and h > 0) or not math.isfinite(w * h):
                raise GeometryError("Klein bottle needs positive width and height")
            object.__setattr__(self, "klein_width", float(w))
            object.__setattr__(self, "klein_height", float(h))
        elif self.klein_width is not None or self.klein_height is not None:
            raise GeometryError("klein_width/klein_height only apply to the Klein bottle")

    @classmethod
    def plane(cls):
        return cls(PLANE)

    @classmethod
    def disk(cls):
        return cls(DISK)

    @classmethod
    def sphere(cls):
        return cls(SPHERE)

    @classmethod
    def torus(cls, a=(1.0, 0.0), b=(0.0, 1.0)):
        return cls(TORUS, torus_basis=(tuple(a), tuple(b)))

    @classmethod
    def klein(cls, width=1.0, height=1.0):
        return cls(KLEIN, klein_width=width, klein_height=height)

    @classmethod
    def projective(cls):
        return cls(PROJECTIVE)

    def __str__(self):
        if self.kind == TORUS:
            (ax, ay), (bx, by) = self.torus_basis
            return f"torus:{_fmt(ax)},{_fmt(ay)};{_fmt(bx)},{_fmt(by)}"
        if self.kind == KLEIN:
            return f"klein:{_fmt(self.klein_width)},{_fmt(self.klein_height)}"
        return self.kind

    @property
    def curvature(self):
        return {DISK: -1.0, SPHERE: 1.0, PROJECTIVE: 1.0}.get(self.kind, 0.0)

    @property
    def is_quotient(self):
        return self.kind in (TORUS, KLEIN, PROJECTIVE)

    @property
    def coord_dim(self):
        return 3 if self.kind in (SPHERE, PROJECTIVE) else 2

    @property
    def universal_cover(self):
        """The simply connected surface covering this one (itself if simply connected)."""
        if self.kind in (TORUS, KLEIN):
            return GeometrySpec.plane()
        if self.kind == PROJECTIVE:
            return GeometrySpec.sphere()
        return self

    @cached_property
    def _basis(self):
        # columns are the lattice generators
        return np.array(self.torus_basis, dtype=float).T

    @cached_property
    def _basis_inv(self):
        return np.linalg.inv(self._basis)

    @cached_property
    def _reduced_basis(self):
        a, b = (np.array(v, dtype=float) for v in self.torus_basis)
        while True:
            if a @ a > b @ b:
                a, b = b, a
            mu = round((a @ b) / (a @ a))
            if mu == 0:
                break
            b = b - mu * a
        reduced = np.column_stack([a, b])
        return reduced, np.linalg.inv(reduced)

    @property
    def systole(self):
        """Length of the shortest non-contractible closed geodesic (inf if none)."""
        if self.kind == TORUS:
            reduced, _ = self._reduced_basis
            return float(np.linalg.norm(reduced[:, 0]))
        if self.kind == KLEIN:
            return min(self.klein_width, self.klein_height)
        if self.kind == PROJECTIVE:
            return math.pi
        return math.inf

    @property
    def injectivity_radius(self):
        """A lower bound for the injectivity radius valid at every point."""
        if self.kind == SPHERE:
            return math.pi
        if self.is_quotient:
            return 0.5 * self.systole
        return math.inf

    @property
    def fundamental_diameter(self):
        """Euclidean diameter of the stored fundamental domain (torus and Klein)."""
        if self.kind == TORUS:
            a, b = (np.array(v) for v in self.torus_basis)
            return float(max(np.linalg.norm(a + b), np.linalg.norm(a - b)))
        if self.kind == KLEIN:
            return math.hypot(self.klein_width, self.klein_height)
        raise GeometryError(f"{self.kind} has no planar fundamental domain")


def parse_geometry(text):
    """Parse ``plane | disk | sphere | torus:ax,ay;bx,by | klein:w,h | projective``."""
    text = text.strip()
    tag, _, rest = text.partition(":")
    tag = tag.strip().lower()
    if tag in (PLANE, DISK, SPHERE, PROJECTIVE):
        if rest.strip():
            raise GeometryError(f"geometry {tag!r} takes no parameters")
        return GeometrySpec(tag)
    try:
        if tag == TORUS:
            vecs = [v.split(",") for v in rest.split(";")]
            if len(vecs) != 2 or any(len(v) != 2 for v in vecs):
                raise GeometryError("torus expects 'torus:ax,ay;bx,by'")
            return GeometrySpec.torus(*[tuple(float(c) for c in v) for v in vecs])
        if tag == KLEIN:
            parts = rest.split(",")
            if len(parts) != 2:
                raise GeometryError("klein expects 'klein:w,h'")
            return GeometrySpec.klein(float(parts[0]), float(parts[1]))
    except ValueError as exc:
        if isinstance(exc, GeometryError):
            raise
        raise GeometryError(f"malformed number in geometry {text!r}") from exc
    raise GeometryError(f"unknown geometry tag {tag!r}")


# ---------------------------------------------------------------------------
# points


def canonicalize(geom, coords):
    """Reduce chart coordinates to the canonical representative without validation."""
    c = np.array(coords, dtype=float)
    if geom.kind == TORUS:
        # subtract a lattice vector rather than rebuilding from lattice
        # coordinates, so canonical points are fixed exactly
        for _ in range(3):
            lat = geom._basis_inv @ c
            # lattice coordinates a hair below an integer stay on its upper side;
            # flooring them would bounce between the two edges of the domain
            near = np.round(lat)
            shift = np.where(np.abs(lat - near) < 1e-14, near, np.floor(lat))
            if not shift.any():
                break
            c = c - geom._basis @ shift
    elif geom.kind == KLEIN:
        w, h = geom.klein_width, geom.klein_height
        m = math.floor(c[0] / w)
        x = c[0] - m * w
        if x >= w:
            x -= w
            m += 1
        y = -c[1] if m % 2 else c[1]
        y = y - math.floor(y / h) * h
        if y >= h:
            y -= h
        c = np.array([x, y])
    elif geom.kind == PROJECTIVE:
        nz = np.flatnonzero(c)
        if nz.size and c[nz[0]] < 0:
            c = -c
    return tuple(float(v) + 0.0 for v in c)


def point(geom, coords):
    """Validate chart coordinates for ``geom`` and return the canonical point tuple."""
    c = np.asarray(coords, dtype=float).reshape(-1)
    if c.size != geom.coord_dim:
        raise GeometryError(f"{geom.kind} points need {geom.coord_dim} coordinates, got {c.size}")
    if not np.all(np.isfinite(c)):
        raise GeometryError("point coordinates must be finite")
    if geom.kind == DISK and c @ c > 1.0 - DISK_MARGIN:
        raise GeometryError(f"point {tuple(c.tolist())} is not inside the open unit disk")
    if geom.kind in (SPHERE, PROJECTIVE) and abs(np.linalg.norm(c) - 1.0) > UNIT_TOL:
        raise GeometryError(f"point {tuple(c.tolist())} is not a unit vector")
    return canonicalize(geom, c)


def sphere_point(polar, azimuth=0.0):
    """Unit vector at the given polar angle (from +z) and azimuth (from +x)."""
    s = math.sin(polar)
    return (s * math.cos(azimuth), s * math.sin(azimuth), math.cos(polar))


# ---------------------------------------------------------------------------
# distances


def _disk_distance(p, q):
    d2 = np.sum((p - q) ** 2, axis=-1)
    z = 2.0 * d2 / ((1.0 - np.sum(p * p, axis=-1)) * (1.0 - np.sum(q * q, axis=-1)))
    # arccosh(1 + z) without cancellation for small z
    return np.log1p(z + np.sqrt(z * (z + 2.0)))


def _torus_distance(geom, p, q):
    reduced, inv = geom._reduced_basis
    c = (q - p) @ inv.T
    c = c - np.round(c)
    shifts = np.array(list(itertools.product((-1, 0, 1), repeat=2)), dtype=float)
    vecs = (c[..., None, :] + shifts) @ reduced.T
    return np.sqrt(np.min(np.sum(vecs * vecs, axis=-1), axis=-1))


_KLEIN_SHIFTS = [(m, n) for m in (-1, 0, 1) for n in (-1, 0, 1, 2)]


def _klein_images(geom, q, shifts):
    w, h = geom.klein_width, geom.klein_height
    out = []
    for m, n in shifts:
        sign = -1.0 if m % 2 else 1.0
        out.append(np.stack([q[..., 0] + m * w, sign * q[..., 1] + n * h], axis=-1))
    return np.stack(out, axis=-2)


def _klein_distance(geom, p, q):
    p = _canon_array(geom, p)
    q = _canon_array(geom, q)
    imgs = _klein_images(geom, q, _KLEIN_SHIFTS)
    d = imgs - p[..., None, :]
    return np.sqrt(np.min(np.sum(d * d, axis=-1), axis=-1))


def _canon_array(geom, pts):
    pts = np.asarray(pts, dtype=float)
    if geom.kind == KLEIN:
        w, h = geom.klein_width, geom.klein_height
        m = np.floor(pts[..., 0] / w)
        x = pts[..., 0] - m * w
        y = np.where(np.mod(m, 2) == 1, -pts[..., 1], pts[..., 1])
        y = y - np.floor(y / h) * h
        return np.stack([x, y], axis=-1)
    return pts


def distances(geom, p, q):
    """Vectorized geodesic distance between arrays of chart points (broadcasting)."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    kind = geom.kind
    if kind == PLANE:
        return Flat.dist(p, q)
    if kind == DISK:
        return _disk_distance(p, q)
    if kind == SPHERE:
        return Sphere.dist(p, q)
    if kind == PROJECTIVE:
        c = np.abs(np.sum(p * q, axis=-1))
        s = np.linalg.norm(np.cross(p, q), axis=-1)
        return np.arctan2(s, c)
    if kind == TORUS:
        return _torus_distance(geom, p, q)
    return _klein_distance(geom, p, q)


def distance(geom, p, q):
    """Intrinsic geodesic distance between two points of ``geom``."""
    return float(distances(geom, point(geom, p), point(geom, q)))


def distance_matrix(geom, points):
    pts = np.asarray(points, dtype=float)
    return distances(geom, pts[:, None, :], pts[None, :, :])


# ---------------------------------------------------------------------------
# deck transformations of the planar quotients


def _deck_apply(geom, p, shifts):
    """Images of total-space point(s) ``p`` under the deck elements ``shifts``."""
    p = np.asarray(p, dtype=float)
    if geom.kind == TORUS:
        s = np.asarray(shifts, dtype=float)
        return p[..., None, :] + s @ geom._basis.T
    return _klein_images(geom, p, shifts)


def _window_shifts(window):
    r = range(-window, window + 1)
    return [(m, n) for m in r for n in r]


def _nearest_lift(geom, anchor, q):
    """Lift of quotient point ``q`` nearest to plane point ``anchor``; ties go to the
    lexicographically smallest deck element (m, n)."""
    anchor = np.asarray(anchor, dtype=float)
    q = np.asarray(canonicalize(geom, q))
    # anchor reduced first so that a small window is enough
    base = np.asarray(canonicalize(geom, anchor))
    window = sufficient_window(geom)
    shifts = _window_shifts(window)
    imgs = _deck_apply(geom, q, shifts)
    d = np.linalg.norm(imgs - base, axis=-1)
    best = d.min()
    ties = np.flatnonzero(d <= best + 1e-12 * max(1.0, best))
    if ties.size > 1:
        warnings.warn("minimizing geodesic is not unique; using the lexicographically "
                      "smallest deck translate", GeodesicTieWarning, stacklevel=3)
    lift = imgs[ties[0]]
    # carry the lift back next to the unreduced anchor
    return lift - base + anchor if geom.kind == TORUS else _carry(geom, base, anchor, lift)


def _carry(geom, base, anchor, lift):
    """Move ``lift`` by the Klein deck element taking ``base`` to ``anchor``."""
    w, h = geom.klein_width, geom.klein_height
    m = round((anchor[0] - base[0]) / w)
    sign = -1.0 if m % 2 else 1.0
    n = round((anchor[1] - sign * base[1]) / h)
    return np.array([lift[0] + m * w, sign * lift[1] + n * h])


def sufficient_window(geom):
    """Deck window that provably contains the minimizing translate for canonical points.

    Torus: both points in the fundamental parallelogram, so the minimizing lattice
    vector has length at most twice its diameter; Cramer's rule bounds its
    coefficients.  Klein bottle: ceil(diam / min(w, h)) + 1.
    """
    if geom.kind == TORUS:
        a, b = (np.array(v) for v in geom.torus_basis)
        det = abs(np.linalg.det(geom._basis))
        bound = 2.0 * geom.fundamental_diameter * max(np.linalg.norm(a), np.linalg.norm(b)) / det
        return max(1, math.ceil(bound - 1e-12))
    if geom.kind == KLEIN:
        return math.ceil(geom.fundamental_diameter / min(geom.klein_width, geom.klein_height)) + 1
    return 1


# ---------------------------------------------------------------------------
# geodesics, exponential and logarithm maps


def _sphere_frame(base):
    b = np.asarray(base, dtype=float)
    for k in range(3):
        e = np.zeros(3)
        e[k] = 1.0
        if abs(b[k]) < 0.9:
            break
    e1 = e - (e @ b) * b
    e1 /= np.linalg.norm(e1)
    return e1, np.cross(b, e1)


def _mobius_add(x, y):
    xy = x @ y
    x2 = x @ x
    y2 = y @ y
    return ((1 + 2 * xy + y2) * x + (1 - x2) * y) / (1 + 2 * xy + x2 * y2)


def _lift_near(geom, base, p):
    """Total-space lift of ``p`` nearest to the canonical lift of ``base``."""
    if geom.kind == PROJECTIVE:
        p = np.asarray(p, dtype=float)
        return -p if np.dot(base, p) < 0 else p
    return _nearest_lift(geom, base, p)


def geodesic_point(geom, p, q, t):
    """Point at arclength fraction ``t`` along a minimizing geodesic from p to q."""
    if not 0.0 <= t <= 1.0:
        raise GeometryError("t must lie in [0, 1]")
    p = np.asarray(point(geom, p))
    q = np.asarray(point(geom, q))
    if t == 0.0:
        return tuple(float(v) for v in p)
    kind = geom.kind
    if kind == PLANE:
        return tuple(float(v) for v in p + t * (q - p))
    if kind == DISK:
        x, y = disk_to_hyperboloid(p), disk_to_hyperboloid(q)
        out = hyperboloid_to_disk(Hyperboloid.exp(x, t * Hyperboloid.log(x, y)))
        return point(geom, out)
    if kind in (SPHERE, PROJECTIVE):
        if kind == PROJECTIVE:
            if np.dot(p, q) == 0.0:
                warnings.warn("projective points at maximal distance; keeping the given lift",
                              GeodesicTieWarning, stacklevel=2)
            q = _lift_near(geom, p, q)
        v = Sphere.log(p, q)
        if np.linalg.norm(np.cross(p, q)) < 1e-15 and np.dot(p, q) < 0:
            warnings.warn("antipodal points; using the great circle toward the first chart axis",
                          GeodesicTieWarning, stacklevel=2)
            e1, _ = _sphere_frame(p)
            v = math.pi * e1
        return canonicalize(geom, Sphere.exp(p, t * v))
    lift = _nearest_lift(geom, p, q)
    return canonicalize(geom, p + t * (lift - p))


def log_map(geom, base, p):
    """Normal coordinates of ``p`` in the chart centered at ``base``.

    The returned plane vector has Euclidean norm equal to ``distance(base, p)``.
    """
    b = np.asarray(point(geom, base))
    q = np.asarray(point(geom, p))
    kind = geom.kind
    if kind == PLANE:
        return q - b
    if kind == DISK:
        z = _mobius_add(-b, q)
        nz = np.linalg.norm(z)
        if nz == 0.0:
            return np.zeros(2)
        return 2.0 * np.arctanh(nz) * z / nz
    if kind in (SPHERE, PROJECTIVE):
        if kind == PROJECTIVE:
            q = _lift_near(geom, b, q)
        d = Sphere.dist(b, q)
        if d >= geom.injectivity_radius - 1e-12:
            raise GeometryError("point lies outside the injectivity radius of the chart")
        v = Sphere.log(b, q)
        e1, e2 = _sphere_frame(b)
        return np.array([v @ e1, v @ e2])
    lift = _nearest_lift(geom, b, q)
    v = lift - b
    if np.linalg.norm(v) >= geom.injectivity_radius:
        raise GeometryError("point lies outside the injectivity radius of the chart")
    return v


def exp_map(geom, base, v):
    """Inverse of :func:`log_map`: the point with normal coordinates ``v`` at ``base``."""
    b = np.asarray(point(geom, base))
    v = np.asarray(v, dtype=float)
    kind = geom.kind
    if kind in (PLANE, TORUS, KLEIN):
        return canonicalize(geom, b + v)
    if kind == DISK:
        nv = np.linalg.norm(v)
        if nv == 0.0:
            return tuple(float(c) for c in b)
        return point(geom, _mobius_add(b, math.tanh(nv / 2.0) * v / nv))
    e1, e2 = _sphere_frame(b)
    return canonicalize(geom, Sphere.exp(b, v[0] * e1 + v[1] * e2))


# ---------------------------------------------------------------------------
# normal-coordinate comparison


@dataclass(frozen=True)
class ComparisonReport:
    """Measured comparison between the intrinsic metric and the flat chart metric."""

    center: tuple
    radius: float
    epsilon: float
    measured_min_ratio: float
    measured_max_ratio: float
    samples: int
    dimension: int = 2

    @property
    def lower_factor(self):
        return math.sqrt(1.0 - self.dimension ** 2 * self.epsilon)

    @property
    def upper_factor(self):
        return math.sqrt(1.0 + self.dimension ** 2 * self.epsilon)

    def holds(self, tol=1e-12):
        return (self.lower_factor - tol <= self.measured_min_ratio
                and self.measured_max_ratio <= self.upper_factor + tol)


def metric_components(geom, base, u):
    """Metric tensor g_ij at normal coordinates ``u``.

    In geodesic polar form ds^2 = dr^2 + f(r)^2 dtheta^2 with f = r, sin r or
    sinh r for curvature 0, +1, -1; ``base`` only fixes the chart (all three
    surfaces are homogeneous).
    """
    point(geom, base)
    u = np.asarray(u, dtype=float)
    r = float(np.linalg.norm(u))
    if r == 0.0:
        return np.eye(2)
    k = geom.curvature
    ratio = 1.0 if k == 0 else (math.sin(r) / r if k > 0 else math.sinh(r) / r)
    radial = np.outer(u, u) / (r * r)
    return radial + ratio * ratio * (np.eye(2) - radial)


def _chart_limit(geom):
    if geom.kind == SPHERE:
        return math.pi / 2  # convexity radius, smaller than the injectivity radius
    if geom.kind in (PLANE, DISK):
        return math.inf
    raise GeometryError("comparison_bounds supports the plane, the disk and the sphere")


def comparison_bounds(geom, base, delta, samples=2000, seed=0):
    """Compare geodesic distance with chart-Euclidean distance inside the ball U(delta)."""
    if samples < 2:
        raise GeometryError("need at least two samples")
    if not delta > 0 or delta >= _chart_limit(geom):
        raise GeometryError(f"radius {delta} is too large for the chart")
    base = point(geom, base)

    grid = np.linspace(-delta, delta, METRIC_GRID)
    eps = 0.0
    for gx in grid:
        for gy in grid:
            if gx * gx + gy * gy < delta * delta:
                g = metric_components(geom, base, (gx, gy))
                eps = max(eps, float(np.max(np.abs(g - np.eye(2)))))
    if eps >= 0.25:
        raise GeometryError(f"radius {delta} is too large for the chart (epsilon={eps:.3g})")

    rng = np.random.default_rng(seed)
    lo, hi = math.inf, -math.inf
    for k in range(samples):
        r, phi = delta * math.sqrt(rng.random()), 2 * math.pi * rng.random()
        u = np.array([r * math.cos(phi), r * math.sin(phi)])
        if k % 4 == 3:
            # radial pair: collinear with the center
            v = u * (2 * rng.random() - 1)
        else:
            r2, phi2 = delta * math.sqrt(rng.random()), 2 * math.pi * rng.random()
            v = np.array([r2 * math.cos(phi2), r2 * math.sin(phi2)])
        rho_e = float(np.linalg.norm(u - v))
        if rho_e < 1e-9 * delta:
            continue
        rho = distance(geom, exp_map(geom, base, u), exp_map(geom, base, v))
        lo = min(lo, rho / rho_e)
        hi = max(hi, rho / rho_e)
    return ComparisonReport(base, float(delta), eps, lo, hi, samples)


# ---------------------------------------------------------------------------
# coverings


_LEGAL_COVERS = {(PLANE, TORUS), (PLANE, KLEIN), (SPHERE, PROJECTIVE)}


@dataclass(frozen=True)
class CoveringSpec:
    """A locally isometric covering ``total -> base`` with a deck search window."""

    total: GeometrySpec
    base: GeometrySpec
    deck_window: int | None = None

    def __post_init__(self):
        if (self.total.kind, self.base.kind) not in _LEGAL_COVERS:
            raise GeometryError(f"no covering {self.total.kind} -> {self.base.kind}")
        if self.deck_window is None:
            object.__setattr__(self, "deck_window", sufficient_window(self.base))
        elif self.deck_window < 1:
            raise GeometryError("deck_window must be at least 1")

    @classmethod
    def over(cls, base, deck_window=None):
        """The universal covering of ``base``."""
        return cls(base.universal_cover, base, deck_window)


def project(cover, p):
    """Covering projection: canonical base representative of the orbit of ``p``."""
    return point(cover.base, point(cover.total, p))


def enumerate_lifts(cover, p_base, window=None):
    """Preimages of ``p_base`` whose deck element has translation part within ``window``.

    Torus and Klein lifts come ordered by deck element (m, n); the projective
    plane always has exactly the two lifts ``v, -v``.
    """
    p = np.asarray(point(cover.base, p_base))
    if cover.base.kind == PROJECTIVE:
        return [tuple(float(c) for c in p), tuple(float(-c) + 0.0 for c in p)]
    window = cover.deck_window if window is None else window
    if window < 1:
        raise GeometryError("window must be at least 1")
    imgs = _deck_apply(cover.base, p, _window_shifts(window))
    return [tuple(float(c) for c in v) for v in imgs]


def lift_array(cover, p_base, window=None):
    return np.array(enumerate_lifts(cover, p_base, window))


__all__ = [
    "KINDS", "GeometryError", "GeodesicTieWarning", "GeometrySpec", "parse_geometry",
    "point", "canonicalize", "sphere_point", "distance", "distances", "distance_matrix",
    "geodesic_point", "log_map", "exp_map", "metric_components", "ComparisonReport",
    "comparison_bounds", "CoveringSpec", "project", "enumerate_lifts", "sufficient_window",
]
