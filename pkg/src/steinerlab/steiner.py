"""Upper bounds for Steiner minimal trees.

Every full Steiner topology on the terminals is realized as a locally shortest
tree by a damped Newton-type descent carried out in tangent spaces (exp/log
maps), the minimum is taken together with the spanning tree, and quotient
surfaces are handled by solving on their universal cover over all admissible
lift assignments of the terminals.
"""

import itertools
import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from steinerlab import _manifolds, geometry
from steinerlab._descent import COLLAPSE, GRAD_TOL, MAX_ITER, REL_TOL, descend
from steinerlab.geometry import (
    DISK, KLEIN, PLANE, PROJECTIVE, SPHERE, TORUS, GeometrySpec, canonicalize,
    distances, point,
)
from steinerlab.spanning import Configuration, NetworkTree, mst

MAX_TERMINALS = 6
RESTARTS = 4
MAX_ASSIGNMENTS = 100_000
SPANNING_FALLBACK = "spanning-fallback"
# Du-Hwang: every plane configuration has SMT >= (sqrt 3 / 2) MST
PLANE_RATIO = math.sqrt(3) / 2


class SolverError(RuntimeError):
    pass


class ConvergenceWarning(UserWarning):
    pass


@dataclass(frozen=True)
class SteinerTopology:
    """Full Steiner topology: terminals ``0..n-1`` are leaves, vertices
    ``n..2n-3`` are degree-3 Steiner points."""

    n: int
    edges: tuple

    @property
    def n_steiner(self):
        return max(self.n - 2, 0)

    def neighbors(self):
        nb = {v: [] for v in range(self.n + self.n_steiner)}
        for i, j in self.edges:
            nb[i].append(j)
            nb[j].append(i)
        return {v: sorted(vs) for v, vs in nb.items()}

    def is_full(self):
        nb = self.neighbors()
        ok_deg = all(len(nb[v]) == 1 for v in range(self.n)) and all(
            len(nb[v]) == 3 for v in range(self.n, self.n + self.n_steiner))
        if not ok_deg or len(self.edges) != self.n + self.n_steiner - 1:
            return False
        seen, stack = {0}, [0]
        while stack:
            for w in nb[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n + self.n_steiner


def topology_count(n):
    """(2n-4)! / (2^(n-2) (n-2)!), the number of full topologies on n terminals."""
    return math.factorial(2 * n - 4) // (2 ** (n - 2) * math.factorial(n - 2))


@lru_cache(maxsize=None)
def enumerate_topologies(n):
    """All full Steiner topologies on ``n`` labeled terminals (2 <= n <= 6).

    Built by inserting terminal k on every edge of every topology for k - 1
    terminals; each insertion sequence yields a distinct topology.
    """
    if not 2 <= n <= MAX_TERMINALS:
        raise ValueError(f"topology enumeration needs 2 <= n <= {MAX_TERMINALS}, got {n}")
    if n == 2:
        return (SteinerTopology(2, ((0, 1),)),)
    trees = [[(0, ("s", 0)), (1, ("s", 0)), (2, ("s", 0))]]
    for k in range(3, n):
        grown = []
        for edges in trees:
            s = ("s", k - 2)
            for idx, (u, v) in enumerate(edges):
                grown.append(edges[:idx] + edges[idx + 1:] + [(u, s), (v, s), (k, s)])
        trees = grown

    def label(v):
        return n + v[1] if isinstance(v, tuple) else v

    out = []
    for edges in trees:
        pairs = sorted(tuple(sorted((label(u), label(v)))) for u, v in edges)
        out.append(SteinerTopology(n, tuple(pairs)))
    return tuple(out)


@dataclass(frozen=True)
class SmtResult:
    tree: NetworkTree
    topology: object
    converged: bool
    iterations: int
    cover_tree: NetworkTree | None = None
    failures: tuple = field(default=())

    @property
    def weight(self):
        return self.tree.weight


# ---------------------------------------------------------------------------
# ambient representation for the simply connected surfaces


def _space(geom):
    return {PLANE: _manifolds.Flat, DISK: _manifolds.Hyperboloid,
            SPHERE: _manifolds.Sphere}[geom.kind]


def _to_ambient(geom, pts):
    pts = np.asarray(pts, dtype=float)
    return _manifolds.disk_to_hyperboloid(pts) if geom.kind == DISK else pts


def _from_ambient(geom, X):
    if geom.kind == DISK:
        return _manifolds.hyperboloid_to_disk(X)
    if geom.kind == SPHERE:
        return X / np.linalg.norm(X, axis=-1, keepdims=True)
    return X




def _hop_weights(topo):
    """Initial Steiner positions weight terminal t by 2^-(tree hops to t)."""
    nb = topo.neighbors()
    W = np.zeros((topo.n_steiner, topo.n))
    for k in range(topo.n_steiner):
        src = topo.n + k
        hops = {src: 0}
        frontier = [src]
        while frontier:
            nxt = []
            for v in frontier:
                for u in nb[v]:
                    if u not in hops:
                        hops[u] = hops[v] + 1
                        nxt.append(u)
            frontier = nxt
        for t in range(topo.n):
            W[k, t] = 2.0 ** -hops[t]
    return W / W.sum(axis=1, keepdims=True)


def _weighted_mean(geom, space, W, terminals):
    M = W @ terminals
    if geom.kind == SPHERE:
        nm = np.linalg.norm(M, axis=-1, keepdims=True)
        return np.where(nm > 1e-9, M / np.maximum(nm, 1e-300), terminals[np.argmax(W, axis=1)])
    if geom.kind == DISK:
        return space.retract(M / np.sqrt(-space.inner(M, M))[:, None])
    return M


def _initial_points(geom, space, terminals, topo, rng, restarts, scale):
    base = _weighted_mean(geom, space, _hop_weights(topo), terminals)
    starts = [base]
    for _ in range(restarts - 1):
        noise = rng.normal(scale=0.05 * scale, size=base.shape)
        # project onto the tangent planes
        if geom.kind == SPHERE:
            noise -= np.sum(noise * base, axis=-1, keepdims=True) * base
        elif geom.kind == DISK:
            noise += space.inner(noise, base)[:, None] * base
        starts.append(space.exp(base, noise))
    return starts


def _restarts_for(geom):
    # sum-of-distance objectives are convex on the plane and the hyperbolic disk
    return RESTARTS if geom.kind == SPHERE else 1


def _contract(geom, vertices, n, edges):
    """Contract edges shorter than COLLAPSE that end in a Steiner point."""
    vertices = [tuple(float(c) for c in v) for v in vertices]
    edges = [tuple(e) for e in edges]
    while True:
        short = None
        for i, j in sorted(edges):
            if j >= n and float(distances(geom, np.array(vertices[i]), np.array(vertices[j]))) <= COLLAPSE:
                short = (i, j)
                break
        if short is None:
            return vertices, edges
        keep, gone = short
        edges = [e for e in edges if e != short]
        edges = [tuple(keep if v == gone else v for v in e) for e in edges]
        edges = [tuple(sorted((a if a < gone else a - 1, b if b < gone else b - 1))) for a, b in edges]
        del vertices[gone]


def _diameter(space, T):
    return float(np.max(space.dist(T[:, None], T[None]))) or 1.0


def _optimize_sets(geom, terminal_sets, seed, topo_indices=None, restarts=None, max_iter=MAX_ITER):
    """Optimize topologies for many terminal sets of equal size in one batch.

    Returns, per terminal set, a list of ``SmtResult`` (one per topology index).
    The starting points of (set, topology) depend only on ``seed``, ``n`` and
    the topology index, so results do not depend on how sets are batched.
    """
    n = len(terminal_sets[0])
    topos = enumerate_topologies(n)
    topo_indices = list(range(len(topos))) if topo_indices is None else list(topo_indices)
    space = _space(geom)
    restarts = _restarts_for(geom) if restarts is None else restarts
    X0, E, scales, owner = [], [], [], []
    for j, pts in enumerate(terminal_sets):
        T = _to_ambient(geom, pts)
        scale = _diameter(space, T)
        for ti in topo_indices:
            rng = np.random.default_rng([seed, n, ti])
            for S in _initial_points(geom, space, T, topos[ti], rng, restarts, scale):
                X0.append(np.concatenate([T, S]))
                E.append(topos[ti].edges)
                scales.append(scale)
                owner.append((j, ti))
    res = descend(space, np.array(X0), n, np.array(E), np.array(scales), max_iter=max_iter)

    out = [dict() for _ in terminal_sets]
    members = {}
    for k, key in enumerate(owner):
        members.setdefault(key, []).append(k)
    for (j, ti), ks in members.items():
        best = min(ks, key=lambda k: (res.f[k], k))
        steiner = _from_ambient(geom, res.X[best, n:])
        verts = [tuple(p) for p in np.asarray(terminal_sets[j], dtype=float)] + [tuple(v) for v in steiner]
        verts, edges = _contract(geom, verts, n, topos[ti].edges)
        tree = NetworkTree.build(geom, verts, n, edges)
        out[j][ti] = SmtResult(tree, topos[ti], bool(res.converged[best]),
                               int(max(res.iterations[k] for k in ks)))
    return [[d[ti] for ti in topo_indices] for d in out]


def optimize_topology(geom, config, topo, seed=0, restarts=None):
    """Locally shortest realization of one full topology (plane, disk or sphere)."""
    if geom.kind not in (PLANE, DISK, SPHERE):
        raise SolverError("optimize_topology works on the plane, the disk or the sphere; "
                          "quotient surfaces go through smt_upper")
    if config.geom != geom or topo.n != config.n:
        raise ValueError("topology and configuration do not match")
    if config.n <= 2:
        return SmtResult(NetworkTree.build(geom, config.terminals, config.n,
                                           topo.edges if config.n == 2 else ()), topo, True, 0)
    ti = enumerate_topologies(config.n).index(topo)
    res = _optimize_sets(geom, [config.terminals], seed, [ti], restarts)[0][0]
    if not res.converged:
        warnings.warn(f"topology {ti} hit the iteration cap; returning best-so-far tree",
                      ConvergenceWarning, stacklevel=2)
    return res


# ---------------------------------------------------------------------------
# three terminals


def _angle(space, x, y, z):
    u, v = space.log(x, y), space.log(x, z)
    c = space.inner(u, v) / (space.norm(u) * space.norm(v))
    return math.acos(max(-1.0, min(1.0, float(c))))


def _fermat_direct(geom, pts):
    space = _space(geom)
    X = _to_ambient(geom, np.array(pts, dtype=float))
    for k in range(3):
        others = [X[j] for j in range(3) if j != k]
        if _angle(space, X[k], *others) >= 2 * math.pi / 3 - 1e-12:
            edges = [(k, j) for j in range(3) if j != k]
            return NetworkTree.build(geom, pts, 3, edges), True, 0
    topo = enumerate_topologies(3)[0]
    start = X.mean(axis=0) if geom.kind == PLANE else space.centroid(X)
    res = descend(space, np.concatenate([X, start[None]])[None], 3, np.array([topo.edges]),
                  np.array([_diameter(space, X)]), grad_only=True)
    s = _from_ambient(geom, res.X[0, 3])
    tree = NetworkTree.build(geom, list(pts) + [tuple(s)], 3, topo.edges)
    return tree, bool(res.converged[0]), int(res.iterations[0])


def fermat_point(geom, a, b, c):
    """Point minimizing the summed geodesic distance to a, b, c, as a 3-edge tree
    (or the 2-edge path through a vertex whose angle is at least 120 degrees)."""
    pts = [point(geom, p) for p in (a, b, c)]
    topo = enumerate_topologies(3)[0]
    if geom.is_quotient:
        cover = geom.universal_cover
        lifted = [pts[0]] + [tuple(_lift_near(geom, pts[0], p)) for p in pts[1:]]
        cover_tree, ok, its = _fermat_direct(cover, lifted)
        res = SmtResult(_project_tree(geom, pts, cover_tree), topo, ok, its, cover_tree=cover_tree)
    else:
        tree, ok, its = _fermat_direct(geom, pts)
        res = SmtResult(tree, topo, ok, its)
    if not ok:
        warnings.warn("Fermat point iteration hit the iteration cap", ConvergenceWarning, stacklevel=2)
    return res


# ---------------------------------------------------------------------------
# quotient surfaces via the universal cover


def _lift_near(geom, anchor, q):
    return np.asarray(geometry._lift_near(geom, np.asarray(anchor, dtype=float), q))


def _project_tree(geom, terminals, cover_tree):
    n = cover_tree.n_terminals
    verts = list(terminals) + [canonicalize(geom, v) for v in cover_tree.steiner_points]
    return NetworkTree.build(geom, verts, n, cover_tree.edges)


def lift_window(geom, radius):
    """Deck window holding every lift within ``radius`` of a fundamental-domain point."""
    if geom.kind == TORUS:
        a, b = (np.array(v) for v in geom.torus_basis)
        det = abs(np.linalg.det(geom._basis))
        reach = (radius + geom.fundamental_diameter) * max(np.linalg.norm(a), np.linalg.norm(b)) / det
    else:
        reach = (radius + geom.fundamental_diameter) / min(geom.klein_width, geom.klein_height)
    return math.ceil(reach) + 1


def _lift_candidates(geom, p0, q, radius):
    """Lifts of quotient point q lying within ``radius`` of the cover point p0, nearest first."""
    q = np.asarray(q, dtype=float)
    if geom.kind == PROJECTIVE:
        cands = np.array([q, -q])
        d = _manifolds.Sphere.dist(p0, cands)
    else:
        cands = geometry._deck_apply(geom, q, geometry._window_shifts(lift_window(geom, radius)))
        d = np.linalg.norm(cands - p0, axis=-1)
    keep = d <= radius * (1 + 1e-12) + 1e-12
    return cands[keep][np.argsort(d[keep], kind="stable")]


def batched_mst_weight(space, P):
    """MST weight of every point set in the batch ``P`` of shape (A, n, d)."""
    A, n, _ = P.shape
    D = space.dist(P[:, :, None, :], P[:, None, :, :])
    in_tree = np.zeros((A, n), dtype=bool)
    in_tree[:, 0] = True
    best = D[:, 0].copy()
    total = np.zeros(A)
    rows = np.arange(A)
    for _ in range(n - 1):
        cand = np.where(in_tree, np.inf, best)
        j = np.argmin(cand, axis=1)
        total += cand[rows, j]
        in_tree[rows, j] = True
        best = np.minimum(best, D[rows, j])
    return total


@lru_cache(maxsize=None)
def _tours(n):
    """Closed tours through 0..n-1 starting at 0, one per direction pair."""
    return np.array([(0,) + p for p in itertools.permutations(range(1, n)) if p[0] < p[-1]])


def shortest_tour(space, P):
    """Length of the shortest closed tour through each point set of ``P`` (A, n, d)."""
    n = P.shape[1]
    if n < 3:
        return 2.0 * space.dist(P[:, 0], P[:, -1])
    D = space.dist(P[:, :, None, :], P[:, None, :, :])
    T = _tours(n)
    return D[:, T, np.roll(T, -1, axis=1)].sum(axis=-1).min(axis=-1)


def lift_assignments(config, radius=None):
    """Cover lifts of the terminals worth solving, with lower bounds on their
    cover Steiner tree length, ordered by that bound.

    Terminal 0 stays at its canonical lift.  Any tree of length at most
    ``radius`` (default: the quotient MST weight) keeps every terminal within
    ``radius`` of terminal 0, which bounds the candidate lifts.  A cover tree is
    at least as long as the farthest pair of its terminals and at least
    ``factor`` times their MST (the cover's Steiner ratio bound), so
    assignments whose bound reaches ``radius`` are dropped.  Doubling a tree
    gives a closed walk through its terminals, so half the shortest closed
    tour is a second lower bound.
    """
    geom = config.geom
    space = _space(geom.universal_cover)
    radius = mst(config).weight if radius is None else radius
    p0 = np.asarray(config.terminals[0], dtype=float)
    cands = [p0[None]] + [_lift_candidates(geom, p0, q, radius) for q in config.terminals[1:]]
    total = math.prod(len(c) for c in cands)
    if total > MAX_ASSIGNMENTS:
        raise SolverError(f"{total} lift assignments exceed the cap of {MAX_ASSIGNMENTS}")
    grids = np.meshgrid(*[np.arange(len(c)) for c in cands], indexing="ij")
    idx = np.stack([g.reshape(-1) for g in grids], axis=1)
    P = np.stack([cands[i][idx[:, i]] for i in range(config.n)], axis=1)
    factor = PLANE_RATIO if geom.kind in (TORUS, KLEIN) else 0.5
    bound = np.maximum(factor * batched_mst_weight(space, P), 0.5 * shortest_tour(space, P))
    order = np.argsort(bound, kind="stable")
    order = order[bound[order] < radius - 1e-12]
    return P[order], bound[order]


def smt_upper_many(configs, seed=0):
    """:func:`smt_upper` for a list of configurations, solved in shared batches.

    Each result is identical to what ``smt_upper(config, seed)`` returns.  Lift
    assignments of quotient configurations are solved in rounds of growing size,
    best lower bound first; before every round the remaining assignments are
    pruned against the best tree found so far.
    """
    best, failures, pending = [], [[] for _ in configs], {}
    for ci, config in enumerate(configs):
        if config.n > MAX_TERMINALS:
            raise ValueError(f"smt_upper supports at most {MAX_TERMINALS} terminals, got {config.n}")
        base = mst(config)
        best.append(SmtResult(base, SPANNING_FALLBACK, True, 0))
        if config.n <= 2:
            continue
        if config.geom.is_quotient:
            pending[ci] = lift_assignments(config, base.weight)
        else:
            pending[ci] = (config.array()[None], np.zeros(1))

    chunk = 1
    while pending:
        groups = {}
        for ci in sorted(pending):
            P, bound = pending[ci]
            alive = bound < best[ci].tree.weight - 1e-12
            P, bound = P[alive], bound[alive]
            geom = configs[ci].geom
            for arr in P[:chunk]:
                groups.setdefault((geom.universal_cover, configs[ci].n), []).append((ci, arr))
            if len(P) > chunk:
                pending[ci] = (P[chunk:], bound[chunk:])
            else:
                del pending[ci]
        for (cover, _n), jobs in groups.items():
            solved = _optimize_sets(cover, [arr for _, arr in jobs], seed)
            for (ci, _arr), per_topology in zip(jobs, solved):
                _take_best(configs[ci], ci, per_topology, best, failures[ci])
        chunk *= 2
    return [SmtResult(b.tree, b.topology, b.converged, b.iterations, b.cover_tree, tuple(fl))
            for b, fl in zip(best, failures)]


def _take_best(config, ci, per_topology, best, failures):
    """Fold per-topology results into ``best[ci]`` (first strict improvement wins)."""
    for res in per_topology:
        if not res.converged:
            failures.append(f"topology {res.topology.edges}: iteration cap reached")
        if config.geom.is_quotient:
            tree = _project_tree(config.geom, config.terminals, res.tree)
            res = SmtResult(tree, res.topology, res.converged, res.iterations, res.tree)
        if res.tree.weight < best[ci].tree.weight:
            best[ci] = res


def smt_upper(config, seed=0):
    """Upper bound on the Steiner minimal tree length of ``config`` (n <= 6).

    Minimum over every full topology and the minimal spanning tree; on the
    torus, Klein bottle and projective plane the terminals are lifted to the
    universal cover, solved there and the best tree is projected back.
    """
    return smt_upper_many([config], seed)[0]
