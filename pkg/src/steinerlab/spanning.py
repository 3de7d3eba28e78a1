"""Configurations, embedded trees and minimal spanning trees."""

import itertools
import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from steinerlab.geometry import GeometrySpec, distance_matrix, distances, point

MAX_BRUTE = 8


class DuplicateTerminalWarning(UserWarning):
    pass


@dataclass(frozen=True)
class Configuration:
    """A geometry and an ordered list of terminals (canonical chart points)."""

    geom: GeometrySpec
    terminals: tuple

    def __post_init__(self):
        pts = tuple(point(self.geom, p) for p in self.terminals)
        if not pts:
            raise ValueError("a configuration needs at least one terminal")
        object.__setattr__(self, "terminals", pts)
        if len(set(pts)) < len(pts):
            warnings.warn("configuration contains duplicate terminals; they are joined "
                          "by zero-length edges", DuplicateTerminalWarning, stacklevel=3)

    def __len__(self):
        return len(self.terminals)

    @property
    def n(self):
        return len(self.terminals)

    def array(self):
        return np.array(self.terminals, dtype=float)

    def distance_matrix(self):
        return distance_matrix(self.geom, self.array())

    def permuted(self, order):
        return Configuration(self.geom, tuple(self.terminals[i] for i in order))


def tree_weight(geom, vertices, edges):
    """Exactly rounded sum of geodesic edge lengths (edge order does not matter)."""
    if not edges:
        return 0.0
    v = np.asarray(vertices, dtype=float)
    e = np.asarray(sorted(edges))
    return math.fsum(distances(geom, v[e[:, 0]], v[e[:, 1]]).tolist())


@dataclass(frozen=True)
class NetworkTree:
    """Embedded tree: the terminals (indices ``0..n_terminals-1``) followed by
    Steiner points, joined by geodesic edges."""

    geom: GeometrySpec
    vertices: tuple
    n_terminals: int
    edges: tuple
    weight: float

    @classmethod
    def build(cls, geom, vertices, n_terminals, edges):
        verts = tuple(tuple(float(c) for c in v) for v in vertices)
        edges = tuple(sorted((min(i, j), max(i, j)) for i, j in edges))
        return cls(geom, verts, n_terminals, edges, tree_weight(geom, verts, edges))

    @property
    def steiner_points(self):
        return self.vertices[self.n_terminals:]

    def degrees(self):
        deg = [0] * len(self.vertices)
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg

    def is_tree(self):
        nv = len(self.vertices)
        if len(self.edges) != nv - 1:
            return False
        parent = list(range(nv))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for i, j in self.edges:
            ri, rj = find(i), find(j)
            if ri == rj:
                return False
            parent[ri] = rj
        return True

    def edge_lengths(self):
        return [float(distances(self.geom, np.array(self.vertices[i]), np.array(self.vertices[j])))
                for i, j in self.edges]

    def to_dict(self):
        return {
            "geometry": str(self.geom),
            "n_terminals": self.n_terminals,
            "vertices": [list(v) for v in self.vertices],
            "edges": [list(e) for e in self.edges],
            "weight": self.weight,
        }


def mst(config):
    """Minimal spanning tree of the complete geodesic-distance graph.

    Vertex-growing (Prim) construction on the dense distance matrix.  Ties go
    to the edge with the lowest (tree vertex, new vertex) index pair.
    """
    n = config.n
    if n == 1:
        return NetworkTree.build(config.geom, config.terminals, 1, ())
    D = config.distance_matrix()
    in_tree = np.zeros(n, dtype=bool)
    in_tree[0] = True
    best = D[0].copy()
    link = np.zeros(n, dtype=int)
    edges = []
    for _ in range(n - 1):
        cand = np.where(in_tree, np.inf, best)
        j = int(np.argmin(cand))
        edges.append((int(link[j]), j))
        in_tree[j] = True
        closer = (D[j] < best) & ~in_tree
        best = np.where(closer, D[j], best)
        link = np.where(closer, j, link)
    return NetworkTree.build(config.geom, config.terminals, n, edges)


@lru_cache(maxsize=None)
def labeled_trees(n):
    """Edge arrays of all n^(n-2) labeled trees on n vertices, via Pruefer decoding."""
    if n == 1:
        return np.zeros((1, 0, 2), dtype=int)
    if n == 2:
        return np.array([[[0, 1]]])
    out = []
    for seq in itertools.product(range(n), repeat=n - 2):
        degree = [1] * n
        for s in seq:
            degree[s] += 1
        edges = []
        for s in seq:
            leaf = degree.index(1)
            edges.append(sorted((leaf, s)))
            degree[leaf] -= 1
            degree[s] -= 1
        u, v = (i for i in range(n) if degree[i] == 1)
        edges.append([u, v])
        out.append(sorted(edges))
    return np.array(out, dtype=int)


def mst_brute(config):
    """Exhaustive minimum over every labeled spanning tree (n <= 8)."""
    n = config.n
    if n > MAX_BRUTE:
        raise ValueError(f"mst_brute is limited to {MAX_BRUTE} terminals, got {n}")
    trees = labeled_trees(n)
    if n == 1:
        return NetworkTree.build(config.geom, config.terminals, 1, ())
    D = config.distance_matrix()
    w = D[trees[..., 0], trees[..., 1]].sum(axis=1)
    # screen in floating point, then settle near-ties with exact summation
    near = np.flatnonzero(w <= w.min() * (1 + 1e-9) + 1e-300)
    best = min(near, key=lambda k: (math.fsum(D[trees[k, :, 0], trees[k, :, 1]].tolist()),
                                     trees[k].tolist()))
    return NetworkTree.build(config.geom, config.terminals, n, [tuple(e) for e in trees[best]])
