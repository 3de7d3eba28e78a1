import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from steinerlab.geometry import GeometrySpec
from steinerlab.ratio import random_configuration
from steinerlab.spanning import (
    Configuration, DuplicateTerminalWarning, NetworkTree, labeled_trees, mst, mst_brute,
)

PLANE = GeometrySpec.plane()
GEOMS = [PLANE, GeometrySpec.disk(), GeometrySpec.sphere(), GeometrySpec.torus(),
         GeometrySpec.klein(1.0, 1.0), GeometrySpec.projective()]


def test_equilateral_triangle():
    tri = Configuration(PLANE, ((0, 0), (1, 0), (0.5, math.sqrt(3) / 2)))
    assert mst(tri).weight == pytest.approx(2.0, abs=1e-12)


def test_two_points():
    tree = mst(Configuration(PLANE, ((0, 0), (0.3, 0.4))))
    assert tree.weight == 0.5 and tree.edges == ((0, 1),)


def test_collinear_chain():
    tree = mst_brute(Configuration(PLANE, ((0, 0), (1, 0), (2, 0))))
    assert tree.weight == 2.0
    assert tree.edges == ((0, 1), (1, 2))


def test_unit_square():
    assert mst_brute(Configuration(PLANE, ((0, 0), (1, 0), (1, 1), (0, 1)))).weight == 3.0


def test_single_point():
    tree = mst(Configuration(PLANE, ((0.2, 0.1),)))
    assert tree.weight == 0.0 and tree.edges == ()


@pytest.mark.parametrize("n", range(1, 8))
def test_pruefer_counts(n):
    trees = labeled_trees(n)
    assert len(trees) == max(1, n ** (n - 2))
    assert len({t.tobytes() for t in trees}) == len(trees)


@pytest.mark.parametrize("geom", GEOMS, ids=str)
def test_mst_matches_brute_force(geom):
    rng = np.random.default_rng(11)
    for n in range(2, 8):
        config = random_configuration(geom, n, rng)
        assert mst(config).weight == mst_brute(config).weight


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.floats(0, 1), st.floats(0, 1)), min_size=2, max_size=6, unique=True))
def test_mst_is_a_spanning_tree(pts):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DuplicateTerminalWarning)
        tree = mst(Configuration(PLANE, tuple(pts)))
    assert tree.is_tree()
    assert tree.weight == pytest.approx(sum(tree.edge_lengths()), abs=1e-12)


def test_duplicate_terminals_warn():
    with pytest.warns(DuplicateTerminalWarning):
        config = Configuration(PLANE, ((0, 0), (0, 0), (1, 0)))
    assert mst(config).weight == 1.0


def test_weight_independent_of_edge_order():
    verts = ((0, 0), (1, 0), (2, 0), (0.5, 0.5))
    a = NetworkTree.build(PLANE, verts, 4, [(0, 1), (1, 2), (3, 1)])
    b = NetworkTree.build(PLANE, verts, 4, [(1, 3), (2, 1), (1, 0)])
    assert a.weight == b.weight


def test_brute_force_limit():
    pts = tuple((i, 0) for i in range(9))
    with pytest.raises(ValueError):
        mst_brute(Configuration(PLANE, pts))
