import io
import json
import math
import subprocess
import sys

import pytest
from hypothesis import given, settings, strategies as st

from steinerlab.cli import PointFileError, dump_config, load_config, main, parse_points
from steinerlab.geometry import GeometrySpec
from steinerlab.spanning import Configuration


def run(argv):
    out = io.StringIO()
    code = main(argv, out)
    return code, out.getvalue()


@pytest.fixture
def write(tmp_path):
    def _write(text, name="points.txt"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return _write


def test_load_triangle(write):
    config = load_config(write("plane\n0,0\n1,0\n0.5,0.8660254\n"))
    assert config.geom.kind == "plane" and config.n == 3


def test_load_torus_canonicalizes_with_notice(write):
    notices = []
    config = load_config(write("torus:1,0;0,1\n1.2,0.3\n"), notices)
    assert config.terminals[0] == pytest.approx((0.2, 0.3), abs=1e-12)
    assert len(notices) == 1 and ":2:" in notices[0]


@pytest.mark.parametrize("text, line, col, fragment", [
    ("disk\n1.5,0\n", 2, 1, "open unit disk"),
    ("plane\n0,0\n1, 2x\n", 3, 4, "malformed decimal"),
    ("hexagon\n0,0\n", 1, 1, "unknown geometry"),
    ("", 1, 1, "empty"),
    ("# only a comment\n\n", 1, 1, "empty"),
    ("plane\n", 2, 1, "no points"),
    ("sphere\n1,1,0\n", 2, 1, "unit vector"),
    ("plane\n0,0,0\n", 2, 1, "coordinates"),
    ("plane\n0,inf\n", 2, 3, "non-finite"),
])
def test_load_errors(write, text, line, col, fragment):
    with pytest.raises(PointFileError) as info:
        load_config(write(text))
    assert (info.value.line, info.value.column) == (line, col)
    assert fragment in str(info.value)


def test_comments_and_blank_lines(write):
    config = load_config(write("# triangle\n\nplane\n  0,0\n\n1,0 \n# end\n0,1\n"))
    assert config.terminals == ((0.0, 0.0), (1.0, 0.0), (0.0, 1.0))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.floats(-50, 50), st.floats(-50, 50)), min_size=1, max_size=6),
       st.sampled_from([GeometrySpec.plane(), GeometrySpec.torus((1.0, 0.0), (0.3, 0.7)),
                        GeometrySpec.klein(0.7, 1.3)]))
def test_round_trip(pts, geom):
    import warnings
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        config = Configuration(geom, tuple(pts))
        again = parse_points(dump_config(config))
    assert again == config


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1))
                .filter(lambda v: math.hypot(*v) > 1e-3), min_size=1, max_size=5))
def test_round_trip_projective(vs):
    import warnings
    pts = tuple(tuple(c / math.hypot(*v) for c in v) for v in vs)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        config = Configuration(GeometrySpec.projective(), pts)
        assert parse_points(dump_config(config)) == config


def test_ratio_command(write):
    path = write("plane\n0,0\n1,0\n0.5,0.8660254037844386\n")
    code, out = run(["ratio", "--points", path, "--seed", "1"])
    assert code == 0 and float(out) == pytest.approx(0.8660254, abs=1e-6)
    code, out = run(["ratio", "--points", path, "--seed", "1", "--json"])
    assert json.loads(out)["smt"]["weight"] == pytest.approx(math.sqrt(3), abs=1e-9)


def test_dist_mst_smt(write):
    pair = write("plane\n0,0\n3,4\n")
    assert run(["dist", "--points", pair]) == (0, "5\n")
    square = write("plane\n0,0\n1,0\n1,1\n0,1\n", "square.txt")
    assert run(["mst", "--points", square]) == (0, "3\n")
    code, out = run(["smt", "--points", square, "--seed", "0"])
    assert code == 0 and float(out) == pytest.approx(1 + math.sqrt(3), abs=1e-9)
    code, out = run(["mst", "--points", square, "--json"])
    assert json.loads(out)["edges"] == [[0, 1], [0, 3], [1, 2]]


def test_dist_needs_two_points(write):
    assert run(["dist", "--points", write("plane\n0,0\n1,0\n2,0\n")])[0] == 2


def test_curve_command(tmp_path):
    out = tmp_path / "m.csv"
    code, _ = run(["curve", "--r-min", "0.1", "--r-max", "10", "--steps", "100", "--out", str(out)])
    rows = out.read_text().splitlines()
    assert code == 0 and rows[0] == "r,m" and len(rows) == 101
    m = [float(r.split(",")[1]) for r in rows[1:]]
    assert all(a > b for a, b in zip(m, m[1:]))


def test_search_is_byte_identical():
    argv = ["search", "--geometry", "torus:1,0;0,1", "--n", "3", "--iters", "8", "--seed", "5"]
    a, b = run(argv), run(argv)
    assert a == b and a[0] == 0
    assert a[1].startswith("ratio ")


def test_lift_check(write):
    code, out = run(["lift-check", "--points", write("projective\n1,0,0\n0,1,0\n0,0.6,0.8\n"), "--seed", "2"])
    assert code == 0
    assert [l.split()[0] for l in out.splitlines() if l.startswith(("PASS", "FAIL"))] == ["PASS"] * 3


def test_lift_check_needs_quotient(write):
    assert run(["lift-check", "--points", write("plane\n0,0\n1,0\n"), "--seed", "2"])[0] == 2


@pytest.mark.parametrize("argv", [
    [], ["frobnicate"], ["ratio", "--points", "x.txt"], ["smt", "--seed", "1"],
    ["search", "--geometry", "plane", "--seed", "-1"], ["curve", "--r-min", "1"],
    ["curve", "--r-min", "2", "--r-max", "1", "--steps", "3"],
    ["search", "--geometry", "cube", "--seed", "1"], ["mst", "--points", "/nonexistent/file"],
])
def test_usage_errors(argv):
    assert run(argv)[0] == 2


def test_console_entry_point(write):
    path = write("plane\n0,0\n1,0\n0.5,0.8660254037844386\n")
    proc = subprocess.run([sys.executable, "-m", "steinerlab.cli", "ratio", "--points", path, "--seed", "1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert float(proc.stdout) == pytest.approx(0.8660254, abs=1e-6)
