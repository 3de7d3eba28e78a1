"""Command-line interface: ``steinerlab <command> [flags]``.

Point files hold a geometry line followed by one point per line, coordinates
separated by commas.  Blank lines and lines starting with ``#`` are ignored.
"""

import argparse
import json
import math
import sys
import warnings

import numpy as np

from steinerlab.geometry import GeometryError, distance, parse_geometry, point
from steinerlab.spanning import Configuration, mst

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


class PointFileError(ValueError):
    """A point file that cannot be read, with the 1-based position of the problem."""

    def __init__(self, path, line, column, message):
        super().__init__(f"{path}:{line}:{column}: {message}")
        self.path, self.line, self.column = path, line, column


def fmt(x):
    return f"{x:.17g}"


def _fields(text):
    """Comma-separated fields with their 1-based starting columns."""
    out, col = [], 1
    for part in text.split(","):
        lead = len(part) - len(part.lstrip())
        out.append((part.strip(), col + lead))
        col += len(part) + 1
    return out


def parse_points(text, path="<points>", notices=None):
    """Parse point-file text into a Configuration."""
    geom, rows = None, []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip()
        body = line.lstrip()
        if not body or body.startswith("#"):
            continue
        start = len(line) - len(body) + 1
        if geom is None:
            try:
                geom = parse_geometry(body)
            except GeometryError as exc:
                raise PointFileError(path, lineno, start, str(exc)) from None
            continue
        coords = []
        for field, col in _fields(line):
            try:
                value = float(field)
            except ValueError:
                raise PointFileError(path, lineno, col, f"malformed decimal {field!r}") from None
            if not math.isfinite(value):
                raise PointFileError(path, lineno, col, f"non-finite coordinate {field!r}")
            coords.append(value)
        try:
            p = point(geom, coords)
        except GeometryError as exc:
            raise PointFileError(path, lineno, start, str(exc)) from None
        if notices is not None and geom.is_quotient and not np.array_equal(p, coords):
            notices.append(f"{path}:{lineno}: point {_tuple(coords)} canonicalized to {_tuple(p)}")
        rows.append(p)
    if geom is None:
        raise PointFileError(path, 1, 1, "empty point file (expected a geometry line)")
    if not rows:
        raise PointFileError(path, lineno + 1, 1, "no points after the geometry line")
    return Configuration(geom, tuple(rows))


def _tuple(c):
    return "(" + ", ".join(fmt(float(v)) for v in c) + ")"


def load_config(path, notices=None):
    """Read a point file; canonicalization notices are appended to ``notices``."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise PointFileError(path, 0, 0, exc.strerror or str(exc)) from None
    return parse_points(text, path, notices)


def dump_config(config):
    """Point-file text that reloads to identical canonical coordinates."""
    lines = [str(config.geom)]
    lines += [",".join(fmt(c) for c in p) for p in config.terminals]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# commands


def _config(args, out):
    notices = []
    config = load_config(args.points, notices)
    for note in notices:
        print(f"notice: {note}", file=sys.stderr)
    return config


def _emit(args, out, text, payload):
    if args.json:
        json.dump(payload, out, indent=2, sort_keys=True)
        out.write("\n")
    else:
        out.write(text + "\n")


def cmd_dist(args, out):
    config = _config(args, out)
    if config.n != 2:
        raise PointFileError(args.points, 0, 0, f"dist needs exactly 2 points, got {config.n}")
    d = distance(config.geom, *config.terminals)
    _emit(args, out, fmt(d), {"distance": d})


def cmd_mst(args, out):
    tree = mst(_config(args, out))
    _emit(args, out, fmt(tree.weight), tree.to_dict())


def cmd_smt(args, out):
    from steinerlab.steiner import smt_upper

    res = smt_upper(_config(args, out), args.seed)
    _emit(args, out, fmt(res.weight), res.tree.to_dict())


def cmd_ratio(args, out):
    from steinerlab.ratio import ratio

    est = ratio(_config(args, out), args.seed)
    _emit(args, out, fmt(est.ratio), est.to_dict())


def cmd_curve(args, out):
    from steinerlab.ratio import m_curve, write_curve_csv

    samples = m_curve(args.r_min, args.r_max, args.steps)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            write_curve_csv(samples, fh)
    else:
        write_curve_csv(samples, out)


def cmd_search(args, out):
    from steinerlab.ratio import ratio_search

    geom = parse_geometry(args.geometry)
    best = ratio_search(geom, args.n, args.iters, args.seed)
    text = f"ratio {fmt(best.ratio)}\nmst {fmt(best.mst_weight)}\nsmt {fmt(best.smt_weight)}\n"
    text += dump_config(best.config).rstrip("\n")
    _emit(args, out, text, best.to_dict())


def cmd_lift_check(args, out):
    from steinerlab.geometry import CoveringSpec
    from steinerlab.ratio import lift_experiment

    config = _config(args, out)
    if not config.geom.is_quotient:
        raise GeometryError(f"lift-check needs a quotient geometry, got {config.geom}")
    report = lift_experiment(CoveringSpec.over(config.geom), config, args.seed)
    if args.json:
        _emit(args, out, "", {"values": report.values, "checks": report.checks})
    else:
        out.write(report.text())
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_verify(args, out):
    from steinerlab.acceptance import run_all

    results = run_all(args.seed, stream=out)
    passed = sum(r.passed for r in results)
    out.write(f"{passed}/{len(results)} criteria passed\n")
    return EXIT_OK if passed == len(results) else EXIT_FAILED


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _seed(text):
    value = int(text)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer, got {text}")
    return value


def build_parser():
    parser = argparse.ArgumentParser(prog="steinerlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help, points=False, seed=False, json_flag=True):
        p = sub.add_parser(name, help=help)
        if points:
            p.add_argument("--points", required=True, metavar="PATH", help="point file")
        if seed:
            p.add_argument("--seed", required=True, type=_seed, metavar="U64")
        if json_flag:
            p.add_argument("--json", action="store_true", help="emit JSON")
        p.set_defaults(func=func)
        return p

    add("dist", cmd_dist, "geodesic distance between the two points of a file", points=True)
    add("mst", cmd_mst, "minimal spanning tree weight", points=True)
    add("smt", cmd_smt, "Steiner tree upper bound", points=True, seed=True)
    add("ratio", cmd_ratio, "ratio smt/mst of a configuration", points=True, seed=True)
    p = add("curve", cmd_curve, "CSV of the hyperbolic equilateral ratio m(r)", json_flag=False)
    p.add_argument("--r-min", type=float, required=True)
    p.add_argument("--r-max", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--out", metavar="PATH", help="write the CSV here instead of stdout")
    p = add("search", cmd_search, "search for a configuration with small ratio", seed=True)
    p.add_argument("--geometry", required=True, metavar="SPEC")
    p.add_argument("--n", type=int, default=3, help="number of terminals (3 to 6)")
    p.add_argument("--iters", type=_positive_int, default=64)
    add("lift-check", cmd_lift_check, "covering lift experiment for a quotient configuration",
        points=True, seed=True)
    add("verify", cmd_verify, "run the acceptance suite", seed=True, json_flag=False)
    return parser


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            code = args.func(args, out)
    except (PointFileError, GeometryError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK if code is None else code


if __name__ == "__main__":
    sys.exit(main())
