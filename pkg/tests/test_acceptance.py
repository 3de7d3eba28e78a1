"""Acceptance suite, run through ``steinerlab verify --seed 7``.

One PASS/FAIL line per criterion is printed (uncaptured) as each check runs.
Running this file directly prints the same lines without pytest.
"""

import io
import re
import sys

import pytest

from steinerlab.acceptance import CRITERIA
from steinerlab.cli import main

LINE = re.compile(r"^(PASS|FAIL)\s+(\d+) ")


@pytest.fixture(scope="module")
def verify():
    out = io.StringIO()
    code = main(["verify", "--seed", "7"], out)
    lines = {int(m.group(2)): line for line in out.getvalue().splitlines() if (m := LINE.match(line))}
    return code, lines


@pytest.mark.parametrize("number", [c[0] for c in CRITERIA], ids=[c[1] for c in CRITERIA])
def test_criterion(verify, number, capsys):
    _, lines = verify
    with capsys.disabled():
        print("\n" + lines.get(number, f"FAIL {number:2d} (no output)"))
    assert lines[number].startswith("PASS"), lines[number]


def test_verify_exit_code(verify):
    code, lines = verify
    assert sorted(lines) == list(range(1, len(CRITERIA) + 1))
    assert code == 0


if __name__ == "__main__":
    sys.exit(main(["verify", "--seed", "7"]))
