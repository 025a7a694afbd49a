"""One test per acceptance criterion, each at its stated tolerance.  A
PASS/FAIL line per criterion is printed in the terminal summary."""

import subprocess
import sys

import pytest

from hardybloch.acceptance import ACCEPTANCE

from conftest import ACCEPTANCE_LINES


def _record(label, passed, detail):
    line = f"{'PASS' if passed else 'FAIL'}  {label}  {detail}".rstrip()
    ACCEPTANCE_LINES.append(line)
    print(line)


@pytest.mark.parametrize("label,fn", ACCEPTANCE, ids=[label.split(".")[0] for label, _ in ACCEPTANCE])
def test_criterion(label, fn, cfg):
    c = fn(cfg)
    measured = "" if c.measured is None else f"measured {c.measured:.6g}"
    bound = "" if c.bound is None else f" (target {c.bound:.6g})"
    _record(label, c.passed, f"{measured}{bound} {c.detail}")
    assert c.passed, c.detail


def test_criterion_12_reproducible_reports():
    cmd = [sys.executable, "-m", "hardybloch", "verify", "--seed", "12345"]
    runs = [subprocess.run(cmd, capture_output=True) for _ in range(2)]
    same = runs[0].stdout == runs[1].stdout and len(runs[0].stdout) > 0
    _record("12. reproducibility", same, f"{len(runs[0].stdout)} bytes, exit codes {[r.returncode for r in runs]}")
    assert same
