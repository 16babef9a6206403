"""Acceptance criteria 1-13, each at exact (zero) tolerance.

Run with ``pytest tests/test_acceptance.py -v`` or directly as a script;
either way one PASS/FAIL line is printed per criterion.
"""

import subprocess
import sys
import time

import pytest

from atiyahkit import selftest

SEED = 42
TIME_LIMITS = {1: 10.0, 11: 1.0}

CRITERIA = {
    1: ("cocycle closedness", selftest.cocycle_closedness),
    2: ("connection independence", selftest.connection_independence),
    3: ("jacobi <=> bianchi", selftest.jacobi_bianchi),
    4: ("split isomorphism", selftest.split_isomorphism),
    5: ("extension-model coherence", selftest.extension_coherence),
    6: ("obstruction biconditional", selftest.obstruction_biconditional),
    7: ("matched round trip", selftest.matched_roundtrip),
    8: ("matched atiyah decomposition", selftest.matched_atiyah),
    9: ("curvature split", selftest.curvature_split),
    10: ("derivations", selftest.derivations),
    11: ("wang fixtures", selftest.wang_fixtures),
    12: ("hexagon diagnostics", selftest.hexagon),
}


def evaluate(number: int) -> tuple[bool, str]:
    name, fn = CRITERIA[number]
    start = time.perf_counter()
    rep = fn(SEED)
    elapsed = time.perf_counter() - start
    ok = rep.ok
    detail = f"{elapsed:.2f}s"
    limit = TIME_LIMITS.get(number)
    if limit is not None and elapsed >= limit:
        ok = False
        detail += f" exceeds {limit:.0f}s"
    if not rep.ok:
        detail += f" witnesses={rep.witnesses[:3]}"
    return ok, f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {name} ({detail})"


def determinism() -> tuple[bool, str]:
    cmd = [sys.executable, "-m", "atiyahkit", "selftest", "--seed", str(SEED)]
    runs = [subprocess.run(cmd, capture_output=True) for _ in range(2)]
    ok = all(r.returncode == 0 for r in runs) and runs[0].stdout == runs[1].stdout and bool(runs[0].stdout)
    lines = runs[0].stdout.count(b"\n")
    return ok, f"[{'PASS' if ok else 'FAIL'}] criterion 13: determinism ({lines} report lines, byte-identical={runs[0].stdout == runs[1].stdout})"


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    ok, line = evaluate(number)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


def test_criterion_13_determinism(capsys):
    ok, line = determinism()
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [evaluate(n) for n in sorted(CRITERIA)] + [determinism()]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
