#!/usr/bin/env python3
"""Smoke test for the threshold_spectra Python extension.

Builds nothing itself: run `cargo build -p threshold-spectra-py` (or
`--release`) first. The script locates the cdylib, exposes it under the
importable name, and exercises the main types and operations.
"""

import math
import shutil
import sys
import tempfile
from pathlib import Path

REPO_ROOT = Path(__file__).resolve().parent.parent


def load_module():
    candidates = [
        REPO_ROOT / "target" / profile / name
        for profile in ("release", "debug")
        for name in ("libthreshold_spectra.so", "threshold_spectra.so", "libthreshold_spectra.dylib")
    ]
    built = next((p for p in candidates if p.exists()), None)
    if built is None:
        sys.exit("cdylib not found; run `cargo build -p threshold-spectra-py` first")
    staging = Path(tempfile.mkdtemp(prefix="threshold_spectra_py_"))
    shutil.copy2(built, staging / "threshold_spectra.so")
    sys.path.insert(0, str(staging))
    import threshold_spectra

    return threshold_spectra


CHECKS = []


def check(name, condition):
    CHECKS.append((name, bool(condition)))
    print(f"[smoke] {name}: {'PASS' if condition else 'FAIL'}")


def main():
    ts = load_module()

    g = ts.ThresholdGraph("0^2 1^3 0^2 1^2")
    check("parse caret notation", g.n == 9 and g.r == 4 and g.is_connected)
    check("binary round trip", ts.ThresholdGraph("001110011").render() == g.render())
    check("blocks", g.blocks() == [(0, 2), (1, 3), (0, 2), (1, 2)])

    adj = g.adjacency()
    symmetric = all(adj[u][v] == adj[v][u] for u in range(9) for v in range(9))
    check("adjacency symmetric, degree of last vertex is 8",
          symmetric and sum(adj[8]) == 8 and not adj[0][0])

    m = g.matrix(1.0)
    sym = all(abs(m[i][j] - m[j][i]) == 0.0 for i in range(9) for j in range(9))
    check("matrix entries", sym and abs(m[0][2] - 1 / math.sqrt(6)) < 1e-15 and m[0][1] == 0.0)

    red = g.reduce()
    check("reduction chain", red.chain == [-1, 1, 2] and red.final_singleton == 0)
    check("reduction isolated counts",
          red.isolated_zero_count == 2 and red.isolated_lambda_count == 3)
    check("multiplicities", red.multiplicities == {-1: 1, 0: 3, 1: 4, 2: 1})
    check("closed-form prediction agrees",
          g.predicted_multiplicities() == red.multiplicities)

    golden = ts.ThresholdGraph("010101").reduce()
    check("six-bag golden trace",
          golden.chain == [-1, 1, 2, 0, -1] and golden.final_singleton == 1)

    report = g.verify()
    check("verification passes",
          report.all_ok() and report.distinct_count == 4 and report.residual_max <= 1e-9)
    report_scaled = g.verify(lam=-2.5)
    check("verification at lam=-2.5", report_scaled.all_ok())

    vals = ts.jacobi_eigenvalues([[0.0, 1.0], [1.0, 0.0]])
    check("jacobi on 2x2", all(abs(a - b) < 1e-12 for a, b in zip(vals, [-1.0, 1.0])))
    check("count_distinct", ts.count_distinct([0.0, 1e-12, 1.0], 1e-8) == 2)
    check("enumerate_sequences(4)", len(ts.enumerate_sequences(4)) == 15)

    union = ts.union_matrix(["01", "01"], lam=1.0)
    union_vals = ts.jacobi_eigenvalues(union)
    check("union matrix spectrum {-1,-1,1,1}",
          len(union) == 4 and all(abs(a - b) < 1e-12 for a, b in zip(union_vals, [-1, -1, 1, 1])))

    try:
        ts.ThresholdGraph("10")
        check("parse error raises ValueError", False)
    except ValueError:
        check("parse error raises ValueError", True)

    failures = [name for name, ok in CHECKS if not ok]
    print(f"[smoke] {len(CHECKS) - len(failures)}/{len(CHECKS)} checks passed")
    if failures:
        sys.exit(1)


if __name__ == "__main__":
    main()
