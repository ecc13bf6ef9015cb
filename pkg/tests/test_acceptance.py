"""Acceptance gate: one criterion per test, one pass/fail line each.

Each test prints a single `ACCEPTANCE <n>: PASS|FAIL` line (bypassing
pytest capture so the line always reaches the log) and then asserts the
same condition. Criteria 3 and 11 are implemented faithfully and are
expected to fail: the vector-level multiplication-covariance identity
does not hold for generic atomic measures (see the model suite's
`multiplication_covariance` reports), which in turn makes `verify all`
exit nonzero. See README.md, "Known failing identity".
"""

import time

import pytest

from opmodel.cli import main
from opmodel.suites import (berezanskii_suite, completion_suite, heinz_suite,
                            herglotz_suite, kernel_suite, model_suite,
                            perturbation_suite, uniqueness_suite, weyl_suite)


@pytest.fixture
def record(capsys):
    """Print one ACCEPTANCE line per criterion on the real stdout."""
    def _record(num: int, label: str, ok: bool, detail: str = "") -> bool:
        line = f"ACCEPTANCE {num}: {'PASS' if ok else 'FAIL'} - {label}"
        if detail:
            line += f" ({detail})"
        with capsys.disabled():
            print(line, flush=True)
        return ok
    return _record


def _collect(reports, wanted):
    worst = {name: 0.0 for name in wanted}
    ok = True
    for rep in reports:
        if rep.identity in worst:
            worst[rep.identity] = max(worst[rep.identity], rep.residual)
            ok = ok and rep.passed
    return ok, worst


def test_criterion_01_lambda_parseval(record):
    start = time.monotonic()
    ok, worst = _collect(model_suite(seed=1, count=200, probes=10),
                         ("gram_lambda", "parseval"))
    elapsed = time.monotonic() - start
    ok = ok and elapsed < 10.0
    assert record(1, "Lambda embedding Gram and Parseval identity", ok,
                   f"worst {max(worst.values()):.2e}, {elapsed:.1f}s")


def test_criterion_02_kernel(record):
    ok, worst = _collect(kernel_suite(seed=2, count=50),
                         ("lambda_kernel", "block_diagonal",
                          "kernel_inclusion", "lambda_range_lower_bound"))
    assert record(2, "embedding kernel equals measure kernel; "
                      "off-diagonal blocks vanish", ok,
                   f"worst {max(worst.values()):.2e}")


def test_criterion_03_s_operator(record):
    ok, worst = _collect(model_suite(seed=1, count=200, probes=10),
                         ("s_intertwining", "multiplication_covariance",
                          "s_full_line_identity"))
    assert record(3, "S(B) intertwining, full-line identity, and "
                      "vector-level covariance", ok,
                   f"intertwining {worst['s_intertwining']:.2e}, "
                   f"covariance {worst['multiplication_covariance']:.2e}")


def test_criterion_04_heinz(record):
    start = time.monotonic()
    ok, worst = _collect(heinz_suite(seed=3, count=500),
                         ("heinz_contraction", "range_inclusion"))
    elapsed = time.monotonic() - start
    ok = ok and elapsed < 20.0
    assert record(4, "Heinz contraction and range inclusion", ok,
                   f"worst excess {worst['heinz_contraction']:.2e}, "
                   f"{elapsed:.1f}s")


def test_criterion_05_berezanskii(record):
    ok, worst = _collect(berezanskii_suite(seed=4, count=1000),
                         ("berezanskii_isometry",))
    assert record(5, "step-function isometry on 1000 instances", ok,
                   f"worst {worst['berezanskii_isometry']:.2e}")


def test_criterion_06_uniqueness(record):
    ok, worst = _collect(uniqueness_suite(seed=5, count=20, rotations=20),
                         ("construction_uniqueness",))
    assert record(6, "basis independence of un-normalized fiber Grams", ok,
                   f"worst {worst['construction_uniqueness']:.2e}")


def test_criterion_07_diagonalization(record):
    ok, worst = _collect(
        perturbation_suite(seed=6, count=200, zpoints=20),
        ("omega_total_mass", "m_function_agreement", "diagonalization"))
    assert record(7, "perturbation measure mass, m-function agreement, "
                      "diagonalization", ok,
                   f"worst {max(worst.values()):.2e}")


def test_criterion_08_weyl(record):
    ok, worst = _collect(weyl_suite(seed=7, count=50, grid_points=100),
                         ("weyl_normalization", "weyl_herglotz_scan"))
    assert record(8, "Weyl-Titchmarsh normalization and positivity scan",
                   ok, f"worst {max(worst.values()):.2e}")


def test_criterion_09_herglotz_round_trip(record):
    ok, worst = _collect(herglotz_suite(seed=8, count=50),
                         ("herglotz_round_trip",))
    assert record(9, "Herglotz coefficient and atom recovery within 1e-6",
                   ok, f"worst {worst['herglotz_round_trip']:.2e}")


def test_criterion_10_completion(record):
    ok, worst = _collect(completion_suite(seed=9, count=100),
                         ("completion_isometry",))
    assert record(10, "two completion routes isometric via explicit map",
                   ok, f"worst {worst['completion_isometry']:.2e}")


def test_criterion_11_cli_determinism(record, tmp_path):
    start = time.monotonic()
    codes, texts = [], []
    for run in range(2):
        out = tmp_path / f"run{run}.jsonl"
        codes.append(main(["--seed", "1", "--count", "50",
                           "--out", str(out), "verify", "all"]))
        texts.append(out.read_bytes())
    elapsed = time.monotonic() - start
    identical = texts[0] == texts[1]
    ok = identical and codes == [0, 0] and elapsed < 120.0
    assert record(11, "verify all twice: byte-identical, exit 0, under "
                       "2 minutes", ok,
                   f"identical={identical}, codes={codes}, {elapsed:.0f}s")
