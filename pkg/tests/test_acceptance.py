"""Acceptance criteria, run at full scale.  Each test prints one PASS/FAIL line."""

import random
import time
from fractions import Fraction

import pytest

from linforms import certify, selftest, witness
from linforms.annihilator import height_bound, simplified_height
from linforms.certify import EXHAUSTIVE, INCONCLUSIVE, STRUCTURAL, MatrixSpec
from linforms.exactmath.powerexpr import compare, mul
from linforms.slp import eval_forms


@pytest.fixture
def report(capsys):
    def emit(k, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {k}: {detail}")
        return ok
    return emit


def _suite(name):
    return selftest.run_suite(name, seed=0, scale="full")


def test_criterion_1_path_weights(report):
    res = _suite("pathweight")
    ok = res.ok and res.seconds < 10
    assert report(1, ok, res.line()), res.failures[:5]


def test_criterion_2_normalization(report):
    res = _suite("normalize")
    ok = res.ok and res.cases == 500
    assert report(2, ok, res.line()), res.failures[:5]


def test_criterion_3_nonvanishing(report):
    res = _suite("nonvanish")
    # N in 1..4, d in {3,4,5}, H in 1..10, 1000 polynomials per cell
    ok = res.ok and res.cases == 4 * 3 * 10 * 1000 and res.seconds < 300
    assert report(3, ok, res.line()), res.failures[:5]


def test_criterion_4_root_bound(report):
    res = _suite("rootbound")
    assert report(4, res.ok, res.line()), res.failures[:5]


def test_criterion_5_perron(report):
    res = _suite("perron")
    assert report(5, res.ok and res.cases > 0, res.line()), res.failures[:5]


def _both_directions(rows, C):
    mat = MatrixSpec.of(rows)
    cert = certify.certify_lower_bound(mat, C)
    again = certify.certify_lower_bound(mat, C)
    found = certify.synthesize_upper_bound(mat, C)
    return (cert.kind == EXHAUSTIVE
            and cert.dumps() == again.dumps()
            and certify.recheck_certificate(cert.dumps())
            and found is not None
            and eval_forms(*found) == tuple(tuple(Fraction(v) for v in r) for r in rows))


def test_criterion_6_desk_scale_certification(report):
    t = time.perf_counter()
    pair_ok = _both_directions([[1, 1], [1, 2]], 2) and _both_directions([[1, 1], [2, 2]], 1)
    pair_secs = time.perf_counter() - t
    rng = random.Random(0)
    violations, kinds = [], []
    for _ in range(50):
        mat = selftest.random_matrix_2x3(rng)
        cert = certify.certify_lower_bound(mat, 4)
        kinds.append(cert.kind)
        if cert.kind == EXHAUSTIVE and certify.synthesize_upper_bound(mat, 3) is not None:
            violations.append(mat.entries)
    ok = pair_ok and pair_secs < 60 and not violations and set(kinds) <= {EXHAUSTIVE, INCONCLUSIVE}
    detail = (f"2x2 pair {'ok' if pair_ok else 'wrong'} in {pair_secs:.1f}s; "
              f"2x3: {kinds.count(EXHAUSTIVE)} exhaustive, {kinds.count(INCONCLUSIVE)} inconclusive, "
              f"{len(violations)} violations")
    assert report(6, ok, detail), violations


def test_criterion_7_structure(report):
    t = time.perf_counter()
    broken = []
    for N in range(2, 9):
        broken += [f"N={N} {c.name}" for c in witness.verify_concluding_chain(N).failures()]
    windows_ok = True
    for N in range(2, 9):
        w = witness.theorem1_windows(1, N).windows
        windows_ok &= all(x.nonempty() for x in w)
        windows_ok &= all(compare(a.high, b.low) < 0 for a, b in zip(w, w[1:]))
    flat = witness.canonical_entries(4)
    mat = MatrixSpec(2, 2, ((flat[0], flat[1]), (flat[2], flat[3])))
    structural = certify.certify_structural(mat).kind == STRUCTURAL
    first_ok = True
    for N in range(2, 9):
        _, H = witness.chain_parameters(N)
        w = witness.theorem1_windows(1, N).windows[0]
        first_ok &= compare(w.low, H) == 0 and compare(w.high, mul(2, H)) == 0 and w.low_strict
    secs = time.perf_counter() - t
    ok = not broken and windows_ok and structural and first_ok and secs < 30
    detail = (f"chain failures {broken or 'none'}; windows ordered {windows_ok}; "
              f"STRUCTURAL {structural}; l=1 reading {first_ok}; {secs:.1f}s")
    assert report(7, ok, detail), broken


def test_criterion_8_height_bound(report):
    bad = []
    for N in range(2, 9):
        if compare(height_bound(N ** (N - 1), N, N, 1), simplified_height(N)) > 0:
            bad.append(N)
    assert report(8, not bad, f"raw bound exceeds N^(2N^(N^2)) for N in {bad or 'none'}"), bad
