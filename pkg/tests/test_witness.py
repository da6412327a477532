import random

import pytest

from linforms.exactmath.poly import Polynomial, poly_eval
from linforms.exactmath.powerexpr import compare, lit, mul, power
from linforms.selftest import nonvanish_polys, random_poly
from linforms.witness import (
    DigitCapExceeded,
    NonvanishingViolation,
    WitnessSequence,
    build_sequence,
    canonical_entries,
    chain_parameters,
    check_nonvanish,
    concluding_windows,
    theorem1_windows,
    verify_concluding_chain,
)


def test_build_sequence_examples():
    assert build_sequence(3, 1, 2).values == (2, 16)
    assert build_sequence(3, 1, 3).values == (2, 16, 8192)
    assert build_sequence(3, 5, 1).values == (6,)


def test_degree_padding():
    assert build_sequence(1, 1, 2) == build_sequence(3, 1, 2)
    assert build_sequence(4, 2, 3).values[2] == 2 * 2 * (2 * 2 * 3 ** 4) ** 4


def test_digit_cap():
    with pytest.raises(DigitCapExceeded):
        build_sequence(5, 10, 6, digit_cap=1000)


def test_check_nonvanish_examples():
    z1, z2 = Polynomial.var(2, 0), Polynomial.var(2, 1)
    p = z2 - z1 ** 3
    assert check_nonvanish(p, build_sequence(3, 1, 2)) == 8
    # the growth condition is needed: 8 < 2 * 1 * 2^3
    assert poly_eval(p, (2, 8)) == 0
    with pytest.raises(ValueError):
        check_nonvanish(p, WitnessSequence(3, 1, 2, (2, 8)))


def test_check_nonvanish_preconditions():
    seq = build_sequence(3, 2, 2)
    z1 = Polynomial.var(2, 0)
    with pytest.raises(ValueError):
        check_nonvanish(z1 ** 4, seq)
    with pytest.raises(ValueError):
        check_nonvanish(3 * z1, seq)
    with pytest.raises(ValueError):
        check_nonvanish(Polynomial.zero(2), seq)


def test_violation_is_loud():
    # an admissible-looking sequence cannot produce a zero; force one by hand
    seq = build_sequence(3, 1, 1)
    x = Polynomial.var(1, 0)
    assert check_nonvanish(x - 1, seq) == 1
    assert issubclass(NonvanishingViolation, AssertionError)


def test_univariate_case_by_root_bound():
    rng = random.Random(1)
    for H in range(1, 11):
        seq = build_sequence(3, H, 1)
        for _ in range(50):
            assert check_nonvanish(random_poly(rng, 1, 3, H), seq) != 0


def test_nonvanish_fuzz_small():
    rng = random.Random(2)
    for N in (2, 3):
        for d in (3, 4):
            for H in (1, 5, 10):
                seq = build_sequence(d, H, N)
                for p in nonvanish_polys(rng, N, d, H, 60):
                    assert check_nonvanish(p, seq) != 0


def test_window_examples():
    w = theorem1_windows(2, 2).windows
    assert w[0].low == power(4, mul(2, power(4, 16)))
    assert w[3].low == power(8, mul(2, power(4, 29)))
    assert w[3].high is None and not w[3].low_strict
    with pytest.raises(ValueError):
        theorem1_windows(1, 1)


def test_windows_nonempty_and_ordered():
    for N in range(2, 9):
        w = theorem1_windows(1, N).windows
        assert all(x.nonempty() for x in w)
        for a, b in zip(w, w[1:]):
            assert compare(a.high, b.low) < 0


def test_first_window_reading():
    # (H, 2H] with H = N^(2N^(N^2)): the factor 2 multiplies, it is not part of the base
    for N in range(2, 9):
        d, H = chain_parameters(N)
        w = theorem1_windows(1, N).windows[0]
        assert compare(w.low, H) == 0 and compare(w.high, mul(2, H)) == 0
        assert compare(w.high, power(2 * N, mul(2, power(N, N * N)))) < 0


def test_chain_small_cases_hold():
    for N in (2, 3):
        rep = verify_concluding_chain(N)
        assert rep.passed, rep.failures()


def test_chain_from_N4_reports_failing_inequality():
    rep = verify_concluding_chain(4)
    assert [c.name for c in rep.failures()] == ["window-chain 2"]
    # the inner windows themselves chain and sit inside the stated ones
    assert all(c.holds for c in rep.checks if not c.name.startswith("window-chain"))


def test_chain_failure_is_exact_at_N4():
    # low_3 = 2^(3*4^26) exactly equals high_2^d, so 2H * high_2^d exceeds low_3 + 1
    d, H = chain_parameters(4)
    w = theorem1_windows(2, 2).windows
    assert compare(w[2].low, power(w[1].high, d)) == 0
    assert compare(w[2].low, power(2, mul(3, power(4, 26)))) == 0


def test_inner_windows_fit():
    for N in range(2, 9):
        S, T = concluding_windows(N).windows, theorem1_windows(1, N).windows
        for l in range(1, N):
            assert compare(S[l - 1].low, T[l - 1].low) >= 0
            assert compare(S[l - 1].high, T[l - 1].high) <= 0
        assert compare(T[-1].low, S[-1].low) >= 0


def test_canonical_entries_in_windows():
    for N in range(2, 9):
        T = theorem1_windows(1, N).windows
        assert all(w.check(a) is None for w, a in zip(T, canonical_entries(N)))


def test_chain_cap():
    with pytest.raises(ValueError):
        verify_concluding_chain(9)
    with pytest.raises(ValueError):
        verify_concluding_chain(1)
