import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linforms.exactmath.poly import (
    SCREEN_PRIMES,
    Polynomial,
    cauchy_root_bound,
    monomials_up_to,
    poly_eval,
    poly_eval_mod,
    screened_eval,
)
from linforms.exactmath.powerexpr import (
    Overflow,
    PowerExpr,
    add,
    compare,
    lit,
    mul,
    normalize,
    power,
    powerexpr_cmp,
    powerexpr_to_bigint,
    to_int,
)

Z2 = [Polynomial.var(2, i) for i in range(2)]


def test_eval_examples():
    z1, z2 = Z2
    assert poly_eval(z2 - z1 ** 3, (2, 16)) == 8
    assert poly_eval(Polynomial.zero(2), (7, -3)) == 0
    assert poly_eval(z1 * z2 - 1, (1, 1)) == 0


def test_eval_arity_mismatch():
    with pytest.raises(ValueError):
        poly_eval(Z2[0], (1, 2, 3))


def test_partial_eval_returns_polynomial_in_rest():
    z1, z2 = Z2
    q = (z2 - z1 ** 3).partial_eval({0: 2})
    assert q.nvars == 1 and q == Polynomial.var(1, 0) - 8


def test_eval_mod_examples():
    z1, z2 = Z2
    assert poly_eval_mod(z2 - z1 ** 3, (2, 16), 5) == 3
    assert poly_eval_mod(Polynomial.zero(3), (1, 2, 3), 11) == 0
    with pytest.raises(ValueError):
        poly_eval_mod(z1, (1, 1), 1)


def test_screen_primes_are_the_first_five_above_2_60():
    from sympy import isprime, nextprime

    expect, p = [], 2 ** 60
    for _ in range(5):
        p = nextprime(p)
        expect.append(p)
    assert list(SCREEN_PRIMES) == expect
    assert all(isprime(q) for q in SCREEN_PRIMES)


def test_screened_eval_agrees():
    z1, z2 = Z2
    assert screened_eval(z2 - z1 ** 3, (2, 16)) == (8, True)
    assert screened_eval(z2 - z1 ** 3, (2, 8)) == (0, False)


def test_cauchy_examples():
    x = Polynomial.var(1, 0)
    assert cauchy_root_bound(x - 5) == 6
    assert cauchy_root_bound(2 * x ** 3 - 7 * x + 1) == 8
    assert cauchy_root_bound(x ** 2 + 1) == 2
    with pytest.raises(ValueError):
        cauchy_root_bound(Polynomial.zero(1))
    with pytest.raises(ValueError):
        cauchy_root_bound(Z2[0] * Z2[1])


def test_cauchy_against_numpy_roots():
    rng = random.Random(7)
    x = Polynomial.var(1, 0)
    for _ in range(200):
        deg, H = rng.randint(1, 6), rng.randint(1, 50)
        cs = [rng.randint(-H, H) for _ in range(deg)] + [rng.choice([-H, H])]
        f = sum((c * x ** i for i, c in enumerate(cs)), Polynomial.zero(1))
        for r in np.roots(cs[::-1]):
            assert abs(r) < cauchy_root_bound(f)


def test_text_round_trip_and_order():
    z1, z2 = Z2
    p = 3 * z1 ** 2 * z2 - z2 + 5
    text = p.to_text()
    assert text == "3 * x1^2 x2 + -1 * x2 + 5"
    assert Polynomial.from_text(text, 2) == p
    assert Polynomial.from_text("0", 2).is_zero()
    with pytest.raises(ValueError):
        Polynomial.from_text("3 * y7", 2)


def test_monomials_grlex_ascending():
    ms = monomials_up_to(2, 2)
    assert ms[0] == (0, 0) and len(ms) == 6
    assert [sum(m) for m in ms] == sorted(sum(m) for m in ms)


def test_primitive_sign_and_content():
    z1, z2 = Z2
    p = (-4 * z1 ** 2 + 6 * z2).primitive()
    assert p == 2 * z1 ** 2 - 3 * z2


def _polys(nvars):
    exps = st.tuples(*[st.integers(0, 2)] * nvars)
    return st.dictionaries(exps, st.integers(-5, 5), max_size=5).map(lambda d: Polynomial(nvars, d))


@settings(max_examples=150, deadline=None)
@given(_polys(3), _polys(3), st.tuples(*[st.integers(-6, 6)] * 3))
def test_arithmetic_agrees_with_evaluation(p, q, pt):
    assert (p * q)(*pt) == p(*pt) * q(*pt)
    assert (p + q)(*pt) == p(*pt) + q(*pt)
    assert (p - q)(*pt) == p(*pt) - q(*pt)


@settings(max_examples=100, deadline=None)
@given(_polys(2), _polys(2), _polys(2), st.tuples(st.integers(-4, 4), st.integers(-4, 4)))
def test_composition_agrees_with_evaluation(p, a, b, pt):
    assert p.compose([a, b])(*pt) == p(a(*pt), b(*pt))


@settings(max_examples=100, deadline=None)
@given(_polys(3), _polys(3))
def test_degree_and_height_recomputed(p, q):
    r = p * q + p
    terms = r.terms
    assert r.height == max((abs(c) for c in terms.values()), default=0)
    assert r.degree == max((sum(e) for e in terms), default=-1)


def test_eval_mod_random_consistency():
    rng = random.Random(3)
    for _ in range(100):
        p = Polynomial(3, {tuple(rng.randint(0, 3) for _ in range(3)): rng.randint(-9, 9) for _ in range(4)})
        pt = [rng.randint(-50, 50) for _ in range(3)]
        q = rng.randint(2, 10 ** 6)
        assert poly_eval_mod(p, pt, q) == poly_eval(p, pt) % q
        assert poly_eval_mod(p, pt, 2) == poly_eval(p, pt) % 2


# -- power expressions ---------------------------------------------------------

def test_powerexpr_compare_examples():
    assert powerexpr_cmp(power(2, 10), lit(1024)) == 0
    assert compare(power(8, power(4, 29)), power(2, mul(3, power(4, 29)))) == 0
    assert compare(power(3, power(3, 3)), power(2, power(2, 5))) == 1


def test_powerexpr_to_bigint_examples():
    assert powerexpr_to_bigint(power(2, 10), 10) == 1024
    assert isinstance(to_int(power(10, 10 ** 6), 100), Overflow)
    assert not to_int(power(10, 10 ** 6), 100)
    assert to_int(mul(2, power(3, 4)), 5) == 162
    assert to_int(power(10, 99), 100) == 10 ** 99
    assert isinstance(to_int(power(10, 100), 100), Overflow)


def test_normalize_collapses_nested_powers():
    e = normalize(power(power(7, 300), 500))
    assert e == PowerExpr("pow", (lit(7), lit(150000)))


def test_json_round_trip():
    e = add(1, mul(3, power(5, power(2, 9))))
    assert PowerExpr.from_json(e.to_json()) == e
    with pytest.raises(ValueError):
        PowerExpr.from_json({"exp": ["2", "3"]})
    with pytest.raises(ValueError):
        PowerExpr.from_json("-4")


def test_compare_sums_with_huge_terms():
    H = power(8, mul(2, power(8, 64)))
    assert compare(add(1, H), H) == 1
    assert compare(add(H, 1), add(1, H)) == 0
    assert compare(add(H, H), mul(2, H)) == 0
    assert compare(add(H, H, 1), mul(2, H)) == 1
    assert compare(add(H, H), mul(3, H)) == -1


def test_compare_close_huge_products():
    a = power(2, 10 ** 60)
    b = mul(power(2, 10 ** 60 - 1), 3)
    assert compare(a, b) == -1 and compare(b, a) == 1


def test_exponent_tower_too_tall():
    with pytest.raises(OverflowError):
        compare(power(2, power(10, 10 ** 6)), power(3, power(10, 10 ** 6)))


def _exprs():
    leaf = st.integers(1, 40).map(lit)
    return st.recursive(
        leaf,
        lambda ch: st.one_of(
            st.tuples(ch, ch).map(lambda t: mul(*t)),
            st.tuples(ch, st.integers(1, 6).map(lit)).map(lambda t: power(*t)),
            st.tuples(ch, ch).map(lambda t: add(*t)),
        ),
        max_leaves=5,
    )


@settings(max_examples=200, deadline=None)
@given(_exprs(), _exprs())
def test_compare_consistent_with_expansion(a, b):
    va, vb = to_int(a, 10 ** 4), to_int(b, 10 ** 4)
    if isinstance(va, Overflow) or isinstance(vb, Overflow):
        return
    assert compare(a, b) == (va > vb) - (va < vb)


def test_compare_is_total_order_on_samples():
    items = [power(2, 100), power(3, 63), mul(2, power(2, 99)), add(power(2, 100), 1), power(5, 43)]
    for a, b, c in itertools.permutations(items, 3):
        if compare(a, b) <= 0 and compare(b, c) <= 0:
            assert compare(a, c) <= 0
