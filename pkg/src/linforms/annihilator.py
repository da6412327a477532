"""Annihilating polynomials of integer polynomial maps, plus degree and height bounds.

Given ``P_1..P_N`` in ``k`` variables, an annihilator is a nonzero integer
polynomial ``A(Z_1..Z_N)`` with ``A(P_1, ..., P_N) == 0`` identically.  We find
one by linear algebra: the unknown coefficients of ``A`` on every monomial of
degree ``<= D`` must make each monomial coefficient of the composition vanish.
``D`` grows from 1 up to a cap.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb, prod
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .exactmath.poly import SCREEN_PRIMES, Exponent, Polynomial, monomials_up_to, screened_eval
from .exactmath.powerexpr import PowerExpr, add, mul, power
from .linalg import SparseRow, kernel, rank_mod_p

# how many kernel vectors a result keeps; callers may try each of them
KERNEL_VECTORS = 3
DEFAULT_CAP = 8


def perron_degree_bound(degrees: Sequence[int]) -> int:
    """``prod(d_i) / min(d_i)``; degrees below 1 count as 1."""
    if not degrees:
        raise ValueError("need at least one degree")
    ds = [max(int(d), 1) for d in degrees]
    return prod(ds) // min(ds)


def height_bound(deg_P: int, N: int, d_max: int, h_max: int) -> PowerExpr:
    """``1 + (B * N^(d_max*deg_P) * h_max^deg_P)^(B-1)`` with ``B = binom(deg_P + N, N)``."""
    if min(deg_P, N, d_max, h_max) < 1:
        raise ValueError("all arguments must be >= 1")
    B = comb(deg_P + N, N)
    inner = mul(B, power(N, d_max * deg_P), power(h_max, deg_P))
    return add(1, power(inner, B - 1))


def simplified_height(N: int) -> PowerExpr:
    """The closed-form height constant ``N^(2 N^(N^2))`` used for topology maps."""
    return power(N, mul(2, power(N, N * N)))


@dataclass(frozen=True)
class BoundReport:
    perron_degree: int
    height_bound: PowerExpr
    d_max: int
    h_max: int


def bound_report(polys: Sequence[Polynomial]) -> BoundReport:
    N = len(polys)
    degrees = [p.degree for p in polys]
    d_max = max(max(degrees), 1)
    h_max = max(max((p.height for p in polys), default=1), 1)
    deg_P = perron_degree_bound(degrees)
    return BoundReport(deg_P, height_bound(deg_P, N, d_max, h_max), d_max, h_max)


@dataclass(frozen=True)
class AnnihilatorResult:
    annihilator: Polynomial
    degree_used: int
    perron_bound: int
    cap: int
    alternatives: Tuple[Polynomial, ...] = field(default=(), compare=False)

    @property
    def candidates(self) -> Tuple[Polynomial, ...]:
        return (self.annihilator,) + self.alternatives


@dataclass(frozen=True)
class CapExhausted:
    """No annihilator of degree ``<= cap`` exists.  Says nothing about higher degrees."""

    cap: int
    perron_bound: int

    def __bool__(self) -> bool:
        return False


class ExplicitEntriesRequired(TypeError):
    """An annihilator can only be evaluated at explicit integers."""


def z_names(N: int, n: Optional[int] = None) -> List[str]:
    if n is None:
        return [f"z{i}" for i in range(1, N + 1)]
    return [f"z{s}_{t}" for s in range(1, N // n + 1) for t in range(1, n + 1)]


def _composition_rows(polys: Sequence[Polynomial], monos: List[Exponent]) -> Tuple[List[SparseRow], List[Polynomial]]:
    """Equation rows (one per monomial of the composition) and the composed products."""
    k = polys[0].nvars
    products: Dict[Exponent, Polynomial] = {}
    one = Polynomial.const(k, 1)
    for alpha in monos:
        if not any(alpha):
            products[alpha] = one
            continue
        # peel one factor off the last used variable; the parent is already built
        i = max(j for j, e in enumerate(alpha) if e)
        parent = alpha[:i] + (alpha[i] - 1,) + alpha[i + 1:]
        products[alpha] = products[parent] * polys[i]
    eqs: Dict[Exponent, SparseRow] = {}
    for col, alpha in enumerate(monos):
        for exps, c in products[alpha].items():
            eqs.setdefault(exps, {})[col] = c
    return [eqs[e] for e in sorted(eqs)], [products[a] for a in monos]


def _has_kernel_mod_p(rows: List[SparseRow], ncols: int) -> bool:
    # full rank mod p forces full rank over the rationals
    return rank_mod_p(rows, SCREEN_PRIMES[0]) < ncols


def find_annihilator(polys: Sequence[Polynomial], degree_cap: Optional[int] = None,
                     kernel_vectors: int = KERNEL_VECTORS) -> Union[AnnihilatorResult, CapExhausted]:
    """Smallest-degree annihilator up to ``degree_cap`` (default ``min(perron, 8)``)."""
    polys = list(polys)
    if not polys:
        raise ValueError("need at least one polynomial")
    if len({p.nvars for p in polys}) != 1:
        raise ValueError("all polynomials must share one arity")
    N = len(polys)
    perron = perron_degree_bound([p.degree for p in polys])
    cap = min(perron, DEFAULT_CAP) if degree_cap is None else degree_cap
    if cap < 1:
        raise ValueError("degree_cap must be >= 1")
    for D in range(1, cap + 1):
        monos = monomials_up_to(N, D)
        rows, _ = _composition_rows(polys, monos)
        if not _has_kernel_mod_p(rows, len(monos)):
            continue
        vecs = kernel(rows, len(monos), limit=kernel_vectors)
        if not vecs:
            continue
        found = []
        for vec in vecs:
            a = Polynomial(N, {monos[c]: v for c, v in enumerate(vec) if v}).primitive()
            if not a.compose(polys).is_zero():
                raise AssertionError("kernel vector does not annihilate the map")
            found.append(a)
        return AnnihilatorResult(found[0], D, perron, cap, tuple(found[1:]))
    return CapExhausted(cap, perron)


def check_annihilates(a: Polynomial, polys: Sequence[Polynomial]) -> bool:
    return not a.is_zero() and a.compose(list(polys)).is_zero()


def evaluate_annihilator(res: Union[AnnihilatorResult, Polynomial], entries: Sequence) -> int:
    """Exact value at the flattened (row-major) matrix entries."""
    if isinstance(res, CapExhausted):
        raise TypeError("no annihilator to evaluate (degree cap exhausted)")
    poly = res.annihilator if isinstance(res, AnnihilatorResult) else res
    flat = _flatten(entries)
    for v in flat:
        if isinstance(v, PowerExpr):
            raise ExplicitEntriesRequired("annihilators can only be evaluated at explicit integer entries")
        if not isinstance(v, int) or isinstance(v, bool):
            raise TypeError(f"matrix entries must be ints, got {type(v).__name__}")
    return screened_eval(poly, flat)[0]


def _flatten(entries) -> list:
    if hasattr(entries, "flat"):
        entries = entries.flat()
    out = []
    for e in entries:
        if isinstance(e, (list, tuple)):
            out.extend(e)
        else:
            out.append(e)
    return out
