"""Exact positive integers written as nested products and powers.

Values such as ``(2N)^(2 N^(2N^2-N+1))`` have far too many digits to expand,
but their ordering is still decidable.  A ``PowerExpr`` is an expression tree
over int leaves with ``mul``, ``pow`` and ``add`` nodes; ``compare`` orders two
trees exactly:

* small values are expanded and compared as ints;
* otherwise both sides are rewritten as products of powers over a common
  pairwise-coprime basis, where equality is a plain vector comparison and the
  sign of ``sum(g_i * ln c_i)`` is settled with rigorous log intervals whose
  precision doubles until the interval excludes zero (it must, because the
  basis elements are multiplicatively independent);
* sums are handled by log-sum-exp interval bounds, again with doubling
  precision.

Exponents must themselves be expandable ints (up to ``EXPONENT_DIGITS``
decimal digits); towers taller than that raise ``OverflowError``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, List, Optional, Tuple, Union

from mpmath import libmp

EXPONENT_DIGITS = 100_000
# values with fewer digits than this are compared by direct expansion
EXPAND_DIGITS = 20_000
MAX_PRECISION = 1 << 14


@dataclass(frozen=True)
class Overflow:
    """Returned instead of an int when expansion would exceed the digit cap."""

    digit_cap: int
    min_digits: int

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class PowerExpr:
    op: str  # "int" | "mul" | "pow" | "add"
    args: Tuple[Union[int, "PowerExpr"], ...]

    def __post_init__(self):
        if self.op == "int":
            (v,) = self.args
            if not isinstance(v, int) or isinstance(v, bool) or v < 1:
                raise ValueError(f"leaves must be positive ints, got {v!r}")
        elif self.op == "pow":
            if len(self.args) != 2:
                raise ValueError("pow takes exactly (base, exponent)")
        elif self.op in ("mul", "add"):
            if not self.args:
                raise ValueError(f"{self.op} needs at least one operand")
        else:
            raise ValueError(f"unknown op {self.op!r}")

    # -- sugar ------------------------------------------------------------

    def __mul__(self, other) -> "PowerExpr":
        return mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, other) -> "PowerExpr":
        return power(self, other)

    def __rpow__(self, other) -> "PowerExpr":
        return power(other, self)

    def __add__(self, other) -> "PowerExpr":
        return add(self, other)

    __radd__ = __add__

    @property
    def value(self) -> int:
        if self.op != "int":
            raise AttributeError("only leaves carry a value")
        return self.args[0]

    def __str__(self) -> str:
        if self.op == "int":
            return str(self.args[0])
        if self.op == "pow":
            b, e = self.args
            return f"{_wrap(b)}^{_wrap(e)}"
        sep = "*" if self.op == "mul" else " + "
        return sep.join(_wrap(a) for a in self.args)

    def to_json(self):
        if self.op == "int":
            return str(self.args[0])
        return {self.op: [a.to_json() for a in self.args]}

    @classmethod
    def from_json(cls, data) -> "PowerExpr":
        if isinstance(data, bool):
            raise ValueError("booleans are not power expressions")
        if isinstance(data, (str, int)):
            try:
                return lit(int(data))
            except ValueError:
                raise ValueError(f"bad integer literal {data!r}") from None
        if isinstance(data, dict) and len(data) == 1:
            (op, operands), = data.items()
            if op in ("mul", "pow", "add") and isinstance(operands, list):
                return PowerExpr(op, tuple(cls.from_json(x) for x in operands))
        raise ValueError(f"malformed power expression {data!r}")


def _wrap(e: PowerExpr) -> str:
    return str(e) if e.op == "int" else f"({e})"


def lit(n: int) -> PowerExpr:
    return PowerExpr("int", (n,))


def as_expr(x) -> PowerExpr:
    if isinstance(x, PowerExpr):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return lit(x)
    raise TypeError(f"cannot build a power expression from {type(x).__name__}")


def mul(*xs) -> PowerExpr:
    return PowerExpr("mul", tuple(as_expr(x) for x in xs))


def power(base, exponent) -> PowerExpr:
    return PowerExpr("pow", (as_expr(base), as_expr(exponent)))


def add(*xs) -> PowerExpr:
    return PowerExpr("add", tuple(as_expr(x) for x in xs))


# -- normalization ---------------------------------------------------------

_FOLD_DIGITS = 40


def normalize(e: PowerExpr) -> PowerExpr:
    """Flatten products/sums, fold small literals, and collapse nested powers.

    ``(b^e1)^e2`` becomes ``b^(e1*e2)``.  The result denotes the same integer.
    """
    if e.op == "int":
        return e
    if e.op == "pow":
        b, x = normalize(e.args[0]), normalize(e.args[1])
        if x.op == "int" and x.value == 1:
            return b
        if b.op == "int" and b.value == 1:
            return b
        if b.op == "pow":
            return normalize(power(b.args[0], mul(b.args[1], x)))
        if b.op == "int" and x.op == "int" and x.value * b.value.bit_length() < _FOLD_DIGITS * 3:
            return lit(b.value ** x.value)
        return PowerExpr("pow", (b, x))
    parts: List[PowerExpr] = []
    for a in e.args:
        a = normalize(a)
        if a.op == e.op:
            parts.extend(a.args)
        else:
            parts.append(a)
    literal = 1 if e.op == "mul" else 0
    rest = []
    for a in parts:
        if a.op == "int":
            literal = literal * a.value if e.op == "mul" else literal + a.value
        else:
            rest.append(a)
    rest.sort(key=lambda a: str(a.to_json()))
    if e.op == "mul" and literal != 1 or e.op == "add" and literal:
        rest.insert(0, lit(literal))
    if not rest:
        return lit(1)
    if len(rest) == 1:
        return rest[0]
    return PowerExpr(e.op, tuple(rest))


# -- exact expansion -------------------------------------------------------

def _expand(e: PowerExpr) -> int:
    if e.op == "int":
        return e.value
    if e.op == "pow":
        return _expand(e.args[0]) ** _expand(e.args[1])
    if e.op == "mul":
        out = 1
        for a in e.args:
            out *= _expand(a)
        return out
    return sum(_expand(a) for a in e.args)


def to_int(e: PowerExpr, digit_cap: int) -> Union[int, Overflow]:
    """Expand exactly if the value has at most ``digit_cap`` decimal digits."""
    if digit_cap <= 0:
        raise ValueError("digit_cap must be positive")
    e = normalize(e)
    lo, hi = ln_bounds(e, 64)
    lo10, hi10 = _div_interval((lo, hi), _LN10)
    if lo10 >= digit_cap:
        return Overflow(digit_cap, int(lo10) + 1)
    v = _expand(e)
    if hi10 < digit_cap or v < 10 ** digit_cap:
        return v
    return Overflow(digit_cap, digit_cap + 1)


def powerexpr_to_bigint(e: PowerExpr, digit_cap: int) -> Union[int, Overflow]:
    return to_int(e, digit_cap)


def _exponent_int(e: PowerExpr) -> int:
    v = to_int(e, EXPONENT_DIGITS)
    if isinstance(v, Overflow):
        raise OverflowError("exponent too large to expand; power towers are limited to expandable exponents")
    return v


# -- rigorous log intervals ------------------------------------------------

Interval = Tuple[Fraction, Fraction]


def _mpf_to_fraction(x) -> Fraction:
    sign, man, exp, _ = x
    if not man:
        return Fraction(0)
    v = Fraction(int(man)) * (Fraction(2) ** exp)
    return -v if sign else v


def _ln_int(n: int, prec: int) -> Interval:
    if n == 1:
        return (Fraction(0), Fraction(0))
    v = _mpf_to_fraction(libmp.mpf_log(libmp.from_int(n), prec + 20, "n"))
    err = (abs(v) + 1) / (Fraction(2) ** prec)
    return (v - err, v + err)


def _ln_pos(q: Fraction, prec: int) -> Interval:
    v = _mpf_to_fraction(libmp.mpf_log(libmp.from_rational(q.numerator, q.denominator, prec + 20, "n"), prec + 20, "n"))
    err = (abs(v) + 1) / (Fraction(2) ** prec)
    return (v - err, v + err)


def _exp_frac(x: Fraction, prec: int) -> Interval:
    # e^x for moderate x; caller clamps very negative arguments
    v = _mpf_to_fraction(libmp.mpf_exp(libmp.from_rational(x.numerator, x.denominator, prec + 20, "n"), prec + 20, "n"))
    err = v / (Fraction(2) ** prec)
    return (max(v - err, Fraction(0)), v + err)


_LN10 = _ln_int(10, 80)


def _div_interval(a: Interval, b: Interval) -> Interval:
    # b strictly positive
    cands = [a[0] / b[0], a[0] / b[1], a[1] / b[0], a[1] / b[1]]
    return (min(cands), max(cands))


def _log_sum_exp(parts: List[Interval], prec: int) -> Interval:
    ref = max(p[0] for p in parts)
    tiny = Fraction(1, 2 ** prec)
    cutoff = -(prec + 16)
    lo_sum, hi_sum = Fraction(0), Fraction(0)
    for plo, phi in parts:
        if phi - ref < cutoff:
            hi_sum += tiny
            continue
        lo_sum += Fraction(0) if plo - ref < cutoff else _exp_frac(plo - ref, prec)[0]
        hi_sum += _exp_frac(phi - ref, prec)[1]
    lo_sum = max(lo_sum, Fraction(1) - tiny)
    return (ref + _ln_pos(lo_sum, prec)[0], ref + _ln_pos(hi_sum, prec)[1])


def ln_bounds(e: PowerExpr, prec: int) -> Interval:
    """Rigorous enclosure of ``ln(value)``; width shrinks as ``prec`` grows."""
    if e.op == "int":
        return _ln_int(e.value, prec)
    if e.op == "mul":
        lo, hi = Fraction(0), Fraction(0)
        for a in e.args:
            alo, ahi = ln_bounds(a, prec)
            lo, hi = lo + alo, hi + ahi
        return (lo, hi)
    if e.op == "pow":
        k = _exponent_int(e.args[1])
        blo, bhi = ln_bounds(e.args[0], prec + k.bit_length())
        return (k * blo, k * bhi)
    return _log_sum_exp([ln_bounds(a, prec) for a in e.args], prec)


# -- factored form over a coprime basis --------------------------------------

def coprime_basis(nums: Iterable[int]) -> List[int]:
    """Pairwise coprime integers > 1 that multiplicatively generate every input."""
    items = sorted({n for n in nums if n > 1})
    changed = True
    while changed:
        changed = False
        for i in range(len(items)):
            for j in range(i + 1, len(items)):
                a, b = items[i], items[j]
                g = gcd(a, b)
                if g > 1:
                    rest = [x for k, x in enumerate(items) if k not in (i, j)]
                    items = sorted(set(rest + [x for x in (g, a // g, b // g) if x > 1]))
                    changed = True
                    break
            if changed:
                break
    return items


def _factor_over(n: int, basis: List[int]) -> Dict[int, int]:
    out: Dict[int, int] = {}
    for b in basis:
        k = 0
        while n % b == 0:
            n //= b
            k += 1
        if k:
            out[b] = k
    if n != 1:
        raise AssertionError("coprime basis does not generate its input")
    return out


def _raw_factors(e: PowerExpr) -> Optional[Dict[int, int]]:
    """Leaf -> exponent map (leaves not yet coprime); None if a sum is present."""
    if e.op == "int":
        return {e.value: 1} if e.value > 1 else {}
    if e.op == "add":
        return None
    if e.op == "mul":
        out: Dict[int, int] = {}
        for a in e.args:
            f = _raw_factors(a)
            if f is None:
                return None
            for k, v in f.items():
                out[k] = out.get(k, 0) + v
        return out
    f = _raw_factors(e.args[0])
    if f is None:
        return None
    k = _exponent_int(e.args[1])
    return {b: v * k for b, v in f.items()}


def _over_basis(raw: Dict[int, int], basis: List[int]) -> Dict[int, int]:
    out: Dict[int, int] = {}
    for leaf, k in raw.items():
        for b, m in _factor_over(leaf, basis).items():
            out[b] = out.get(b, 0) + m * k
    return {b: v for b, v in out.items() if v}


def factored(e: PowerExpr) -> Optional[Dict[int, int]]:
    """Canonical prime-power-like form ``{coprime base: exponent}``.

    Two sum-free expressions denote the same integer iff their factored forms
    over a shared basis agree; this per-expression form uses the expression's
    own basis, so compare through ``compare`` rather than by dict equality.
    """
    raw = _raw_factors(normalize(e))
    if raw is None:
        return None
    return _over_basis(raw, coprime_basis(raw))


def _sign_linear_form(coeffs: Dict[int, int]) -> int:
    """Sign of ``sum(k * ln b)`` for a nonzero exponent vector over a coprime basis."""
    bits = max(abs(k).bit_length() for k in coeffs.values())
    prec = 64 + bits
    while True:
        lo, hi = Fraction(0), Fraction(0)
        for b, k in coeffs.items():
            blo, bhi = _ln_int(b, prec)
            if k > 0:
                lo, hi = lo + k * blo, hi + k * bhi
            else:
                lo, hi = lo + k * bhi, hi + k * blo
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        prec *= 2
        if prec > MAX_PRECISION + bits:
            raise ArithmeticError("log-linear form did not separate; basis is not independent")


def _addends(e: PowerExpr) -> List[PowerExpr]:
    return list(e.args) if e.op == "add" else [e]


def _sum_parts(e: PowerExpr):
    # (raw factor maps of the big addends, small constant); None if unsupported
    const = 0
    terms = []
    limit = EXPAND_DIGITS * _LN10[0]
    for a in _addends(e):
        lo, _ = ln_bounds(a, 32)
        if lo < limit:
            const += _expand(a)
            continue
        raw = _raw_factors(a)
        if raw is None:
            return None
        terms.append(raw)
    return terms, const


def _canonical_terms(raws: List[Dict[int, int]], basis: List[int]):
    counts: Dict[tuple, int] = {}
    for raw in raws:
        key = tuple(sorted(_over_basis(raw, basis).items()))
        counts[key] = counts.get(key, 0) + 1
    return counts


def _with_count(term, count: int, basis: List[int]) -> tuple:
    out = _over_basis(dict(term), basis)
    for b, m in _factor_over(count, basis).items():
        out[b] = out.get(b, 0) + m
    return tuple(sorted(out.items()))


def _from_terms(terms, const: int) -> PowerExpr:
    parts = [mul(*[power(b, k) for b, k in t]) if t else lit(1) for t in terms]
    if const:
        parts.append(lit(const))
    return normalize(add(*parts)) if len(parts) > 1 else normalize(parts[0])


def _separate(a: PowerExpr, b: PowerExpr, prec: int) -> int:
    while prec <= MAX_PRECISION:
        alo, ahi = ln_bounds(a, prec)
        blo, bhi = ln_bounds(b, prec)
        if alo > bhi:
            return 1
        if ahi < blo:
            return -1
        prec *= 2
    raise ArithmeticError(f"could not order {a} and {b}")


def compare(a, b) -> int:
    """Exact three-way comparison of the integers denoted by ``a`` and ``b``."""
    a, b = normalize(as_expr(a)), normalize(as_expr(b))
    if a == b:
        return 0
    prec = 64
    alo, ahi = ln_bounds(a, prec)
    blo, bhi = ln_bounds(b, prec)
    limit = EXPAND_DIGITS * _LN10[0]
    if ahi < limit and bhi < limit:
        va, vb = _expand(a), _expand(b)
        return (va > vb) - (va < vb)
    if alo > bhi:
        return 1
    if ahi < blo:
        return -1
    fa, fb = _raw_factors(a), _raw_factors(b)
    if fa is not None and fb is not None:
        return _compare_products(fa, fb)
    sa, sb = _sum_parts(a), _sum_parts(b)
    if sa is None or sb is None:
        return _separate(a, b, prec)
    (ra, ca), (rb, cb) = sa, sb
    basis = coprime_basis([leaf for raw in ra + rb for leaf in raw])
    na, nb = _canonical_terms(ra, basis), _canonical_terms(rb, basis)
    # repeated terms become one product carrying the multiplicity
    basis = coprime_basis(basis + list(na.values()) + list(nb.values()))
    ta = sorted(_with_count(t, k, basis) for t, k in na.items())
    tb = sorted(_with_count(t, k, basis) for t, k in nb.items())
    for t in list(ta):
        if t in tb:
            ta.remove(t)
            tb.remove(t)
    if not ta and not tb:
        return (ca > cb) - (ca < cb)
    # every remaining big term exceeds any constant that survived expansion
    if not tb:
        return 1
    if not ta:
        return -1
    if len(ta) == len(tb) == 1 and ca == cb:
        return _compare_products(dict(ta[0]), dict(tb[0]))
    return _separate(_from_terms(ta, ca), _from_terms(tb, cb), prec)


def _compare_products(fa: Dict[int, int], fb: Dict[int, int]) -> int:
    basis = coprime_basis(list(fa) + list(fb))
    ga, gb = _over_basis(fa, basis), _over_basis(fb, basis)
    diff = {k: ga.get(k, 0) - gb.get(k, 0) for k in set(ga) | set(gb)}
    diff = {k: v for k, v in diff.items() if v}
    if not diff:
        return 0
    return _sign_linear_form(diff)


def _leaves(e: PowerExpr) -> List[int]:
    if e.op == "int":
        return [e.value]
    if e.op == "pow":
        return _leaves(e.args[0])
    out: List[int] = []
    for x in e.args:
        out.extend(_leaves(x))
    return out


def powerexpr_cmp(a, b) -> int:
    return compare(a, b)
