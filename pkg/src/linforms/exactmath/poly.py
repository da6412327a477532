"""Sparse multivariate polynomials with exact integer coefficients.

A polynomial in ``nvars`` variables is a mapping from dense exponent tuples
to nonzero Python ints.  Values are immutable; every operation returns a new
polynomial, so instances can be shared freely.

Terms are always iterated in descending graded-lexicographic order, which
makes printing, hashing and serialization reproducible.
"""

from __future__ import annotations

import re
from functools import reduce
from math import gcd
from typing import Dict, Iterable, Iterator, Mapping, Optional, Sequence, Tuple

Exponent = Tuple[int, ...]

# First five primes above 2**60; used to screen evaluations for nonzero-ness.
SCREEN_PRIMES = (
    1152921504606847009,
    1152921504606847067,
    1152921504606847081,
    1152921504606847123,
    1152921504606847127,
)


def grlex_key(exps: Exponent) -> Tuple[int, Exponent]:
    return (sum(exps), exps)


def monomials_up_to(nvars: int, degree: int) -> list:
    """All exponent tuples of total degree <= ``degree``, ascending grlex."""
    out = []
    for total in range(degree + 1):
        out.extend(_compositions(nvars, total))
    out.sort(key=grlex_key)
    return out


def _compositions(nvars: int, total: int) -> Iterator[Exponent]:
    if nvars == 0:
        if total == 0:
            yield ()
        return
    if nvars == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(nvars - 1, total - first):
            yield (first,) + rest


class Polynomial:
    """Immutable sparse polynomial over the integers.

    >>> x, y = Polynomial.var(2, 0), Polynomial.var(2, 1)
    >>> p = y - x**3
    >>> p(2, 16)
    8
    >>> str(p)
    '-1 * x1^3 + 1 * x2'
    """

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Optional[Mapping[Exponent, int]] = None):
        if nvars < 0:
            raise ValueError("nvars must be non-negative")
        self.nvars = nvars
        clean: Dict[Exponent, int] = {}
        if terms:
            for exps, c in terms.items():
                exps = tuple(exps)
                if len(exps) != nvars:
                    raise ValueError(f"exponent {exps} does not match arity {nvars}")
                if any(e < 0 for e in exps):
                    raise ValueError(f"negative exponent in {exps}")
                if not isinstance(c, int):
                    raise TypeError(f"coefficients must be int, got {type(c).__name__}")
                if c:
                    clean[exps] = c
        self._terms = dict(sorted(clean.items(), key=lambda kv: grlex_key(kv[0]), reverse=True))
        self._hash = None

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls(nvars)

    @classmethod
    def const(cls, nvars: int, c: int) -> "Polynomial":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars: int, index: int) -> "Polynomial":
        if not 0 <= index < nvars:
            raise ValueError(f"variable index {index} out of range for arity {nvars}")
        exps = [0] * nvars
        exps[index] = 1
        return cls(nvars, {tuple(exps): 1})

    @classmethod
    def _raw(cls, nvars: int, terms: Dict[Exponent, int]) -> "Polynomial":
        # trusted fast path: terms already validated, zero-free
        obj = cls.__new__(cls)
        obj.nvars = nvars
        obj._terms = dict(sorted(terms.items(), key=lambda kv: grlex_key(kv[0]), reverse=True))
        obj._hash = None
        return obj

    # -- queries ----------------------------------------------------------

    @property
    def terms(self) -> Dict[Exponent, int]:
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[Exponent, int]]:
        return iter(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        return max(sum(e) for e in self._terms)

    @property
    def height(self) -> int:
        """Largest absolute value of a coefficient (0 for the zero polynomial)."""
        return max((abs(c) for c in self._terms.values()), default=0)

    def degree_in(self, index: int) -> int:
        return max((e[index] for e in self._terms), default=-1)

    def variables(self) -> Tuple[int, ...]:
        used = set()
        for exps in self._terms:
            used.update(i for i, e in enumerate(exps) if e)
        return tuple(sorted(used))

    def content(self) -> int:
        return reduce(gcd, self._terms.values(), 0)

    def leading(self) -> Tuple[Exponent, int]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        return next(iter(self._terms.items()))

    def primitive(self) -> "Polynomial":
        """Divide by the content and make the leading coefficient positive."""
        if not self._terms:
            return self
        g = self.content()
        if self.leading()[1] < 0:
            g = -g
        return Polynomial._raw(self.nvars, {e: c // g for e, c in self._terms.items()})

    def univariate_coeffs(self) -> list:
        """Coefficients ``[c_0, c_1, ..., c_deg]`` of a polynomial in one variable."""
        used = self.variables()
        if len(used) > 1:
            raise ValueError("polynomial is not univariate")
        if not self._terms:
            return []
        idx = used[0] if used else 0
        deg = max(e[idx] if self.nvars else 0 for e in self._terms)
        coeffs = [0] * (deg + 1)
        for exps, c in self._terms.items():
            coeffs[exps[idx] if self.nvars else 0] += c
        return coeffs

    # -- arithmetic -------------------------------------------------------

    def _check(self, other: "Polynomial") -> None:
        if self.nvars != other.nvars:
            raise ValueError(f"arity mismatch: {self.nvars} vs {other.nvars}")

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, int):
            return Polynomial.const(self.nvars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Polynomial._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw(self.nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return Polynomial(self.nvars)
            return Polynomial._raw(self.nvars, {e: c * other for e, c in self._terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: Dict[Exponent, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Polynomial._raw(self.nvars, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative int")
        result = Polynomial.const(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = Polynomial.const(self.nvars, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, tuple(self._terms.items())))
        return self._hash

    # -- evaluation and substitution ---------------------------------------

    def __call__(self, *point: int) -> int:
        return self.eval(point)

    def eval(self, point: Sequence[int]) -> int:
        """Exact value at an integer (or Fraction) point."""
        if len(point) != self.nvars:
            raise ValueError(f"point has {len(point)} coordinates, polynomial has arity {self.nvars}")
        powers = [_power_table(x, self.degree_in(i)) for i, x in enumerate(point)]
        total = 0
        for exps, c in self._terms.items():
            term = c
            for i, e in enumerate(exps):
                if e:
                    term *= powers[i][e]
            total += term
        return total

    def eval_mod(self, point: Sequence[int], modulus: int) -> int:
        """Value modulo ``modulus``, computed without forming big intermediates."""
        if modulus < 2:
            raise ValueError("modulus must be >= 2")
        if len(point) != self.nvars:
            raise ValueError(f"point has {len(point)} coordinates, polynomial has arity {self.nvars}")
        reduced = [x % modulus for x in point]
        total = 0
        for exps, c in self._terms.items():
            term = c % modulus
            for i, e in enumerate(exps):
                if e:
                    term = term * pow(reduced[i], e, modulus) % modulus
            total = (total + term) % modulus
        return total

    def partial_eval(self, values: Mapping[int, int]) -> "Polynomial":
        """Bind the variables in ``values`` (index -> value).

        The result lives in the remaining, unbound variables, re-indexed in
        their original order.
        """
        for i in values:
            if not 0 <= i < self.nvars:
                raise ValueError(f"variable index {i} out of range for arity {self.nvars}")
        keep = [i for i in range(self.nvars) if i not in values]
        powers = {i: _power_table(v, self.degree_in(i)) for i, v in values.items()}
        out: Dict[Exponent, int] = {}
        for exps, c in self._terms.items():
            for i, table in powers.items():
                if exps[i]:
                    c *= table[exps[i]]
            if not isinstance(c, int):
                raise TypeError("partial evaluation must stay integral")
            key = tuple(exps[i] for i in keep)
            out[key] = out.get(key, 0) + c
        return Polynomial(len(keep), out)

    def compose(self, polys: Sequence["Polynomial"]) -> "Polynomial":
        """Substitute ``polys[i]`` for variable ``i``; all must share one arity."""
        if len(polys) != self.nvars:
            raise ValueError(f"need {self.nvars} polynomials, got {len(polys)}")
        if not polys:
            return self
        arity = polys[0].nvars
        if any(q.nvars != arity for q in polys):
            raise ValueError("substituted polynomials must share an arity")
        cache: Dict[Tuple[int, int], Polynomial] = {}

        def power(i: int, e: int) -> Polynomial:
            key = (i, e)
            if key not in cache:
                cache[key] = polys[i] if e == 1 else power(i, e - 1) * polys[i]
            return cache[key]

        total = Polynomial(arity)
        for exps, c in self._terms.items():
            term = Polynomial.const(arity, c)
            for i, e in enumerate(exps):
                if e:
                    term = term * power(i, e)
            total = total + term
        return total

    def embed(self, nvars: int, mapping: Sequence[int]) -> "Polynomial":
        """Re-index variables: variable ``i`` becomes ``mapping[i]`` in arity ``nvars``."""
        if len(mapping) != self.nvars:
            raise ValueError("mapping length must equal arity")
        out: Dict[Exponent, int] = {}
        for exps, c in self._terms.items():
            new = [0] * nvars
            for i, e in enumerate(exps):
                if e:
                    new[mapping[i]] += e
            key = tuple(new)
            out[key] = out.get(key, 0) + c
        return Polynomial(nvars, out)

    # -- text form --------------------------------------------------------

    def to_text(self, names: Optional[Sequence[str]] = None) -> str:
        """Canonical text: ``"c * x1^e1 x2 ..."`` terms joined by ``" + "``."""
        names = list(names) if names is not None else [f"x{i + 1}" for i in range(self.nvars)]
        if not self._terms:
            return "0"
        parts = []
        for exps, c in self._terms.items():
            factors = [names[i] if e == 1 else f"{names[i]}^{e}" for i, e in enumerate(exps) if e]
            parts.append(f"{c} * " + " ".join(factors) if factors else str(c))
        return " + ".join(parts)

    @classmethod
    def from_text(cls, text: str, nvars: int, names: Optional[Sequence[str]] = None) -> "Polynomial":
        names = list(names) if names is not None else [f"x{i + 1}" for i in range(nvars)]
        index = {name: i for i, name in enumerate(names)}
        text = text.strip()
        if text == "0":
            return cls(nvars)
        out: Dict[Exponent, int] = {}
        for chunk in text.split(" + "):
            coeff_str, _, mono = chunk.partition(" * ")
            try:
                coeff = int(coeff_str)
            except ValueError:
                raise ValueError(f"bad coefficient in term {chunk!r}") from None
            exps = [0] * nvars
            for factor in mono.split():
                m = _FACTOR_RE.fullmatch(factor)
                if not m or m.group(1) not in index:
                    raise ValueError(f"bad factor {factor!r} in term {chunk!r}")
                exps[index[m.group(1)]] += int(m.group(2) or 1)
            key = tuple(exps)
            out[key] = out.get(key, 0) + coeff
        return cls(nvars, out)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"Polynomial({self.nvars}, {self.to_text()!r})"


_FACTOR_RE = re.compile(r"([A-Za-z_][A-Za-z_0-9]*?)(?:\^(\d+))?")


def _power_table(x, top: int) -> list:
    table = [1]
    for _ in range(max(top, 0)):
        table.append(table[-1] * x)
    return table


def poly_eval(p: Polynomial, point: Sequence[int]) -> int:
    return p.eval(point)


def poly_eval_mod(p: Polynomial, point: Sequence[int], modulus: int) -> int:
    return p.eval_mod(point, modulus)


def screened_eval(p: Polynomial, point: Sequence[int], primes: Iterable[int] = SCREEN_PRIMES) -> Tuple[int, bool]:
    """Evaluate exactly; report whether the modular screen already saw a nonzero.

    Returns ``(value, screened_nonzero)``.
    """
    screened = any(p.eval_mod(point, q) for q in primes)
    value = p.eval(point)
    if screened and value == 0:
        raise AssertionError("modular screen disagrees with exact evaluation")
    return value, screened


def cauchy_root_bound(f: Polynomial) -> int:
    """Return ``H(f) + 1``, a strict upper bound on the modulus of every complex root."""
    if f.is_zero():
        raise ValueError("zero polynomial has no root bound")
    if len(f.variables()) > 1:
        raise ValueError("root bound needs a univariate polynomial")
    return f.height + 1
