"""Coefficient-free skeletons of normalized algorithms.

A topology fixes, for each step, which operand takes the implicit ``1`` and
which takes a free coefficient ``X_i``, plus which node feeds each output
(scaled by a free ``Y_s``).  ``parametrize`` turns it into the matrix of
polynomials whose values at concrete coefficients are the computed rows.

Parameter polynomials use variables ``Y1..Ym`` (indices ``0..m-1``) followed by
``X1..XC`` (indices ``m..m+C-1``).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .exactmath.poly import Polynomial
from .slp import Ref, check_ref, u, x


@dataclass(frozen=True)
class Topology:
    n: int
    m: int
    steps: Tuple[Tuple[Ref, Ref], ...]
    outputs: Tuple[Ref, ...]

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(tuple(s) for s in self.steps))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        if len(self.outputs) != self.m:
            raise ValueError(f"need {self.m} outputs, got {len(self.outputs)}")
        for i, (j, k) in enumerate(self.steps, start=1):
            check_ref(j, self.n, i)
            check_ref(k, self.n, i)
        for o in self.outputs:
            check_ref(o, self.n, len(self.steps) + 1)

    @property
    def C(self) -> int:
        return len(self.steps)

    def encode(self) -> str:
        steps = ";".join(f"u{i}<-({j},{k})" for i, (j, k) in enumerate(self.steps, start=1))
        return f"{steps}|out:" + ",".join(str(o) for o in self.outputs)

    @classmethod
    def decode(cls, text: str, n: int) -> "Topology":
        body, sep, outs = text.partition("|out:")
        if not sep:
            raise ValueError(f"missing output section in {text!r}")
        steps = []
        if body:
            for i, chunk in enumerate(body.split(";"), start=1):
                lhs, arrow, rhs = chunk.partition("<-")
                if not arrow or lhs != f"u{i}" or not (rhs.startswith("(") and rhs.endswith(")")):
                    raise ValueError(f"bad step {chunk!r}")
                j, k = rhs[1:-1].split(",")
                steps.append((Ref.parse(j), Ref.parse(k)))
        outputs = [Ref.parse(o) for o in outs.split(",")] if outs else []
        return cls(n, len(outputs), tuple(steps), tuple(outputs))

    def live(self) -> bool:
        """True when every step feeds some output."""
        seen = set()
        stack = [o for o in self.outputs if o.kind == "u"]
        while stack:
            v = stack.pop()
            if v.index in seen:
                continue
            seen.add(v.index)
            for r in self.steps[v.index - 1]:
                if r.kind == "u":
                    stack.append(r)
        return len(seen) == self.C

    def __str__(self) -> str:
        return self.encode()


def count_parameters(t: Topology) -> int:
    return t.C + t.m


def _ref_key(r: Ref, relabel: Dict[int, int]) -> Tuple[int, int]:
    return (0, r.index) if r.kind == "x" else (1, relabel[r.index])


def canonical_steps(steps: Sequence[Tuple[Ref, Ref]]) -> Tuple[Tuple[Tuple[Ref, Ref], ...], Dict[int, int]]:
    """Reorder steps greedily: always emit the ready step with the smallest operand key.

    Returns the relabelled steps and the old->new variable index map.  The
    map is idempotent, so a skeleton is canonical iff it is its own image.
    """
    relabel: Dict[int, int] = {}
    remaining = list(range(1, len(steps) + 1))
    out = []
    while remaining:
        best = None
        for i in remaining:
            j, k = steps[i - 1]
            if all(r.kind == "x" or r.index in relabel for r in (j, k)):
                key = (_ref_key(j, relabel), _ref_key(k, relabel))
                if best is None or key < best[0]:
                    best = (key, i)
        _, pick = best
        relabel[pick] = len(out) + 1
        j, k = steps[pick - 1]
        out.append(tuple(r if r.kind == "x" else u(relabel[r.index]) for r in (j, k)))
        remaining.remove(pick)
    return tuple(out), relabel


def _skeletons(n: int, C: int) -> Iterator[Tuple[Tuple[Ref, Ref], ...]]:
    pools = []
    for i in range(1, C + 1):
        nodes = [x(t) for t in range(1, n + 1)] + [u(p) for p in range(1, i)]
        pools.append(list(itertools.product(nodes, repeat=2)))
    return itertools.product(*pools)


def enumerate_topologies(n: int, m: int, C: int, dedup: bool = True,
                         part: Optional[Tuple[int, int]] = None) -> Iterator[Topology]:
    """Stream every topology with exactly ``C`` steps and ``m`` outputs.

    With ``dedup`` only canonical step orders are kept and topologies with a
    step that feeds no output are dropped (they compute the same rows as a
    cheaper topology).  ``part=(k, K)`` yields only skeletons whose index is
    ``k`` modulo ``K``, for splitting the stream across workers.
    """
    if n < 1 or m < 1 or C < 0:
        raise ValueError("need n >= 1, m >= 1, C >= 0")
    for idx, steps in enumerate(_skeletons(n, C)):
        if part is not None and idx % part[1] != part[0]:
            continue
        if dedup and canonical_steps(steps)[0] != steps:
            continue
        nodes = [x(t) for t in range(1, n + 1)] + [u(i) for i in range(1, C + 1)]
        for outs in itertools.product(nodes, repeat=m):
            t = Topology(n, m, steps, outs)
            if dedup and not t.live():
                continue
            yield t


@dataclass(frozen=True)
class ParametrizedMatrix:
    m: int
    n: int
    C: int
    entries: Tuple[Tuple[Polynomial, ...], ...]

    @property
    def nvars(self) -> int:
        return self.m + self.C

    def names(self) -> List[str]:
        return [f"Y{s}" for s in range(1, self.m + 1)] + [f"X{i}" for i in range(1, self.C + 1)]

    def flat(self) -> List[Polynomial]:
        return [p for row in self.entries for p in row]

    def canonical_key(self) -> Tuple[str, ...]:
        """Serialization invariant under renaming the X variables."""
        best = None
        for perm in itertools.permutations(range(self.C)):
            mapping = list(range(self.m)) + [self.m + p for p in perm]
            key = tuple(p.embed(self.nvars, mapping).to_text() for p in self.flat())
            if best is None or key < best:
                best = key
        return best


def parametrize(t: Topology) -> ParametrizedMatrix:
    """Entry ``(s, t)`` is ``Y_s`` times the sum of path weights from ``x_t`` to output ``s``."""
    nv = t.m + t.C
    one, zero = Polynomial.const(nv, 1), Polynomial(nv)
    forms: Dict[Ref, Tuple[Polynomial, ...]] = {}
    for q in range(1, t.n + 1):
        forms[x(q)] = tuple(one if c == q else zero for c in range(1, t.n + 1))
    for i, (j, k) in enumerate(t.steps, start=1):
        beta = Polynomial.var(nv, t.m + i - 1)
        forms[u(i)] = tuple(a + beta * b for a, b in zip(forms[j], forms[k]))
    rows = []
    for s, o in enumerate(t.outputs):
        gamma = Polynomial.var(nv, s)
        rows.append(tuple(gamma * p for p in forms[o]))
    return ParametrizedMatrix(t.m, t.n, t.C, tuple(rows))
