"""Exact sparse linear algebra over the integers.

Rows are dicts ``column -> int``.  Elimination is fraction-free: a row is
updated as ``p*r - c*pivot`` and then divided by its content, so entries stay
integers throughout and no rational is ever formed.
"""

from __future__ import annotations

from math import gcd
from typing import Dict, List, Sequence

SparseRow = Dict[int, int]


def _content(row: SparseRow) -> int:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    return g


def rank_mod_p(rows: Sequence[SparseRow], p: int) -> int:
    """Rank of the matrix over GF(p).  Never exceeds the rank over the rationals."""
    pivots: Dict[int, SparseRow] = {}
    for row in rows:
        r = {c: v % p for c, v in row.items() if v % p}
        while r:
            col = min(r)
            piv = pivots.get(col)
            if piv is None:
                inv = pow(r[col], -1, p)
                pivots[col] = {c: v * inv % p for c, v in r.items()}
                break
            f = r[col]
            for c, v in piv.items():
                nv = (r.get(c, 0) - f * v) % p
                if nv:
                    r[c] = nv
                else:
                    r.pop(c, None)
    return len(pivots)


def integer_rref(rows: Sequence[SparseRow]) -> Dict[int, SparseRow]:
    """Reduced row echelon form, keyed by pivot column; each row is primitive."""
    pivots: Dict[int, SparseRow] = {}
    for row in rows:
        r = {c: v for c, v in row.items() if v}
        # reduce against existing pivots until the leading column is new
        while r:
            col = min(r)
            piv = pivots.get(col)
            if piv is None:
                break
            r = _eliminate(r, piv, col)
        if not r:
            continue
        g = _content(r)
        r = {c: v // g for c, v in r.items()}
        col = min(r)
        for pc in list(pivots):
            if col in pivots[pc]:
                pivots[pc] = _eliminate(pivots[pc], r, col)
        pivots[col] = r
    # back-substitute so every pivot column is clear in all other rows
    for col in sorted(pivots, reverse=True):
        r = pivots[col]
        for pc in pivots:
            if pc != col and col in pivots[pc]:
                pivots[pc] = _eliminate(pivots[pc], r, col)
    return pivots


def _eliminate(target: SparseRow, piv: SparseRow, col: int) -> SparseRow:
    p, c = piv[col], target[col]
    g = gcd(p, c)
    a, b = p // g, c // g
    out = {k: a * v for k, v in target.items()}
    for k, v in piv.items():
        nv = out.get(k, 0) - b * v
        if nv:
            out[k] = nv
        else:
            out.pop(k, None)
    g = _content(out)
    if g > 1:
        out = {k: v // g for k, v in out.items()}
    return out


def kernel(rows: Sequence[SparseRow], ncols: int, limit: int = 0) -> List[List[int]]:
    """Integer basis vectors of the right kernel, one per free column in increasing order.

    ``limit > 0`` stops after that many vectors.  Each vector is primitive.
    """
    rref = integer_rref(rows)
    free = [c for c in range(ncols) if c not in rref]
    out = []
    for f in free:
        scale = 1
        for pc, r in rref.items():
            if f in r:
                scale = scale * r[pc] // gcd(scale, r[pc])
        vec = [0] * ncols
        vec[f] = scale
        for pc, r in rref.items():
            if f in r:
                vec[pc] = -r[f] * scale // r[pc]
        g = 0
        for v in vec:
            g = gcd(g, v)
        out.append([v // g for v in vec])
        if limit and len(out) >= limit:
            break
    return out
