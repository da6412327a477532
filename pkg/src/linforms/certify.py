"""Certificates for the additive complexity of small integer matrices.

Lower bounds are proved by exclusion: every topology with fewer than
``target`` additions has a parametrized matrix whose entries satisfy some
integer polynomial relation (an annihilator); if that relation is nonzero at
the given matrix, no choice of coefficients makes the topology compute it.
Upper bounds come from synthesis: solving for the coefficients of a topology.
Matrices whose entries are too large to write down get a structural
certificate, which checks the entries against the growth windows instead.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple, Union

from . import __version__
from .annihilator import (
    AnnihilatorResult,
    CapExhausted,
    check_annihilates,
    evaluate_annihilator,
    find_annihilator,
    z_names,
)
from .exactmath.poly import Polynomial
from .exactmath.powerexpr import PowerExpr, as_expr, compare, mul, normalize, power
from .slp import LinearAlgorithm, Output, Step, eval_forms, u, x
from .topology import ParametrizedMatrix, Topology, enumerate_topologies, parametrize
from .witness import Window, chain_parameters, theorem1_windows, verify_concluding_chain

Entry = Union[int, PowerExpr]

EXHAUSTIVE = "EXHAUSTIVE"
STRUCTURAL = "STRUCTURAL"
INCONCLUSIVE = "INCONCLUSIVE"


class CertificationRefused(Exception):
    def __init__(self, index: int, bound: str, message: str = ""):
        self.index, self.bound = index, bound
        super().__init__(message or f"entry a_{index} violates its {bound} bound")


class CertificateError(ValueError):
    """Malformed certificate."""


# -- matrices ----------------------------------------------------------------

@dataclass(frozen=True)
class MatrixSpec:
    m: int
    n: int
    entries: Tuple[Tuple[Entry, ...], ...]

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError("matrix dimensions must be positive")
        rows = tuple(tuple(r) for r in self.entries)
        if len(rows) != self.m or any(len(r) != self.n for r in rows):
            raise ValueError(f"entries do not form a {self.m}x{self.n} matrix")
        for r in rows:
            for v in r:
                if isinstance(v, bool) or not isinstance(v, (int, PowerExpr)):
                    raise TypeError(f"bad matrix entry {v!r}")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def of(cls, rows: Sequence[Sequence[Entry]]) -> "MatrixSpec":
        rows = [list(r) for r in rows]
        return cls(len(rows), len(rows[0]) if rows else 0, tuple(tuple(r) for r in rows))

    @property
    def explicit(self) -> bool:
        return all(isinstance(v, int) for r in self.entries for v in r)

    def flat(self) -> List[Entry]:
        return [v for r in self.entries for v in r]

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "entries": [[str(v) if isinstance(v, int) else v.to_json() for v in r] for r in self.entries],
        }

    @classmethod
    def from_json(cls, data) -> "MatrixSpec":
        try:
            rows = tuple(tuple(_entry_from_json(v) for v in r) for r in data["entries"])
            return cls(int(data["m"]), int(data["n"]), rows)
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed matrix JSON: {exc}") from None


def _entry_from_json(v) -> Entry:
    if isinstance(v, bool):
        raise ValueError("booleans are not matrix entries")
    if isinstance(v, int):
        return v
    if isinstance(v, str):
        try:
            return int(v)
        except ValueError:
            raise ValueError(f"bad integer entry {v!r}") from None
    e = normalize(PowerExpr.from_json(v))
    return e.value if e.op == "int" else e


def _require_explicit(mat: MatrixSpec) -> List[int]:
    if not mat.explicit:
        raise TypeError("entries are power expressions; use certify_structural")
    for s, row in enumerate(mat.entries, start=1):
        if not any(row):
            raise ValueError(f"row {s} is zero; outputs must be nonzero forms")
    return mat.flat()


# -- topology catalog ----------------------------------------------------------

@dataclass
class CatalogEntry:
    topology: Topology
    pm: ParametrizedMatrix
    zero: Tuple[bool, ...]
    _key: Optional[Tuple[str, ...]] = None

    @property
    def key(self) -> Tuple[str, ...]:
        if self._key is None:
            self._key = self.pm.canonical_key()
        return self._key


@lru_cache(maxsize=None)
def _catalog(n: int, m: int, C: int, dedup: bool, part: Optional[Tuple[int, int]] = None) -> Tuple[CatalogEntry, ...]:
    out = []
    for t in enumerate_topologies(n, m, C, dedup=dedup, part=part):
        pm = parametrize(t)
        out.append(CatalogEntry(t, pm, tuple(p.is_zero() for p in pm.flat())))
    return tuple(out)


_ANNIHILATORS: Dict[tuple, Union[AnnihilatorResult, CapExhausted]] = {}


def annihilator_for(entry: CatalogEntry, degree_cap: Optional[int], kernel_vectors: int):
    k = (entry.key, degree_cap, kernel_vectors)
    if k not in _ANNIHILATORS:
        _ANNIHILATORS[k] = find_annihilator(entry.pm.flat(), degree_cap, kernel_vectors)
    return _ANNIHILATORS[k]


def coordinate_annihilator(N: int, index: int) -> Polynomial:
    """``Z_index`` alone: annihilates any map whose ``index``-th polynomial is zero."""
    return Polynomial.var(N, index)


# -- certificates ------------------------------------------------------------

@dataclass
class Certificate:
    kind: str
    matrix: MatrixSpec
    budget: Optional[int]
    records: List[dict] = field(default_factory=list)
    survivors: List[dict] = field(default_factory=list)
    caps: dict = field(default_factory=dict)
    transcript: dict = field(default_factory=dict)
    toolversion: str = __version__

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "matrix": self.matrix.to_json(),
            "budget": self.budget,
            "records": self.records,
            "caps": self.caps,
            "toolversion": self.toolversion,
        }
        if self.survivors:
            out["survivors"] = self.survivors
        if self.transcript:
            out["transcript"] = self.transcript
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=1) + "\n"

    @classmethod
    def from_json(cls, data) -> "Certificate":
        try:
            kind = data["kind"]
            if kind not in (EXHAUSTIVE, STRUCTURAL, INCONCLUSIVE):
                raise CertificateError(f"unknown certificate kind {kind!r}")
            return cls(
                kind=kind,
                matrix=MatrixSpec.from_json(data["matrix"]),
                budget=data["budget"],
                records=list(data["records"]),
                survivors=list(data.get("survivors", [])),
                caps=dict(data["caps"]),
                transcript=dict(data.get("transcript", {})),
                toolversion=str(data["toolversion"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, CertificateError):
                raise
            raise CertificateError(f"malformed certificate: {exc}") from None

    @classmethod
    def loads(cls, text: str) -> "Certificate":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CertificateError(f"certificate is not JSON: {exc}") from None
        return cls.from_json(data)


# -- lower bounds by exclusion -------------------------------------------------

def _exclude(entry: CatalogEntry, flat: List[int], degree_cap, kernel_vectors) -> dict:
    N = len(flat)
    names = z_names(N, entry.pm.n)
    code = entry.topology.encode()
    for i, z in enumerate(entry.zero):
        if z and flat[i] != 0:
            return {"topology": code, "annihilator": coordinate_annihilator(N, i).to_text(names),
                    "value": str(flat[i])}
    res = annihilator_for(entry, degree_cap, kernel_vectors)
    if isinstance(res, CapExhausted):
        return {"topology": code, "reason": "cap exhausted", "cap": res.cap}
    for a in res.candidates:
        v = evaluate_annihilator(a, flat)
        if v != 0:
            return {"topology": code, "annihilator": a.to_text(names), "value": str(v)}
    return {"topology": code, "reason": "annihilator vanished", "tried": len(res.candidates)}


def _run_part(args) -> List[Tuple[int, int, dict]]:
    n, m, C, dedup, part, flat, degree_cap, kernel_vectors = args
    out = []
    for entry in _catalog(n, m, C, dedup, part):
        out.append(_exclude(entry, flat, degree_cap, kernel_vectors))
    return out


def certify_lower_bound(mat: MatrixSpec, target: Optional[int] = None, degree_cap: Optional[int] = None,
                        dedup: bool = True, threads: int = 1, kernel_vectors: int = 3) -> Certificate:
    """Try to exclude every topology with fewer than ``target`` additions.

    EXHAUSTIVE means every one was excluded, so at least ``target`` additions
    are needed.  Otherwise the certificate is INCONCLUSIVE and lists the
    topologies that survived; nothing is claimed about them.
    """
    flat = _require_explicit(mat)
    top = mat.m * (mat.n - 1)
    if target is None:
        target = top
    if not 0 <= target <= top:
        raise ValueError(f"target must lie in [0, {top}]")
    records, survivors = [], []
    for C in range(target):
        if threads > 1:
            jobs = [(mat.n, mat.m, C, dedup, (k, threads), flat, degree_cap, kernel_vectors)
                    for k in range(threads)]
            with ProcessPoolExecutor(threads) as pool:
                parts = list(pool.map(_run_part, jobs))
            results = _merge_parts(parts, mat.n, mat.m, C, dedup, threads)
        else:
            results = [_exclude(e, flat, degree_cap, kernel_vectors) for e in _catalog(mat.n, mat.m, C, dedup)]
        for r in results:
            (survivors if "reason" in r else records).append(r)
    kind = EXHAUSTIVE if not survivors else INCONCLUSIVE
    caps = {"degree_cap": degree_cap, "dedup": dedup, "kernel_vectors": kernel_vectors, "target": target}
    return Certificate(kind, mat, target - 1, records, survivors, caps)


def _merge_parts(parts, n, m, C, dedup, K) -> List[dict]:
    # the serial stream order is recovered from the skeleton index modulo K
    order = {e.topology.encode(): i for i, e in enumerate(_catalog(n, m, C, dedup))}
    merged = [r for p in parts for r in p]
    merged.sort(key=lambda r: order[r["topology"]])
    return merged


# -- upper bounds by synthesis -----------------------------------------------

def trivial_algorithm(mat: MatrixSpec) -> Tuple[LinearAlgorithm, Tuple[Output, ...]]:
    """Row-by-row chains: ``|support| - 1`` additions per row."""
    flat = _require_explicit(mat)
    steps, outs = [], []
    for s in range(mat.m):
        row = flat[s * mat.n:(s + 1) * mat.n]
        supp = [t for t, v in enumerate(row) if v]
        lead = supp[0]
        node = x(lead + 1)
        for t in supp[1:]:
            steps.append(Step(1, node, Fraction(row[t], row[lead]), x(t + 1)))
            node = u(len(steps))
        outs.append(Output(node, row[lead]))
    return LinearAlgorithm(mat.n, tuple(steps)), tuple(outs)


FracPoly = Dict[Tuple[int, ...], Fraction]


def _subst(p: FracPoly, var: int, val: Fraction) -> FracPoly:
    out: FracPoly = {}
    for exps, c in p.items():
        e = exps[var]
        if e:
            c = c * val ** e
            exps = exps[:var] + (0,) + exps[var + 1:]
        nv = out.get(exps, 0) + c
        if nv:
            out[exps] = nv
        else:
            out.pop(exps, None)
    return out


def _linear_single(p: FracPoly) -> Optional[Tuple[int, Fraction]]:
    """If ``p`` is ``a*v + b`` in one variable ``v`` with ``a != 0``, return ``(v, -b/a)``."""
    var, a, b = None, Fraction(0), Fraction(0)
    for exps, c in p.items():
        used = [i for i, e in enumerate(exps) if e]
        if not used:
            b = c
            continue
        if len(used) > 1 or exps[used[0]] > 1:
            return None
        if var is not None and used[0] != var:
            return None
        var, a = used[0], c
    if var is None:
        return None
    return var, -b / a


def _rationals(bound: int) -> List[Fraction]:
    vals = {Fraction(s * p, q) for p in range(1, bound + 1) for q in range(1, bound + 1) for s in (1, -1)}
    return sorted(vals, key=lambda f: (abs(f.numerator) + f.denominator, f < 0, abs(f)))


def _solve(eqs: List[FracPoly], nvars: int, assigned: Dict[int, Fraction], choices: List[Fraction]):
    eqs = [e for e in eqs if e]
    while True:
        for e in eqs:
            if all(not any(exps) for exps in e):
                return None  # nonzero constant: contradiction
        step = None
        for e in eqs:
            step = _linear_single(e)
            if step is not None:
                break
        if step is None:
            break
        var, val = step
        if val == 0:
            return None  # coefficients must be nonzero
        assigned = {**assigned, var: val}
        eqs = [r for r in (_subst(e, var, val) for e in eqs) if r]
    if not eqs:
        return assigned
    free = [v for v in range(nvars) if v not in assigned
            and any(exps[v] for e in eqs for exps in e)]
    if not free:
        return None
    var = free[0]
    for val in choices:
        got = _solve([_subst(e, var, val) for e in eqs], nvars, {**assigned, var: val}, choices)
        if got is not None:
            return got
    return None


def solve_topology(t: Topology, pm: ParametrizedMatrix, flat: Sequence[int], coeff_bound: int):
    """Nonzero rational coefficients making ``t`` compute ``flat``, or ``None``."""
    eqs = []
    for p, v in zip(pm.flat(), flat):
        if p.is_zero():
            if v:
                return None
            continue
        e: FracPoly = {exps: Fraction(c) for exps, c in p.items()}
        zero = (0,) * pm.nvars
        e[zero] = e.get(zero, 0) - v
        if not e[zero]:
            del e[zero]
        eqs.append(e)
    sol = _solve(eqs, pm.nvars, {}, _rationals(coeff_bound))
    if sol is None:
        return None
    # unknowns that no equation constrains can take any nonzero value
    vals = [sol.get(i, Fraction(1)) for i in range(pm.nvars)]
    steps = tuple(Step(1, j, vals[pm.m + i], k) for i, (j, k) in enumerate(t.steps))
    outs = tuple(Output(node, vals[s]) for s, node in enumerate(t.outputs))
    return LinearAlgorithm(t.n, steps), outs


def synthesize_upper_bound(mat: MatrixSpec, budget: int, coeff_bound: int = 3):
    """Cheapest algorithm with at most ``budget`` additions, or ``None`` if the search finds none.

    ``None`` is not a proof of nonexistence: coefficients are searched only
    where propagation cannot determine them, and only among small rationals.
    """
    flat = _require_explicit(mat)
    if budget < 0:
        raise ValueError("budget must be >= 0")
    target_rows = tuple(tuple(Fraction(v) for v in r) for r in mat.entries)
    for C in range(budget + 1):
        for entry in _catalog(mat.n, mat.m, C, True):
            got = solve_topology(entry.topology, entry.pm, flat, coeff_bound)
            if got is None:
                continue
            alg, outs = got
            if eval_forms(alg, outs) != target_rows:
                raise AssertionError("synthesized algorithm does not compute the matrix")
            return alg, outs
    return None


# -- structural certificates ---------------------------------------------------

def certify_structural(mat: MatrixSpec) -> Certificate:
    """Check huge entries against the growth windows; refuse with the failing bound.

    Each entry ``a_l`` (row-major) must lie in its window, and consecutive
    entries must satisfy ``a_1 > H`` and ``a_l >= 2H a_{l-1}^d`` with
    ``(d, H) = (N^(N-1), N^(2N^(N^2)))``.  The certificate is conditional: it
    checks the premises, and the conclusion ``C = m(n-1)`` rests on them.
    """
    N = mat.m * mat.n
    if N < 2:
        raise ValueError("need N = mn >= 2")
    flat = [as_expr(v) for v in mat.flat()]
    wins = theorem1_windows(mat.m, mat.n).windows
    d, H = chain_parameters(N)
    records = []
    for l, (a, w) in enumerate(zip(flat, wins), start=1):
        bad = w.check(a)
        if bad:
            raise CertificationRefused(l, bad)
        records.append({"index": l, "entry": a.to_json(), "window": w.to_json()})
    if compare(flat[0], H) <= 0:
        raise CertificationRefused(1, "growth")
    for l in range(2, N + 1):
        if compare(flat[l - 1], mul(2, H, power(flat[l - 2], d))) < 0:
            raise CertificationRefused(l, "growth", f"a_{l} < 2H a_{l - 1}^d")
        records[l - 1]["growth"] = "a_l >= 2H a_(l-1)^d"
    report = verify_concluding_chain(N) if N <= 8 else None
    transcript = {
        "conditional": "valid only given the complexity theorem for entries in these windows",
        "d": str(d),
        "H": H.to_json(),
        "parameters_match": True,
        "entry_growth": "verified on the entries",
        "window_chain": report.to_json() if report is not None else "skipped (N > 8)",
    }
    caps = {"N": N}
    return Certificate(STRUCTURAL, mat, None, records, [], caps, transcript)


# -- rechecking ----------------------------------------------------------------

def recheck_certificate(cert: Union[Certificate, dict, str]) -> bool:
    """Re-derive every claim from the certificate's own contents."""
    if isinstance(cert, str):
        cert = Certificate.loads(cert)
    elif isinstance(cert, dict):
        cert = Certificate.from_json(cert)
    if cert.kind == STRUCTURAL:
        return _recheck_structural(cert)
    return _recheck_exclusions(cert)


def _recheck_exclusions(cert: Certificate) -> bool:
    mat = cert.matrix
    try:
        flat = _require_explicit(mat)
        target = int(cert.caps["target"])
        dedup = bool(cert.caps["dedup"])
    except (KeyError, TypeError, ValueError) as exc:
        raise CertificateError(f"malformed certificate: {exc}") from None
    if cert.budget != target - 1:
        return False
    if cert.kind == EXHAUSTIVE and cert.survivors:
        return False
    expected = [e.topology.encode() for C in range(target) for e in _catalog(mat.n, mat.m, C, dedup)]
    claimed = [r.get("topology") for r in cert.records] + [r.get("topology") for r in cert.survivors]
    if sorted(claimed) != sorted(expected):
        return False
    N = mat.m * mat.n
    names = z_names(N, mat.n)
    for r in cert.records:
        try:
            t = Topology.decode(r["topology"], mat.n)
            a = Polynomial.from_text(r["annihilator"], N, names)
            value = int(r["value"])
        except (KeyError, ValueError):
            return False
        if t.m != mat.m or value == 0:
            return False
        if not check_annihilates(a, parametrize(t).flat()):
            return False
        if evaluate_annihilator(a, flat) != value:
            return False
    return True


def _recheck_structural(cert: Certificate) -> bool:
    try:
        certify_structural(cert.matrix)
    except CertificationRefused:
        return False
    wins = theorem1_windows(cert.matrix.m, cert.matrix.n).windows
    flat = cert.matrix.flat()
    if len(cert.records) != len(flat):
        return False
    d, H = chain_parameters(len(flat))
    try:
        for r, a, w in zip(cert.records, flat, wins):
            if compare(PowerExpr.from_json(r["entry"]), as_expr(a)) != 0:
                return False
            if Window.from_json(r["window"]) != w:
                return False
        return str(d) == cert.transcript.get("d") and compare(PowerExpr.from_json(cert.transcript["H"]), H) == 0
    except (KeyError, TypeError, ValueError) as exc:
        raise CertificateError(f"malformed certificate: {exc}") from None

