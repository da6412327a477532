"""Seeded invariant suites shared by the ``selftest`` command and the test-suite.

Each suite takes a ``random.Random`` and a scale and returns a ``SuiteResult``
with the number of cases run and a list of human-readable failures.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence

import mpmath

from . import annihilator, certify, slp, topology, witness
from .exactmath.poly import Polynomial, monomials_up_to
from .exactmath.powerexpr import compare, lit

SCALES = {"quick": 0.2, "full": 1.0}


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    failures: List[str] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        head = f"{status} {self.name}: {self.cases} cases, {len(self.failures)} failures, {self.seconds:.1f}s"
        return head + "".join(f"\n    {f}" for f in self.failures[:5])


def _count(base: int, scale: float) -> int:
    return max(1, int(round(base * scale)))


# -- random generators -------------------------------------------------------

def random_coeff(rng: random.Random, lim: int = 5) -> Fraction:
    nz = [v for v in range(-lim, lim + 1) if v]
    return Fraction(rng.choice(nz), rng.choice(nz))


def random_algorithm(rng: random.Random, max_n: int = 4, max_steps: int = 6):
    n = rng.randint(1, max_n)
    steps = []
    for i in range(1, rng.randint(0, max_steps) + 1):
        nodes = [slp.x(t) for t in range(1, n + 1)] + [slp.u(p) for p in range(1, i)]
        steps.append(slp.Step(random_coeff(rng), rng.choice(nodes), random_coeff(rng), rng.choice(nodes)))
    alg = slp.LinearAlgorithm(n, tuple(steps))
    nodes = alg.nodes()
    out = tuple(slp.Output(rng.choice(nodes), random_coeff(rng)) for _ in range(rng.randint(1, 3)))
    return alg, out


def random_poly(rng: random.Random, nvars: int, degree: int, height: int, max_terms: int = 10) -> Polynomial:
    monos = monomials_up_to(nvars, degree)
    while True:
        k = rng.randint(1, min(max_terms, len(monos)))
        terms = {m: rng.choice([v for v in range(-height, height + 1) if v]) for m in rng.sample(monos, k)}
        p = Polynomial(nvars, terms)
        if not p.is_zero():
            return p


# -- suites --------------------------------------------------------------------

def suite_pathweight(rng, scale) -> SuiteResult:
    res = SuiteResult("pathweight")
    for _ in range(_count(500, scale)):
        alg, _ = random_algorithm(rng)
        g = slp.AlgorithmGraph.of(alg)
        forms = alg.forms()
        if sum(1 for v in g.vertices if g.in_degree(v) == 2) != len(alg):
            res.failures.append(f"in-degree count mismatch for {alg}")
        for node in alg.nodes():
            res.cases += 1
            if slp.path_weight_forms(g, node) != forms[node]:
                res.failures.append(f"path weights differ at {node} in {alg}")
    return res


def suite_normalize(rng, scale) -> SuiteResult:
    res = SuiteResult("normalize")
    for _ in range(_count(500, scale)):
        alg, out = random_algorithm(rng)
        res.cases += 1
        na, no = slp.normalize(alg, out)
        if not na.normalized or len(na) != len(alg):
            res.failures.append(f"normalize broke shape of {alg}")
        elif slp.eval_forms(na, no) != slp.eval_forms(alg, out):
            res.failures.append(f"normalize changed the forms of {alg}")
        elif slp.normalize(na, no) != (na, no):
            res.failures.append(f"normalize not idempotent on {alg}")
    return res


def nonvanish_polys(rng, N: int, d: int, H: int, count: int) -> List[Polynomial]:
    """Random sparse polynomials plus dense low-degree ones, all of degree <= d and height <= H."""
    out = []
    for i in range(count):
        if i % 2:
            out.append(random_poly(rng, N, d, H))
        else:
            out.append(random_poly(rng, N, rng.randint(1, d), H, max_terms=40))
    return out


def suite_nonvanish(rng, scale) -> SuiteResult:
    res = SuiteResult("nonvanish")
    per_cell = _count(1000, scale)
    for N in range(1, 5):
        for d in (3, 4, 5):
            for H in range(1, 11):
                seq = witness.build_sequence(d, H, N)
                for p in nonvanish_polys(rng, N, d, H, per_cell):
                    res.cases += 1
                    try:
                        witness.check_nonvanish(p, seq)
                    except witness.NonvanishingViolation as exc:
                        res.failures.append(str(exc))
    return res


def numeric_roots(coeffs: Sequence[int]) -> list:
    """Roots of ``sum c_i X^i`` via mpmath; ``coeffs`` lowest degree first."""
    cs = list(coeffs)
    while cs and cs[-1] == 0:
        cs.pop()
    lead_zeros = 0
    while cs and cs[0] == 0:
        cs.pop(0)
        lead_zeros += 1
    roots = [mpmath.mpc(0)] * lead_zeros
    if len(cs) > 1:
        with mpmath.workdps(40):
            roots += list(mpmath.polyroots(cs[::-1], maxsteps=400, extraprec=200, error=False))
    return roots


def suite_rootbound(rng, scale) -> SuiteResult:
    from .exactmath.poly import cauchy_root_bound
    res = SuiteResult("rootbound")
    for _ in range(_count(200, scale)):
        deg = rng.randint(1, 6)
        H = rng.randint(1, 50)
        cs = [rng.randint(-H, H) for _ in range(deg)] + [rng.choice([v for v in range(-H, H + 1) if v])]
        f = Polynomial(1, {(i,): c for i, c in enumerate(cs) if c})
        bound = cauchy_root_bound(f)
        for r in numeric_roots(f.univariate_coeffs()):
            res.cases += 1
            if abs(r) >= bound:
                res.failures.append(f"root {r} of {f} reaches bound {bound}")
    return res


def random_map(rng, N: int) -> List[Polynomial]:
    k = rng.randint(1, N - 1)
    return [random_poly(rng, k, rng.randint(1, 2), 3, max_terms=3) for _ in range(N)]


def topology_maps(max_N: int = 4) -> List[List[Polynomial]]:
    """Parametrized matrices with fewer parameters than entries, for every shape with mn <= max_N."""
    out = []
    for m in range(1, max_N + 1):
        for n in range(1, max_N // m + 1):
            N = m * n
            for C in range(max(N - m, 0)):
                if C + m >= N:
                    continue
                for t in topology.enumerate_topologies(n, m, C):
                    out.append(topology.parametrize(t).flat())
    return out


def suite_perron(rng, scale) -> SuiteResult:
    res = SuiteResult("perron")
    maps = [random_map(rng, rng.randint(2, 4)) for _ in range(_count(60, scale))]
    topo = topology_maps()
    maps += rng.sample(topo, min(len(topo), _count(len(topo), scale)))
    for polys in maps:
        bound = annihilator.perron_degree_bound([p.degree for p in polys])
        if bound > 8:
            continue
        res.cases += 1
        got = annihilator.find_annihilator(polys, degree_cap=bound)
        if not got:
            res.failures.append(f"no annihilator within the degree bound {bound} for {polys}")
            continue
        a = got.annihilator
        if a.degree > bound or not annihilator.check_annihilates(a, polys):
            res.failures.append(f"bad annihilator {a} for {polys}")
        rep = annihilator.bound_report(polys)
        if compare(lit(a.height), rep.height_bound) > 0:
            res.failures.append(f"height {a.height} above the height bound for {polys}")
    return res


def random_matrix_2x3(rng) -> certify.MatrixSpec:
    while True:
        rows = [[rng.randint(1, 9) for _ in range(3)] for _ in range(2)]
        a, b = rows
        if any(a[i] * b[j] != a[j] * b[i] for i in range(3) for j in range(i + 1, 3)):
            return certify.MatrixSpec.of(rows)


def suite_soundness(rng, scale) -> SuiteResult:
    res = SuiteResult("soundness")
    for _ in range(_count(50, scale)):
        mat = random_matrix_2x3(rng)
        cert = certify.certify_lower_bound(mat, 4)
        found = certify.synthesize_upper_bound(mat, 3)
        res.cases += 1
        if cert.kind == certify.EXHAUSTIVE and found is not None:
            res.failures.append(f"false lower bound for {mat.entries}: synthesized {found}")
    for rows, target, kind in (([[1, 1], [1, 2]], 2, certify.EXHAUSTIVE), ([[1, 1], [2, 2]], 1, certify.EXHAUSTIVE)):
        res.cases += 1
        cert = certify.certify_lower_bound(certify.MatrixSpec.of(rows), target)
        if cert.kind != kind or not certify.recheck_certificate(cert.dumps()):
            res.failures.append(f"{rows} at target {target}: {cert.kind}")
    return res


def suite_chain(rng, scale) -> SuiteResult:
    res = SuiteResult("chain")
    for N in range(2, 9):
        res.cases += 1
        rep = witness.verify_concluding_chain(N)
        for c in rep.failures():
            res.failures.append(f"N={N}: {c.name}: {c.detail}")
    return res


def suite_height(rng, scale) -> SuiteResult:
    res = SuiteResult("height")
    for N in range(2, 9):
        res.cases += 1
        raw = annihilator.height_bound(N ** (N - 1), N, N, 1)
        if compare(raw, annihilator.simplified_height(N)) > 0:
            res.failures.append(f"N={N}: raw height bound exceeds N^(2N^(N^2))")
    return res


SUITES: Dict[str, Callable[[random.Random, float], SuiteResult]] = {
    "pathweight": suite_pathweight,
    "normalize": suite_normalize,
    "nonvanish": suite_nonvanish,
    "rootbound": suite_rootbound,
    "perron": suite_perron,
    "soundness": suite_soundness,
    "chain": suite_chain,
    "height": suite_height,
}


def run_suite(name: str, seed: int = 0, scale: str = "quick") -> SuiteResult:
    rng = random.Random(f"{seed}:{name}")
    t = time.perf_counter()
    res = SUITES[name](rng, SCALES[scale])
    res.seconds = time.perf_counter() - t
    return res


def run(seed: int = 0, scale: str = "quick", suites: Optional[Sequence[str]] = None) -> List[SuiteResult]:
    names = list(suites) if suites else list(SUITES)
    for n in names:
        if n not in SUITES:
            raise KeyError(f"unknown suite {n!r}")
    return [run_suite(n, seed, scale) for n in names]
