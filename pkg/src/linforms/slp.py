"""Linear straight-line algorithms over the rationals.

An algorithm over indeterminates ``x1..xn`` is a list of steps
``u_i <- alpha * u_j + beta * u_k`` where each operand is an indeterminate or
an earlier variable.  Outputs name a node and a scale ``gamma``; output ``s``
computes ``gamma_s * form(node_s)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Sequence, Tuple

Row = Tuple[Fraction, ...]

_REF_RE = re.compile(r"([xu])([1-9][0-9]*)")


@dataclass(frozen=True, order=True)
class Ref:
    """Operand reference: ``Ref("x", t)`` is an indeterminate, ``Ref("u", i)`` a step result."""

    kind: str
    index: int

    def __post_init__(self):
        if self.kind not in ("x", "u") or self.index < 1:
            raise ValueError(f"bad operand reference {self.kind}{self.index}")

    @classmethod
    def parse(cls, text: str) -> "Ref":
        m = _REF_RE.fullmatch(text.strip())
        if not m:
            raise ValueError(f"bad operand reference {text!r}")
        return cls(m.group(1), int(m.group(2)))

    @property
    def is_indeterminate(self) -> bool:
        return self.kind == "x"

    def __str__(self) -> str:
        return f"{self.kind}{self.index}"


def x(t: int) -> Ref:
    return Ref("x", t)


def u(i: int) -> Ref:
    return Ref("u", i)


def check_ref(ref: Ref, n: int, before: int) -> None:
    """Raise if ``ref`` is not an indeterminate of ``x1..xn`` or a variable below ``before``."""
    if ref.kind == "x" and ref.index > n:
        raise ValueError(f"{ref} exceeds the {n} indeterminates")
    if ref.kind == "u" and ref.index >= before:
        raise ValueError(f"{ref} is not defined before step {before}")


@dataclass(frozen=True)
class Step:
    alpha: Fraction
    j: Ref
    beta: Fraction
    k: Ref

    def __post_init__(self):
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        object.__setattr__(self, "beta", Fraction(self.beta))
        if self.alpha == 0 or self.beta == 0:
            raise ValueError("step coefficients must be nonzero")


@dataclass(frozen=True)
class LinearAlgorithm:
    n: int
    steps: Tuple[Step, ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need at least one indeterminate")
        object.__setattr__(self, "steps", tuple(self.steps))
        for i, st in enumerate(self.steps, start=1):
            check_ref(st.j, self.n, i)
            check_ref(st.k, self.n, i)

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def normalized(self) -> bool:
        return all(st.alpha == 1 for st in self.steps)

    def nodes(self) -> List[Ref]:
        return [x(t) for t in range(1, self.n + 1)] + [u(i) for i in range(1, len(self.steps) + 1)]

    def forms(self) -> Dict[Ref, Row]:
        """Coefficient vector of every node's linear form."""
        out: Dict[Ref, Row] = {}
        for t in range(1, self.n + 1):
            out[x(t)] = tuple(Fraction(int(s == t)) for s in range(1, self.n + 1))
        for i, st in enumerate(self.steps, start=1):
            fj, fk = out[st.j], out[st.k]
            out[u(i)] = tuple(st.alpha * a + st.beta * b for a, b in zip(fj, fk))
        return out


@dataclass(frozen=True)
class Output:
    node: Ref
    gamma: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "gamma", Fraction(self.gamma))
        if self.gamma == 0:
            raise ValueError("output scale must be nonzero")


OutputSpec = Tuple[Output, ...]


def check_outputs(alg: LinearAlgorithm, out: Sequence[Output]) -> None:
    for o in out:
        check_ref(o.node, alg.n, len(alg.steps) + 1)


def eval_forms(alg: LinearAlgorithm, out: Sequence[Output]) -> Tuple[Row, ...]:
    """Rows ``gamma_s * form(node_s)`` as exact rational vectors."""
    check_outputs(alg, out)
    forms = alg.forms()
    return tuple(tuple(o.gamma * c for c in forms[o.node]) for o in out)


def normalize(alg: LinearAlgorithm, out: Sequence[Output]) -> Tuple[LinearAlgorithm, OutputSpec]:
    """Equivalent algorithm with every ``alpha == 1`` and the same number of steps.

    Each node ``v`` of the input computes ``scale[v]`` times the form of the
    matching node in the result; those scales are divided out of the betas and
    pushed into the output gammas.
    """
    check_outputs(alg, out)
    scale: Dict[Ref, Fraction] = {x(t): Fraction(1) for t in range(1, alg.n + 1)}
    steps = []
    for i, st in enumerate(alg.steps, start=1):
        sj, sk = scale[st.j], scale[st.k]
        scale[u(i)] = st.alpha * sj
        steps.append(Step(Fraction(1), st.j, st.beta * sk / (st.alpha * sj), st.k))
    new_out = tuple(Output(o.node, o.gamma * scale[o.node]) for o in out)
    return LinearAlgorithm(alg.n, tuple(steps)), new_out


def proper_label_count(alg: LinearAlgorithm) -> int:
    """Number of proper coefficients (one beta per step) of a normalized algorithm."""
    if not alg.normalized:
        raise ValueError("proper labels are only defined for normalized algorithms")
    return len(alg.steps)


@dataclass(frozen=True)
class Edge:
    src: Ref
    dst: Ref
    label: Fraction


@dataclass(frozen=True)
class AlgorithmGraph:
    """Labelled DAG: one ``alpha`` edge and one ``beta`` edge into every step node."""

    n: int
    vertices: Tuple[Ref, ...]
    edges: Tuple[Edge, ...]
    _incoming: Dict[Ref, Tuple[Edge, ...]] = field(default=None, repr=False, compare=False)

    @classmethod
    def of(cls, alg: LinearAlgorithm) -> "AlgorithmGraph":
        edges = []
        for i, st in enumerate(alg.steps, start=1):
            edges.append(Edge(st.j, u(i), st.alpha))
            edges.append(Edge(st.k, u(i), st.beta))
        return cls(alg.n, tuple(alg.nodes()), tuple(edges))

    def incoming(self, v: Ref) -> Tuple[Edge, ...]:
        if self._incoming is None:
            table: Dict[Ref, list] = {w: [] for w in self.vertices}
            for e in self.edges:
                table[e.dst].append(e)
            object.__setattr__(self, "_incoming", {w: tuple(es) for w, es in table.items()})
        return self._incoming[v]

    def in_degree(self, v: Ref) -> int:
        return len(self.incoming(v))

    def paths(self, src: Ref, dst: Ref) -> Iterator[Tuple[Edge, ...]]:
        """Every edge path from ``src`` to ``dst``; parallel edges give distinct paths."""
        if dst == src:
            yield ()
        for e in self.incoming(dst):
            for p in self.paths(src, e.src):
                yield p + (e,)


def path_weight(path: Sequence[Edge]) -> Fraction:
    w = Fraction(1)
    for e in path:
        w *= e.label
    return w


def path_weight_forms(g: AlgorithmGraph, node: Ref) -> Row:
    """Coefficient of each ``x_t`` as the total weight of all paths ``x_t -> node``."""
    if node not in g.vertices:
        raise ValueError(f"{node} is not a vertex of the graph")
    return tuple(
        sum((path_weight(p) for p in g.paths(x(t), node)), Fraction(0))
        for t in range(1, g.n + 1)
    )


# -- JSON ------------------------------------------------------------------

def algorithm_to_json(alg: LinearAlgorithm, out: Sequence[Output]) -> dict:
    return {
        "n": alg.n,
        "steps": [
            {"alpha": str(st.alpha), "j": str(st.j), "beta": str(st.beta), "k": str(st.k)}
            for st in alg.steps
        ],
        "outputs": [{"node": str(o.node), "gamma": str(o.gamma)} for o in out],
    }


def algorithm_from_json(data: dict) -> Tuple[LinearAlgorithm, OutputSpec]:
    try:
        n = int(data["n"])
        steps = tuple(
            Step(Fraction(s["alpha"]), Ref.parse(s["j"]), Fraction(s["beta"]), Ref.parse(s["k"]))
            for s in data["steps"]
        )
        out = tuple(Output(Ref.parse(o["node"]), Fraction(o["gamma"])) for o in data["outputs"])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed algorithm JSON: {exc}") from None
    alg = LinearAlgorithm(n, steps)
    check_outputs(alg, out)
    return alg, out
