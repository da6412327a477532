"""``linforms`` command line: generate, certify, synthesize, annihilate, check-bounds, selftest.

Exit codes: 0 success, 1 usage, 2 parse error, 3 certification refused or a
bound check failed, 4 selftest failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import List, Optional

from . import __version__, annihilator, certify, selftest, witness
from .exactmath.poly import Polynomial
from .exactmath.powerexpr import compare
from .slp import algorithm_to_json
from .topology import Topology, parametrize

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_REFUSED, EXIT_SELFTEST = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class ParseError(Exception):
    pass


def _positive(name: str):
    def conv(text: str) -> int:
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be an integer") from None
        if v < 1:
            raise argparse.ArgumentTypeError(f"{name} must be positive")
        return v
    return conv


def _write(text: str, path: Optional[str]) -> None:
    if path and path != "-":
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(data) -> str:
    return json.dumps(data, sort_keys=True, indent=1) + "\n"


def read_matrix(path: str) -> certify.MatrixSpec:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    try:
        return certify.MatrixSpec.from_json(data)
    except (ValueError, TypeError) as exc:
        raise ParseError(f"{path}: {exc}") from None


# -- commands --------------------------------------------------------------------

def cmd_generate(args) -> int:
    N = args.m * args.n
    if args.mode == "theorem1":
        if N < 2:
            raise UsageError("theorem1 mode needs mn >= 2")
        flat = witness.canonical_entries(N)
        rows = tuple(tuple(flat[s * args.n:(s + 1) * args.n]) for s in range(args.m))
        mat = certify.MatrixSpec(args.m, args.n, rows)
        certify.certify_structural(mat)  # window membership recheck before writing
    else:
        try:
            seq = witness.build_sequence(args.d, args.H, N, digit_cap=args.digit_cap)
        except witness.DigitCapExceeded as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_REFUSED
        rows = tuple(tuple(seq.values[s * args.n:(s + 1) * args.n]) for s in range(args.m))
        mat = certify.MatrixSpec(args.m, args.n, rows)
    _write(_dump(mat.to_json()), args.output)
    return EXIT_OK


def _survivor_steps(cert: certify.Certificate) -> int:
    steps = [r["topology"].split("|")[0] for r in cert.survivors]
    return min(len(s.split(";")) if s else 0 for s in steps)


def cmd_certify(args) -> int:
    mat = read_matrix(args.matrix)
    if not mat.explicit:
        try:
            cert = certify.certify_structural(mat)
        except certify.CertificationRefused as exc:
            print(f"refused: l={exc.index}, bound={exc.bound}: {exc}", file=sys.stderr)
            return EXIT_REFUSED
        if args.output:
            _write(cert.dumps(), args.output)
        print("structural (conditional)")
        return EXIT_OK
    top = mat.m * (mat.n - 1)
    budget = top if args.budget is None else args.budget
    found = certify.synthesize_upper_bound(mat, min(budget, top), args.coeff_bound)
    if found is None:
        found = certify.trivial_algorithm(mat)
    upper = len(found[0])
    cert = certify.certify_lower_bound(mat, upper, args.degree_cap, threads=args.threads)
    if args.output:
        _write(cert.dumps(), args.output)
    if cert.kind == certify.EXHAUSTIVE:
        print(f"C = {upper} (exhaustive)")
    else:
        print(f"C <= {upper}, C >= {_survivor_steps(cert)} (partial)")
    return EXIT_OK


def cmd_synthesize(args) -> int:
    mat = read_matrix(args.matrix)
    if not mat.explicit:
        raise UsageError("synthesis needs explicit integer entries")
    budget = mat.m * (mat.n - 1) if args.budget is None else args.budget
    found = certify.synthesize_upper_bound(mat, budget, args.coeff_bound)
    if found is None:
        print(f"not found within {budget} additions (not a lower bound)")
        return EXIT_OK
    _write(_dump(algorithm_to_json(*found)), args.output)
    print(f"found: {len(found[0])} additions", file=sys.stderr)
    return EXIT_OK


def cmd_annihilate(args) -> int:
    if args.topology:
        if args.n is None:
            raise UsageError("--topology needs --n")
        try:
            t = Topology.decode(args.topology, args.n)
        except ValueError as exc:
            raise ParseError(str(exc)) from None
        pm = parametrize(t)
        polys, names = pm.flat(), annihilator.z_names(pm.m * pm.n, pm.n)
    elif args.map:
        polys = _read_map(args.map)
        names = annihilator.z_names(len(polys))
    else:
        raise UsageError("give --topology or --map")
    res = annihilator.find_annihilator(polys, args.degree_cap)
    if not res:
        out = {"result": "cap exhausted", "cap": res.cap, "perron_bound": res.perron_bound}
    else:
        out = {"annihilator": res.annihilator.to_text(names), "degree_used": res.degree_used,
               "perron_bound": res.perron_bound, "cap": res.cap}
    _write(_dump(out), args.output)
    return EXIT_OK


def _read_map(path: str) -> List[Polynomial]:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    try:
        k = int(data["nvars"])
        return [Polynomial.from_text(p, k) for p in data["polys"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"{path}: {exc}") from None


def cmd_check_bounds(args) -> int:
    if (args.m is None) != (args.n is None):
        raise UsageError("give both --m and --n, or neither")
    Ns = [args.m * args.n] if args.m else list(range(2, 9))
    ok = True
    for N in Ns:
        if not 2 <= N <= 8:
            raise UsageError("mn must lie in [2, 8]")
        rep = witness.verify_concluding_chain(N)
        wins = witness.theorem1_windows(1, N).windows
        ordered = all(w.nonempty() for w in wins) and all(
            compare(wins[i].high, wins[i + 1].low) < 0 for i in range(N - 1))
        height = compare(annihilator.height_bound(N ** (N - 1), N, N, 1), annihilator.simplified_height(N)) <= 0
        for c in rep.checks:
            print(f"N={N} {'ok  ' if c.holds else 'FAIL'} {c.name}: {c.detail}")
        print(f"N={N} {'ok  ' if ordered else 'FAIL'} windows nonempty and ordered")
        print(f"N={N} {'ok  ' if height else 'FAIL'} height bound within N^(2N^(N^2))")
        ok = ok and rep.passed and ordered and height
    return EXIT_OK if ok else EXIT_REFUSED


def cmd_selftest(args) -> int:
    try:
        results = selftest.run(args.seed, args.scale, args.suite)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None
    for r in results:
        print(r.line())
    failed = [r.name for r in results if not r.ok]
    print(f"seed={args.seed} scale={args.scale}: {len(results) - len(failed)}/{len(results)} suites passed")
    return EXIT_SELFTEST if failed else EXIT_OK


# -- parser ----------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="linforms", description="Additive complexity of integer matrices, exactly.")
    p.add_argument("--version", action="version", version=f"linforms {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, caps=True):
        sp.add_argument("-o", "--output", help="output path (default stdout)")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--threads", type=_positive("--threads"), default=os.cpu_count() or 1)
        if caps:
            sp.add_argument("--degree-cap", type=_positive("--degree-cap"), default=None)
            sp.add_argument("--digit-cap", type=_positive("--digit-cap"), default=witness.DEFAULT_DIGIT_CAP)
            sp.add_argument("--coeff-bound", type=_positive("--coeff-bound"), default=3)
            sp.add_argument("--budget", type=int, default=None)

    g = sub.add_parser("generate", help="write a matrix file")
    g.add_argument("--m", type=_positive("--m"), required=True)
    g.add_argument("--n", type=_positive("--n"), required=True)
    g.add_argument("--mode", choices=["theorem1", "lemma"], default="theorem1")
    g.add_argument("--d", type=int, default=3)
    g.add_argument("--H", type=_positive("--H"), default=1)
    common(g)
    g.set_defaults(func=cmd_generate)

    c = sub.add_parser("certify", help="certify the complexity of a matrix file")
    c.add_argument("matrix")
    common(c)
    c.set_defaults(func=cmd_certify)

    s = sub.add_parser("synthesize", help="search for a cheap algorithm")
    s.add_argument("matrix")
    common(s)
    s.set_defaults(func=cmd_synthesize)

    a = sub.add_parser("annihilate", help="annihilator of a topology or polynomial map")
    a.add_argument("--topology")
    a.add_argument("--n", type=_positive("--n"))
    a.add_argument("--map", help="JSON file {\"nvars\": k, \"polys\": [text, ...]}")
    common(a)
    a.set_defaults(func=cmd_annihilate)

    b = sub.add_parser("check-bounds", help="verify window chain and height bound")
    b.add_argument("--m", type=_positive("--m"))
    b.add_argument("--n", type=_positive("--n"))
    common(b, caps=False)
    b.set_defaults(func=cmd_check_bounds)

    t = sub.add_parser("selftest", help="run the seeded invariant suites")
    t.add_argument("--scale", choices=sorted(selftest.SCALES), default="quick")
    t.add_argument("--suite", action="append", help="run only this suite (repeatable)")
    common(t, caps=False)
    t.set_defaults(func=cmd_selftest)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "budget", None) is not None and args.budget < 0:
        parser.error("--budget must be >= 0")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
