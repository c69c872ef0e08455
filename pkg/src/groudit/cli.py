"""Command-line entry point.

Exit codes: 0 pass, 1 check failed, 2 parse error, 3 type error,
4 unknown protocol, 5 enumeration guard exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from .biunitary import (
    Biunitary,
    EnumerationGuardError,
    balancers_to_biunitary,
    biunitary_to_balancers,
    check_biunitary,
    count_balancer_pairs,
    enumerate_biunitaries,
)
from .groupoid import Dit, Groudit, GroupoidError, Morphism, groudit_from_json, make_groubit
from .netsim import (
    MultisetState,
    NetsimError,
    StepError,
    SystemRegistry,
    UnknownOpError,
    parse_program,
    run_program,
)

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_TYPE, EXIT_UNKNOWN, EXIT_GUARD = range(6)


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


@dataclass(frozen=True)
class CliConfig:
    subcommand: str
    paths: tuple[str, ...]
    output: str = "text"
    verbose: bool = False
    guard: int | None = None


def config_of(args) -> CliConfig:
    paths = tuple(x for x in (getattr(args, "program", None), getattr(args, "groudit", None),
                              getattr(args, "perm", None)) if x)
    out = "json" if getattr(args, "json", False) or getattr(args, "trace_json", False) else "text"
    return CliConfig(args.subcommand, paths, out, args.verbose, getattr(args, "guard", None))


def _read_json(path: str):
    p = Path(path)
    if not p.exists():
        raise CliError(EXIT_PARSE, f"{path}: no such file")
    try:
        return json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_PARSE, f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    except UnicodeDecodeError as exc:
        raise CliError(EXIT_PARSE, f"{path}: byte {exc.start}: not UTF-8") from None


def _groudit(path: str | None) -> Groudit:
    if path is None:
        return make_groubit()
    doc = _read_json(path)
    try:
        return groudit_from_json(doc)
    except (GroupoidError, TypeError, ValueError) as exc:
        raise CliError(EXIT_TYPE, f"{path}: {exc}") from None


def _perm(path: str | None, d: Groudit, identity: bool):
    if identity:
        return tuple(range(d.groupoid.n_morphisms))
    if path is None:
        return balancers_to_biunitary(d).perm
    doc = _read_json(path)
    if isinstance(doc, dict):
        doc = doc.get("perm")
    if not isinstance(doc, list):
        raise CliError(EXIT_PARSE, f"{path}: expected a list of morphism indices or [object, element] pairs")
    return doc


# ---------------------------------------------------------------------------
# program files

def _program(doc, d: Groudit):
    """A program file is a list of steps, or an object with ``steps`` and
    optional ``init`` (systems present at the start) and ``links``."""
    if isinstance(doc, list):
        doc = {"steps": doc}
    if not isinstance(doc, dict) or "steps" not in doc:
        raise CliError(EXIT_PARSE, "program: expected a list of steps or an object with 'steps'")
    try:
        steps = parse_program(doc["steps"])
    except ValueError as exc:
        raise CliError(EXIT_PARSE, f"program: {exc}") from None

    systems = []
    for i, s in enumerate(doc.get("init", [])):
        if not isinstance(s, dict) or "name" not in s or "value" not in s:
            raise CliError(EXIT_PARSE, f"program: init entry {i} needs 'name' and 'value'")
        kind = s.get("kind", "groudit")
        v = s["value"]
        if kind == "groudit":
            if not (isinstance(v, list) and len(v) == 2):
                raise CliError(EXIT_TYPE, f"program: init entry {i}: a groudit value is [object, element]")
            m = Morphism(int(v[0]), int(v[1]))
            if not (0 <= m.object < d.n and 0 <= m.element < d.groupoid.order(m.object)):
                raise CliError(EXIT_TYPE, f"program: init entry {i}: {list(v)} is not a morphism")
            systems.append((str(s["name"]), d, m))
        elif kind == "dit":
            if not (isinstance(v, int) and 0 <= v < d.n):
                raise CliError(EXIT_TYPE, f"program: init entry {i}: dit value out of range")
            systems.append((str(s["name"]), Dit(d.n), v))
        else:
            raise CliError(EXIT_TYPE, f"program: init entry {i}: unknown kind {kind!r}")
    try:
        init = MultisetState.basis(systems) if systems else MultisetState.empty()
    except NetsimError as exc:
        raise CliError(EXIT_TYPE, f"program: {exc}") from None

    links = doc.get("links")
    if links is None:
        reg = SystemRegistry(d)
    else:
        if not all(isinstance(p, list) and len(p) == 2 for p in links):
            raise CliError(EXIT_PARSE, "program: 'links' is a list of name pairs")
        reg = SystemRegistry.with_links(d, [tuple(p) for p in links])
    return reg, init, steps


def cmd_run(args) -> int:
    d = _groudit(args.groudit)
    reg, init, steps = _program(_read_json(args.program), d)
    try:
        _, trace = run_program(reg, init, steps)
    except UnknownOpError as exc:
        idx = next(i for i, s in enumerate(steps) if s.op not in _op_names())
        raise CliError(EXIT_TYPE, f"step {idx}: {exc.args[0]}") from None
    except StepError as exc:
        raise CliError(EXIT_TYPE, str(exc)) from None
    if args.trace_json:
        print(json.dumps(trace.to_json(), indent=2))
    else:
        print(trace.text())
    return EXIT_OK


def _op_names():
    from .netsim import OPS

    return OPS


# ---------------------------------------------------------------------------


def cmd_verify(args) -> int:
    from .protocols import UnknownProtocolError, verify_protocol

    d = _groudit(args.groudit)
    try:
        rep = verify_protocol(args.protocol, d, parties=args.parties, fail_step=args.fail_step,
                              via_chain=args.via_chain)
    except UnknownProtocolError as exc:
        raise CliError(EXIT_UNKNOWN, exc.args[0]) from None
    except (ValueError, IndexError) as exc:
        raise CliError(EXIT_TYPE, str(exc)) from None
    if args.json:
        print(json.dumps(rep.to_json(), indent=2, sort_keys=True))
    else:
        print(rep.text())
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_check_biunitary(args) -> int:
    d = _groudit(args.groudit)
    g = d.groupoid
    try:
        res = check_biunitary(g, _perm(args.perm, d, args.identity))
    except GroupoidError as exc:
        raise CliError(EXIT_TYPE, str(exc)) from None
    if res:
        print("biunitary")
        return EXIT_OK
    a, b = res.witness
    print(f"not biunitary: |F(Aut {a}) ∩ Aut {b}| = {res.intersection}")
    return EXIT_FAIL


def cmd_enumerate(args) -> int:
    d = _groudit(args.groudit)
    g = d.groupoid
    try:
        found = enumerate_biunitaries(g, guard=args.guard)
    except EnumerationGuardError as exc:
        raise CliError(EXIT_GUARD, str(exc)) from None
    from math import factorial

    total = factorial(g.n_morphisms)
    pairs = count_balancer_pairs(g)
    print(f"{len(found)} of {total}")
    print(f"balancer pairs: {pairs}")
    if args.list:
        for f in found:
            print(" ".join(f"{m}->{f(m)}" for m in g.morphisms()))
    if args.verbose:
        rt = all(balancers_to_biunitary(biunitary_to_balancers(f)).perm == f.perm for f in found)
        print(f"round trip: {'ok' if rt else 'FAILED'}", file=sys.stderr)
    return EXIT_OK if len(found) == pairs else EXIT_FAIL


def cmd_quantize(args) -> int:
    from .gaf.generators import biunitary_span
    from .quantize import quantize_protransformation

    d = _groudit(args.groudit)
    try:
        f = Biunitary(d.groupoid, _perm(args.perm, d, False))
    except GroupoidError as exc:
        raise CliError(EXIT_TYPE, str(exc)) from None
    q = quantize_protransformation(biunitary_span(f))
    doc = {"shape": list(q.shape), "permutation": q.is_permutation(),
           "unitary": q.is_unitary(), "matrix": q.to_json()}
    print(json.dumps(doc))
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    from .protocols import PROTOCOLS

    p = argparse.ArgumentParser(prog="groudit", description="Groudit networks: simulate, verify, enumerate.")
    p.add_argument("-v", "--verbose", action="store_true", help="extra diagnostics on stderr")
    sub = p.add_subparsers(dest="subcommand", required=True)

    gh = "groudit definition file (default: the groubit)"

    r = sub.add_parser("run", help="run a program and print its trace")
    r.add_argument("program")
    r.add_argument("--groudit", help=gh)
    r.add_argument("--trace-json", action="store_true")
    r.set_defaults(func=cmd_run)

    v = sub.add_parser("verify", help="exhaustively verify a protocol")
    v.add_argument("protocol", help="one of: " + ", ".join(PROTOCOLS))
    v.add_argument("--groudit", help=gh)
    v.add_argument("--parties", type=int, default=3)
    v.add_argument("--fail-step", type=int)
    v.add_argument("--via-chain", action="store_true", help="dense coding: relay the groudit instead of renaming it")
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("check-biunitary", help="test a permutation of Mor(G) for biunitarity")
    c.add_argument("--groudit", help=gh)
    grp = c.add_mutually_exclusive_group()
    grp.add_argument("--perm", help="JSON list: image index (or [object, element]) per morphism")
    grp.add_argument("--identity", action="store_true", help="check F = id")
    c.set_defaults(func=cmd_check_biunitary)

    e = sub.add_parser("enumerate-biunitaries", help="count biunitaries by brute force")
    e.add_argument("--groudit", help=gh)
    e.add_argument("--list", action="store_true")
    e.add_argument("--guard", type=int, help="override GROUDIT_ENUM_GUARD")
    e.set_defaults(func=cmd_enumerate)

    q = sub.add_parser("quantize", help="matrix of a biunitary as JSON [re, im] pairs")
    q.add_argument("--groudit", help=gh)
    q.add_argument("--perm")
    q.set_defaults(func=cmd_quantize)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    args.config = config_of(args)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
