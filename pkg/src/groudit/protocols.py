"""Protocol builders and exhaustive verifiers.

Each verifier runs the protocol twice, once on the simulator and once on the
engine (operation spans evaluated by :class:`~groudit.gaf.semantics.LocalEvaluator`),
and reports a verdict for every input.  An input passes only when both routes
pass.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from .groupoid import Groudit, Morphism
from .netsim import MultisetState, Step, SystemRegistry, run_program, states_equal_up_to_scalar

PROTOCOLS = ("state-transfer", "entanglement", "dense-coding", "teleportation", "kd")


class UnknownProtocolError(KeyError):
    pass


@dataclass
class InputResult:
    input: Any
    passed: bool
    scalar: Fraction | None = None
    output: str = ""
    engine_passed: bool | None = None
    detail: str = ""

    def to_json(self) -> dict:
        return {
            "input": _jsonable(self.input),
            "passed": self.passed,
            "scalar": None if self.scalar is None else str(self.scalar),
            "output": self.output,
            "engine_passed": self.engine_passed,
            "detail": self.detail,
        }


@dataclass
class ProtocolReport:
    name: str
    groudit: Groudit
    results: list[InputResult] = field(default_factory=list)
    decoded: dict = field(default_factory=dict)
    kd_tables: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.results) and all(r.passed for r in self.results)

    @property
    def scalars(self) -> list[Fraction]:
        return sorted({r.scalar for r in self.results if r.scalar is not None})

    def counts(self) -> tuple[int, int]:
        return sum(r.passed for r in self.results), len(self.results)

    def text(self) -> str:
        ok, n = self.counts()
        lines = [f"protocol: {self.name}", f"groudit: |Ob| = {self.groudit.n}",
                 f"result: {ok}/{n} pass"]
        if self.scalars:
            lines.append("scalars: " + ", ".join(str(s) for s in self.scalars))
        lines.append("")
        lines.append("input\tverdict\tscalar\tengine\toutput")
        for r in self.results:
            lines.append(f"{_fmt(r.input)}\t{'PASS' if r.passed else 'FAIL'}\t"
                         f"{'' if r.scalar is None else r.scalar}\t"
                         f"{'' if r.engine_passed is None else ('PASS' if r.engine_passed else 'FAIL')}\t{r.output}")
        if self.decoded:
            lines.append("")
            lines.append("decoded map:")
            for k in sorted(self.decoded):
                lines.append(f"  {_fmt(k)} -> {_fmt(self.decoded[k])}")
        if self.kd_tables:
            lines.append("")
            for combo in sorted(self.kd_tables, key=str):
                lines.append(f"distribution {_fmt(combo)}:")
                for outcome, k in sorted(self.kd_tables[combo].items()):
                    lines.append(f"  {_fmt(outcome)}\t{k}")
        for note in self.notes:
            lines.append(f"note: {note}")
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "protocol": self.name,
            "groudit": self.groudit.to_json(),
            "passed": self.passed,
            "scalars": [str(s) for s in self.scalars],
            "results": [r.to_json() for r in self.results],
            "decoded": [[_jsonable(k), _jsonable(v)] for k, v in sorted(self.decoded.items())],
            "kd_tables": [
                {"combo": _jsonable(c), "table": [[_jsonable(o), k] for o, k in sorted(t.items())]}
                for c, t in sorted(self.kd_tables.items(), key=str)
            ],
            "notes": list(self.notes),
        }


def _jsonable(x):
    if isinstance(x, tuple):
        return [_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return str(x)
    return x


def _fmt(x) -> str:
    if isinstance(x, Morphism):
        return f"({x.object},{x.element})"
    if isinstance(x, tuple):
        return "(" + ",".join(_fmt(v) for v in x) + ")"
    if x is None:
        return "-"
    return str(x)


def _engine(d: Groudit, init: MultisetState, prog: Sequence[Step]) -> MultisetState:
    from .gaf.semantics import run_engine

    return run_engine(d, init, prog, "local")


# ---------------------------------------------------------------------------
# state transfer


def party_names(n: int) -> list[str]:
    return [f"P{i}" for i in range(n)]


def basic_block(left: str, right: str) -> list[Step]:
    return [Step("tick", (left, right)), Step("swap", (left,)), Step("swap", (right,)), Step("tick", (left, right))]


def build_state_transfer(d: Groudit, parties: int) -> list[Step]:
    """Relay ``P0``'s groudit along the chain ``P0 - P1 - ... - P(n-1)``.

    ``P1 ... P(n-1)`` are initialized first, then one basic block runs on each
    neighbouring pair.
    """
    if parties < 2:
        raise ValueError("state transfer needs at least two parties")
    names = party_names(parties)
    prog = [Step("init", (nm,)) for nm in names[1:]]
    for a, b in zip(names, names[1:]):
        prog += basic_block(a, b)
    return prog


def chain_registry(d: Groudit, names: Sequence[str]) -> SystemRegistry:
    return SystemRegistry.with_links(d, zip(names, names[1:]))


def _transfer_target(d: Groudit, names: Sequence[str], m: Morphism) -> MultisetState:
    """Every relay left in the Init state, the last party holding ``m``."""
    prog = [Step("init", (nm,)) for nm in names[:-1]]
    s = run_program(SystemRegistry(d), MultisetState.empty(), prog)[0]
    return MultisetState(s.names + (names[-1],), s.kinds + (d,), {cfg + (m,): k for cfg, k in s.weights.items()})


def verify_state_transfer(d: Groudit, parties: int = 3, fail_step: int | None = None) -> ProtocolReport:
    names = party_names(parties)
    reg = chain_registry(d, names)
    prog = build_state_transfer(d, parties)
    if fail_step is not None:
        if not 0 <= fail_step < len(prog):
            raise ValueError(f"fail step {fail_step} out of range: the program has {len(prog)} steps")
        prog = [Step(s.op, s.args, s.failed or i == fail_step) for i, s in enumerate(prog)]
    rep = ProtocolReport("state-transfer", d)
    for m in d.groupoid.morphisms():
        init = MultisetState.basis([(names[0], d, m)])
        out, _ = run_program(reg, init, prog)
        eng = _engine(d, init, prog)
        target = _transfer_target(d, names, m)
        ok, k = states_equal_up_to_scalar(out, target)
        eok, _ = states_equal_up_to_scalar(eng, target)
        same, _ = states_equal_up_to_scalar(out, eng)
        rep.results.append(InputResult(m, bool(ok and eok and same), k, out.format(), bool(eok)))
    if fail_step is not None:
        rep.notes.append(f"step {fail_step} ({prog[fail_step].op} {' '.join(prog[fail_step].args)}) failed")
        if fail_step == len(prog) - 1:
            rec = failed_final_tick_report(d, parties)
            rep.notes.append("unswap of " + names[-2] + " recovers the logical value: "
                             + ("yes" if all(v["logical_recovered"] for v in rec.values()) else "no"))
            rep.notes.append("retrying the failed tick completes the transfer: "
                             + ("yes" if all(v["retry_completes"] for v in rec.values()) else "no"))
    return rep


def basic_block_table(d: Groudit) -> dict[tuple[Morphism, Morphism], MultisetState]:
    """Output of one basic block for every pair of basis inputs."""
    out = {}
    G = d.groupoid
    for g, h in itertools.product(G.morphisms(), repeat=2):
        init = MultisetState.basis([("A", d, g), ("B", d, h)])
        out[(g, h)] = run_program(SystemRegistry(d), init, basic_block("A", "B"))[0]
    return out


def failed_final_tick_report(d: Groudit, parties: int = 3) -> dict:
    """Fault injection on the last Tick of the relay.

    Per input: whether the left party of the last block, after an inverse
    Swap, holds the input's object in every branch; and whether retrying the
    failed Tick completes the transfer.
    """
    names = party_names(parties)
    reg = chain_registry(d, names)
    prog = build_state_transfer(d, parties)
    last = len(prog) - 1
    faulty = [Step(s.op, s.args, i == last) for i, s in enumerate(prog)]
    left = names[-2]
    res = {}
    for m in d.groupoid.morphisms():
        init = MultisetState.basis([(names[0], d, m)])
        out, _ = run_program(reg, init, faulty)
        recovered, _ = run_program(reg, out, [Step("unswap", (left,))])
        logical = {cfg[0].object for cfg in recovered.marginal([left])}
        retried, _ = run_program(reg, out, [prog[last]])
        ok, _ = states_equal_up_to_scalar(retried, _transfer_target(d, names, m))
        res[m] = {"logical_recovered": logical == {m.object}, "retry_completes": bool(ok), "state": out.format()}
    return res


# ---------------------------------------------------------------------------
# entanglement


def build_entanglement(d: Groudit, left: str = "A", right: str = "B") -> list[Step]:
    return [Step("init", (left,)), Step("init", (right,)), Step("tick", (left, right)), Step("swap", (right,))]


def entangled_state(d: Groudit) -> MultisetState:
    return run_program(SystemRegistry(d), MultisetState.empty(), build_entanglement(d))[0]


def verify_entanglement(d: Groudit) -> ProtocolReport:
    """One branch per morphism, each with multiplicity 1, and A determines B."""
    rep = ProtocolReport("entanglement", d)
    prog = build_entanglement(d)
    out = run_program(SystemRegistry(d), MultisetState.empty(), prog)[0]
    eng = _engine(d, MultisetState.empty(), prog)
    same, k = states_equal_up_to_scalar(out, eng)
    nmor = d.groupoid.n_morphisms
    a_vals = out.marginal(["A"])
    b_vals = out.marginal(["B"])
    correlated = len(out) == nmor == len(a_vals) == len(b_vals) and set(out.weights.values()) == {1}
    rep.results.append(InputResult((), bool(correlated and same), k, out.format(), bool(same)))
    return rep


# ---------------------------------------------------------------------------
# dense coding


def build_dense_coding(d: Groudit, via_chain: bool = False) -> list[Step]:
    """Alice codes the dits ``x`` and ``y`` into ``A``; Bob reads both groudits.

    Alice: CTick(x, A), Swap A, CTick(y, A); ``A`` is handed to Bob as ``A2``.
    Bob: Tick(A2, B), then IRead on ``B`` and ``A2``.

    The hand-over is a rename unless ``via_chain``, in which case ``A`` is
    relayed to ``A2`` through a relay ``R`` by two basic blocks, and the
    spent groudits ``A`` and ``R`` are read and erased.
    """
    if via_chain:
        move = [Step("init", ("R",)), Step("init", ("A2",))]
        move += basic_block("A", "R") + basic_block("R", "A2")
        move += [Step("read", ("A",)), Step("erase", ("A",)), Step("read", ("R",)), Step("erase", ("R",))]
    else:
        move = [Step("transfer", ("A", "A2"))]
    return build_entanglement(d) + [
        Step("ctick-left", ("x", "A")),
        Step("swap", ("A",)),
        Step("ctick-left", ("y", "A")),
        *move,
        Step("tick", ("A2", "B")),
        Step("iread", ("B",)),
        Step("iread", ("A2",)),
    ]


def verify_dense_coding(d: Groudit, via_chain: bool = False) -> ProtocolReport:
    rep = ProtocolReport("dense-coding", d)
    prog = build_dense_coding(d, via_chain)
    reg = SystemRegistry(d)
    n = d.n
    for x, y in itertools.product(range(n), repeat=2):
        init = MultisetState.basis([("x", d.dit, x), ("y", d.dit, y)])
        out, _ = run_program(reg, init, prog)
        eng = _engine(d, init, prog)
        m = out.marginal(["B", "A2"])
        em = eng.marginal(["B", "A2"])
        det = len(m) == 1
        edet = len(em) == 1 and set(em) == set(m)
        decoded = next(iter(m)) if det else None
        if det:
            rep.decoded[(x, y)] = decoded
        inputs_kept = out.marginal(["x", "y"]) and set(out.marginal(["x", "y"])) == {(x, y)}
        rep.results.append(InputResult((x, y), bool(det and edet and inputs_kept), None,
                                       _fmt(decoded) if det else out.format(), bool(edet)))
    bij = len(rep.decoded) == n * n and len(set(rep.decoded.values())) == n * n
    if not bij:
        for r in rep.results:
            r.passed = False
        rep.notes.append("decoded map is not a bijection")
    else:
        ident = all(k == v for k, v in rep.decoded.items())
        rep.notes.append("decoded map is the identity" if ident else "decoded map is a non-identity bijection")
    return rep


# ---------------------------------------------------------------------------
# teleportation


def build_teleportation(d: Groudit) -> list[Step]:
    """Teleport ``X`` from Alice to Bob's half ``B`` of an entangled pair.

    Alice: Tick(X, A), Swap X, Swap A, Read X, Read A.
    Bob: CTick(A, B), Swap B, CTick(X, B), both from the left, then Erase
    both dits.  The Swap between the two CTicks is needed because a CTick
    never changes the object of the groudit it acts on.
    """
    return build_entanglement(d) + [
        Step("tick", ("X", "A")),
        Step("swap", ("X",)),
        Step("swap", ("A",)),
        Step("read", ("X",)),
        Step("read", ("A",)),
        Step("ctick-left", ("A", "B")),
        Step("swap", ("B",)),
        Step("ctick-left", ("X", "B")),
        Step("erase", ("X",)),
        Step("erase", ("A",)),
    ]


def verify_teleportation(d: Groudit) -> ProtocolReport:
    rep = ProtocolReport("teleportation", d)
    prog = build_teleportation(d)
    reg = SystemRegistry(d)
    for m in d.groupoid.morphisms():
        init = MultisetState.basis([("X", d, m)])
        out, _ = run_program(reg, init, prog)
        eng = _engine(d, init, prog)
        target = MultisetState.basis([("B", d, m)])
        ok, k = states_equal_up_to_scalar(out, target)
        eok, _ = states_equal_up_to_scalar(eng, target)
        rep.results.append(InputResult(m, bool(ok and eok), k, out.format(), bool(eok)))
    if len(rep.scalars) > 1:
        for r in rep.results:
            r.passed = False
        rep.notes.append("scalar is not uniform across inputs")
    return rep


# ---------------------------------------------------------------------------
# key distribution

ENCODE = ("write", "iwrite")
DECODE = ("read", "iread")
_DAGGER = {"read": "write", "iread": "iwrite"}
_MATCH = {"write": "read", "iwrite": "iread"}


def build_kd(d: Groudit, alice_op: str, eve_op: str | None, bob_op: str) -> list[Step]:
    """One round: Alice draws ``kA``, encodes a copy into ``k``; Eve may
    intercept, copy her reading to ``kE`` and re-encode; Bob decodes ``k``."""
    if alice_op not in ENCODE or bob_op not in DECODE or eve_op not in DECODE + (None,):
        raise ValueError("alice_op in write|iwrite, eve_op in read|iread|None, bob_op in read|iread")
    prog = [Step("rand", ("kA",)), Step("copy", ("kA", "k")), Step(alice_op, ("k",))]
    if eve_op is not None:
        prog += [Step(eve_op, ("k",)), Step("copy", ("k", "kE")), Step(_DAGGER[eve_op], ("k",))]
    prog.append(Step(bob_op, ("k",)))
    return prog


def kd_distribution(d: Groudit, alice_op: str, eve_op: str | None, bob_op: str, engine: bool = False) -> dict:
    prog = build_kd(d, alice_op, eve_op, bob_op)
    names = ["kA", "kE", "k"] if eve_op else ["kA", "k"]
    if engine:
        out = _engine(d, MultisetState.empty(), prog)
    else:
        out = run_program(SystemRegistry(d), MultisetState.empty(), prog)[0]
    return out.marginal(names)


def kd_expectation(d: Groudit, alice_op: str, eve_op: str | None, bob_op: str, table: dict) -> tuple[bool, str]:
    """Matched bases: all parties agree.  Any mismatch: uniform product."""
    matched = _MATCH[alice_op] == bob_op and (eve_op is None or eve_op == bob_op)
    if matched:
        agree = all(len(set(o)) == 1 for o in table)
        return agree, "matched: all bits agree" if agree else "matched: bits disagree"
    n = d.n
    k = len(next(iter(table)))
    full = set(itertools.product(range(n), repeat=k))
    uniform = set(table) == full and len(set(table.values())) == 1
    if uniform:
        return True, "mismatch: uniform product"
    return False, f"mismatch: expected uniform product, observed {len(table)} of {len(full)} outcomes"


def verify_kd(d: Groudit, include_no_eve: bool = True) -> ProtocolReport:
    rep = ProtocolReport("kd", d)
    combos = [(a, e, b) for a in ENCODE for e in DECODE for b in DECODE]
    if include_no_eve:
        combos += [(a, None, b) for a in ENCODE for b in DECODE]
    for a, e, b in combos:
        table = kd_distribution(d, a, e, b)
        etable = kd_distribution(d, a, e, b, engine=True)
        ok, why = kd_expectation(d, a, e, b, table)
        same, _ = _tables_equal_up_to_scalar(table, etable)
        rep.kd_tables[(a, e, b)] = table
        rep.results.append(InputResult((a, e, b), bool(ok and same), None, why, bool(same)))
    return rep


def _tables_equal_up_to_scalar(x: dict, y: dict):
    if set(x) != set(y):
        return False, None
    ratios = {Fraction(x[k], y[k]) for k in x}
    return len(ratios) == 1, (ratios.pop() if len(ratios) == 1 else None)


# ---------------------------------------------------------------------------


def verify_protocol(name: str, d: Groudit, parties: int = 3, fail_step: int | None = None,
                    via_chain: bool = False) -> ProtocolReport:
    if name == "state-transfer":
        return verify_state_transfer(d, parties, fail_step)
    if name == "entanglement":
        return verify_entanglement(d)
    if name == "dense-coding":
        return verify_dense_coding(d, via_chain)
    if name == "teleportation":
        return verify_teleportation(d)
    if name == "kd":
        return verify_kd(d)
    raise UnknownProtocolError(f"unknown protocol {name!r}; choose from {', '.join(PROTOCOLS)}")


def report_json(rep: ProtocolReport) -> str:
    return json.dumps(rep.to_json(), indent=2, sort_keys=True)
