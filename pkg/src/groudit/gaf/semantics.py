"""Network operations as engine spans, and an engine-side program evaluator.

Every operation is a span between chains of systems.  A groudit occupies the
wires ``[L, R]``, a dit ``[L^D, R^D]``; the regions between systems are the
trivial groupoid, so a chain of systems decodes to a tuple of per-system
values (a morphism for a groudit, an object for a dit).

Two evaluators are provided.  :class:`DiagramEvaluator` keeps the whole
network as a single vector ``[] => chain`` and applies each operation by
whiskering, bringing non-adjacent systems together with :func:`exchange`.
:class:`LocalEvaluator` reads each operation span as a table on the values of
the systems it touches and applies it to a multiset; this is exact because
horizontal composition over the trivial groupoid is a product, and it scales
to networks the diagram evaluator cannot hold in memory.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from ..biunitary import balancers_to_biunitary, check_biunitary
from ..groupoid import Groudit, Groupoid
from ..netsim import MultisetState, Step, SystemTypeError, UnknownOpError
from .chain import Diagram, between, flat_label
from .generators import (
    biunitary_span,
    copy_dit_span,
    decode_groudit,
    exchange,
    init_span,
    measurement_span,
    merge_dit_span,
    merge_groudit_span,
    mirror,
    rand_span,
    read_span,
    erase_span,
    erase_groudit_span,
    split_groudit_span,
    tick_span,
    wires_for,
    write_span,
)
from .profunctor import (
    Protransformation,
    cap,
    compose_all,
    compose_vertical,
    cup,
    dagger,
    identity_span,
)

G_, D_ = "G", "D"


# ---------------------------------------------------------------------------
# layouts


def layout_wires(g: Groupoid, layout: Sequence[str]) -> list:
    w = wires_for(g)
    out = []
    for k in layout:
        out += w.groudit if k == G_ else w.dit
    return out


def decode(g: Groupoid, layout: Sequence[str], objs, elems) -> tuple:
    vals = []
    for n, k in enumerate(layout):
        i = 2 * n
        if k == G_:
            vals.append(decode_groudit(g, objs[i:i + 2], elems[i:i + 2]))
        else:
            vals.append(objs[i + 1])
    return tuple(vals)


def encode(g: Groupoid, layout: Sequence[str], vals) -> tuple:
    objs, elems = [0], []
    for k, v in zip(layout, vals):
        if k == G_:
            a, x = v
            objs += [a, 0]
            elems += [g.aut(a).identity, x]
        else:
            objs += [v, 0]
            elems += [0, 0]
    return tuple(objs), tuple(elems)


def span_table(g: Groupoid, span: Protransformation, src: Sequence[str], tgt: Sequence[str]) -> dict:
    """``{source values: {target values: multiplicity}}`` read off a span."""
    table: dict = {}
    for blk, labs in span.source.elements.items():
        for n in range(len(labs)):
            table.setdefault(decode(g, src, *flat_label(span.source, blk, n)), {})
    for blk, e in span.values.items():
        for (i, j), v in e.items():
            a = decode(g, src, *flat_label(span.source, blk, i))
            b = decode(g, tgt, *flat_label(span.target, blk, j))
            row = table.setdefault(a, {})
            row[b] = row.get(b, 0) + v
    return table


# ---------------------------------------------------------------------------
# operation spans


@dataclass(frozen=True)
class OpSpan:
    span: Protransformation
    source: tuple[str, ...]
    target: tuple[str, ...]


def _diagram(g, layout):
    return Diagram(layout_wires(g, layout))


@lru_cache(maxsize=None)
def op_span(d: Groudit, op: str) -> OpSpan:
    """Engine span of a network operation for the groudit type ``d``."""
    g = d.groupoid
    f = balancers_to_biunitary(d)
    if op == "init":
        return OpSpan(init_span(g), (), (G_,))
    if op == "swap":
        return OpSpan(biunitary_span(f), (G_,), (G_,))
    if op == "unswap":
        return OpSpan(dagger(biunitary_span(f)), (G_,), (G_,))
    if op == "tick":
        return OpSpan(_diagram(g, (G_, G_)).apply(1, tick_span(f)).span, (G_, G_), (G_, G_))
    if op == "read":
        return OpSpan(read_span(g), (G_,), (D_,))
    if op == "write":
        return OpSpan(write_span(g), (D_,), (G_,))
    if op == "iread":
        return OpSpan(compose_vertical(biunitary_span(f), read_span(g)), (G_,), (D_,))
    if op == "iwrite":
        return OpSpan(compose_vertical(write_span(g), dagger(biunitary_span(f))), (D_,), (G_,))
    if op == "rand":
        return OpSpan(rand_span(g), (), (D_,))
    if op == "erase":
        return OpSpan(erase_span(g), (D_,), ())
    if op == "ctick-left":
        dg = _diagram(g, (D_, G_)).apply(0, write_span(g)).apply(1, tick_span(f)).apply(0, read_span(g))
        return OpSpan(dg.span, (D_, G_), (D_, G_))
    if op == "ctick-right":
        dg = _diagram(g, (G_, D_)).apply(2, write_span(g)).apply(1, tick_span(f)).apply(2, read_span(g))
        return OpSpan(dg.span, (G_, D_), (G_, D_))
    if op == "split":
        dg = Diagram([]).apply(0, init_span(g)).apply(0, split_groudit_span(g))
        return OpSpan(dg.span, (), (G_, G_))
    if op == "copy":
        return OpSpan(copy_dit_span(g), (D_,), (D_, D_))
    raise UnknownOpError(f"no engine span for {op!r}")


@lru_cache(maxsize=None)
def op_table(d: Groudit, op: str) -> dict:
    s = op_span(d, op)
    return span_table(d.groupoid, s.span, s.source, s.target)


# arguments of each op: (names consumed, names produced)
def _io(op: str, args: tuple[str, ...]):
    if op in ("init", "rand"):
        return (), args
    if op == "erase":
        return args, ()
    if op == "split":
        return (), args
    if op == "copy":
        return args[:1], args
    if op == "transfer":
        return args[:1], args[1:]
    return args, args


def _kind_code(kind) -> str:
    return G_ if isinstance(kind, Groudit) else D_


# ---------------------------------------------------------------------------
# evaluators


class LocalEvaluator:
    """Apply engine operation tables to a multiset of configurations."""

    def __init__(self, groudit: Groudit):
        self.groudit = groudit

    def apply(self, state: MultisetState, step: Step) -> MultisetState:
        from ..netsim import _local

        d = self.groudit
        op, args = step.op, tuple(step.args)
        if op == "transfer":
            kd = state.kind(args[0])
            return _local(state, [args[0]], [args[1]], [kd], lambda v: {v: 1})
        table = op_table(d, op)
        src_names, tgt_names = _io(op, args)
        shape = op_span(d, op)
        for nm, code in zip(src_names, shape.source):
            if _kind_code(state.kind(nm)) != code:
                raise SystemTypeError(f"{op}: {nm!r} has the wrong kind")
        for nm in tgt_names:
            if nm not in src_names and nm in state.names:
                raise SystemTypeError(f"system {nm!r} already exists")
        kinds = [d if c == G_ else d.dit for c in shape.target]
        out = _local(state, list(src_names), list(tgt_names), kinds, lambda v: table[tuple(v)])
        order = [n for n in state.names if n in tgt_names or n not in src_names]
        order += [n for n in tgt_names if n not in order]
        return out.reorder(order)

    def run(self, init: MultisetState, prog: Sequence[Step]) -> MultisetState:
        state = init
        for step in prog:
            if not step.failed:
                state = self.apply(state, step)
        return state


class DiagramEvaluator:
    """The network as one vector ``[] => chain``, built layer by layer."""

    def __init__(self, groudit: Groudit, init: MultisetState):
        self.groudit = groudit
        g = groudit.groupoid
        self.names = list(init.names)
        self.layout = [_kind_code(k) for k in init.kinds]
        wires = layout_wires(g, self.layout)
        items = dict(init.weights)

        def fn(blk, lab):
            return {encode(g, self.layout, cfg): k for cfg, k in items.items()}

        self.diagram = Diagram([])
        if wires:
            self.diagram.apply(0, between([], wires, fn))
        else:
            self.diagram.span = self.diagram.span.scaled(sum(items.values()))

    def _move_adjacent(self, names: Sequence[str]) -> int:
        """Bring ``names`` together in the given order; return the first position."""
        for prev, nm in zip(names, names[1:]):
            while self.names.index(nm) < self.names.index(prev):
                self._exchange(self.names.index(nm))
            while self.names.index(nm) > self.names.index(prev) + 1:
                self._exchange(self.names.index(nm) - 1)
        return self.names.index(names[0])

    def _exchange(self, i: int) -> None:
        g = self.groudit.groupoid
        a = layout_wires(g, [self.layout[i]])
        b = layout_wires(g, [self.layout[i + 1]])
        self.diagram.apply(2 * i, exchange(a, b))
        self.names[i], self.names[i + 1] = self.names[i + 1], self.names[i]
        self.layout[i], self.layout[i + 1] = self.layout[i + 1], self.layout[i]

    def apply(self, step: Step) -> None:
        op, args = step.op, tuple(step.args)
        if step.failed:
            return
        if op == "transfer":
            self.names[self.names.index(args[0])] = args[1]
            return
        shape = op_span(self.groudit, op)
        src_names, tgt_names = _io(op, args)
        if src_names:
            pos = self._move_adjacent(src_names)
        else:
            pos = len(self.names)
        for k, nm in enumerate(src_names):
            if self.layout[pos + k] != shape.source[k]:
                raise SystemTypeError(f"{op}: {nm!r} has the wrong kind")
        self.diagram.apply(2 * pos, shape.span)
        self.names[pos:pos + len(src_names)] = list(tgt_names)
        self.layout[pos:pos + len(src_names)] = list(shape.target)

    def state(self) -> MultisetState:
        d = self.groudit
        span = self.diagram.span
        kinds = tuple(d if c == G_ else d.dit for c in self.layout)
        out: dict = {}
        for blk, e in span.values.items():
            for (_, j), v in e.items():
                cfg = decode(d.groupoid, self.layout, *flat_label(span.target, blk, j)) if self.layout else ()
                out[cfg] = out.get(cfg, 0) + v
        return MultisetState(tuple(self.names), kinds, out)

    def run(self, prog: Sequence[Step]) -> MultisetState:
        for step in prog:
            self.apply(step)
        return self.state()


def run_engine(groudit: Groudit, init: MultisetState, prog: Sequence[Step], mode: str = "local") -> MultisetState:
    if mode == "local":
        return LocalEvaluator(groudit).run(init, prog)
    if mode == "diagram":
        return DiagramEvaluator(groudit, init).run(prog)
    raise ValueError("mode is 'local' or 'diagram'")


# ---------------------------------------------------------------------------
# diagram identities


def graphical_biunitarity_span(f_perm, g: Groupoid) -> Protransformation:
    """Split, F, merge, split, F^{-1}, merge on two adjacent groudits.

    The input ``(g)(g')`` goes to the sum over h, r of
    ``(g h^{-1} F^{-1}(r)) (r^{-1} F(h) g')``.  The permutation only has to
    be a bijection of Mor(G); both F and its inverse are used as plain maps.
    """
    from .generators import morphism_span

    perm = list(f_perm)
    inv = [0] * len(perm)
    for i, j in enumerate(perm):
        inv[j] = i
    F = morphism_span(g, lambda m: {g.morphism(perm[g.index(m)]): 1})
    Fi = morphism_span(g, lambda m: {g.morphism(inv[g.index(m)]): 1})
    dg = _diagram(g, (G_, G_))
    dg.apply(0, split_groudit_span(g))
    dg.apply(2, F)
    dg.apply(2, merge_groudit_span(g))
    dg.apply(2, split_groudit_span(g))
    dg.apply(2, Fi)
    dg.apply(0, merge_groudit_span(g))
    return dg.span


def check_graphical_biunitarity(g: Groupoid, perm) -> bool:
    """The composite above is the identity exactly when F is biunitary."""
    span = graphical_biunitarity_span(perm, g)
    return span == identity_span(span.source)


@dataclass(frozen=True)
class EquationResult:
    name: str
    holds: bool
    scalar: Fraction | None = None
    detail: str = ""


def _scalar_of(span: Protransformation, ref: Protransformation) -> Fraction | None:
    from .profunctor import equal_up_to_scalar

    return equal_up_to_scalar(span, ref)


def measurement_equations(g: Groupoid) -> list[EquationResult]:
    """Measurement vertex and isospan identities, plus the two closed loops."""
    m = measurement_span(g)
    w = m.wires
    n = g.n_objects
    out = []

    vv = compose_vertical(m.vertex, dagger(m.vertex))
    out.append(EquationResult("vertex-then-dagger is not the identity", vv != identity_span(vv.source)))
    dd = compose_vertical(dagger(m.isospan), m.isospan)
    out.append(EquationResult("isospan dagger-then-isospan is the identity", dd == identity_span(dd.source)))
    e = compose_vertical(dagger(m.vertex), m.vertex)
    out.append(EquationResult("dagger-vertex-then-vertex is |Ob| times the identity",
                              e == identity_span(e.source).scaled(n), _scalar_of(e, identity_span(e.source))))
    f = compose_vertical(m.isospan, dagger(m.isospan))
    out.append(EquationResult("isospan-then-dagger is the identity", f == identity_span(f.source)))

    from .chain import chain_span

    # a yellow loop in a blue region, and a blue loop in a yellow region
    y_in_b = compose_vertical(chain_span(cup(w.S)), chain_span(cap(w.Sa)))
    idg = identity_span(y_in_b.source)
    out.append(EquationResult("yellow loop in blue is |Ob|", y_in_b == idg.scaled(n), _scalar_of(y_in_b, idg)))
    b_in_y = compose_vertical(chain_span(cup(w.Sa)), chain_span(cap(w.S)))
    idd = identity_span(b_in_y.source)
    out.append(EquationResult("blue loop in yellow is 1", b_in_y == idd, _scalar_of(b_in_y, idd)))
    return out


def yellow_biunitary_spans(d: Groudit) -> dict[str, Protransformation]:
    g = d.groupoid
    f = balancers_to_biunitary(d)
    F = biunitary_span(f)
    yb = compose_vertical(F, read_span(g))
    yy = compose_all(write_span(g), F, read_span(g))
    return {"yellow-blue": yb, "blue-yellow": dagger(yb), "yellow-yellow": yy}


def yellow_biunitary_equations(d: Groudit) -> list[EquationResult]:
    """The all-yellow crossing is random-after-erase; the split identity."""
    g = d.groupoid
    f = balancers_to_biunitary(d)
    sp = yellow_biunitary_spans(d)
    out = []
    rhs = compose_vertical(erase_span(g), rand_span(g))
    out.append(EquationResult("all-yellow crossing equals Rand after Erase", sp["yellow-yellow"] == rhs,
                              _scalar_of(sp["yellow-yellow"], rhs)))

    mirrored = compose_vertical(mirror(biunitary_span(f)), read_span(g))
    dg = _diagram(g, (G_,))
    dg.apply(0, split_groudit_span(g))
    dg.apply(0, sp["yellow-blue"])
    dg.apply(2, mirrored)
    dg.apply(0, merge_dit_span(g))
    rhs2 = compose_vertical(erase_groudit_span(g), rand_span(g))
    out.append(EquationResult("split, yellow crossing and its mirror, merge equals Rand after the blue cap",
                              dg.span == rhs2, _scalar_of(dg.span, rhs2)))
    return out


def biunitary_agreement(g: Groupoid, perms) -> list[tuple[tuple[int, ...], bool, bool]]:
    """(perm, algebraic verdict, graphical verdict) for each permutation."""
    return [(tuple(p), bool(check_biunitary(g, p)), check_graphical_biunitarity(g, p)) for p in perms]


# ---------------------------------------------------------------------------
# simulator against engine

ENGINE_OPS = ("init", "swap", "unswap", "tick", "read", "write", "iread", "iwrite", "rand", "erase",
              "ctick-left", "ctick-right", "split", "copy")


@dataclass(frozen=True)
class OracleResult:
    op: str
    input: tuple
    holds: bool
    scalar: Fraction | None


def oracle_equivalence(d: Groudit, ops: Sequence[str] = ENGINE_OPS) -> list[OracleResult]:
    """Run each op in the simulator on every basis input and compare with its span."""
    from ..netsim import SystemRegistry, run_program, states_equal_up_to_scalar

    reg = SystemRegistry(d)
    out = []
    for op in ops:
        shape = op_span(d, op)
        args = ("A", "B") if len(shape.source) == 2 or len(shape.target) == 2 else ("A",)
        src, tgt = _io(op, args)
        for vals, row in sorted(op_table(d, op).items()):
            kinds = [d if c == G_ else d.dit for c in shape.source]
            init = MultisetState.basis(list(zip(src, kinds, vals)))
            got, _ = run_program(reg, init, [Step(op, args)])
            want = MultisetState(tuple(tgt), tuple(d if c == G_ else d.dit for c in shape.target), row)
            ok, k = states_equal_up_to_scalar(got, want)
            out.append(OracleResult(op, tuple(vals), bool(ok) and k is not None and k > 0, k))
    return out
