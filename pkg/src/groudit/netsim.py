"""Exact nondeterministic multiset semantics for groudit and dit networks.

A :class:`MultisetState` is a finite map from joint configurations of named
systems to positive integer multiplicities.  Operations are pure functions on
configurations, lifted to multisets by summation; identical configurations
merge as soon as they appear.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Sequence, Union

from .biunitary import Biunitary, balancers_to_biunitary
from .groupoid import Dit, Groudit, Morphism

Kind = Union[Groudit, Dit]
Value = Union[Morphism, int]
Config = tuple


class NetsimError(Exception):
    """Base class for simulator errors."""


class SystemTypeError(NetsimError, TypeError):
    """A step names a system of the wrong kind, or a missing or duplicate one."""


class LinkError(NetsimError):
    """Tick between two groudits that share no link."""


class UnknownOpError(NetsimError, KeyError):
    """A program names an operation the simulator does not provide."""


# ---------------------------------------------------------------------------
# states


def _fmt_value(kind: Kind, v: Value) -> str:
    if isinstance(kind, Dit):
        return f"[{v}]"
    return f"({v[0]},{v[1]})"


@dataclass(frozen=True)
class MultisetState:
    names: tuple[str, ...]
    kinds: tuple[Kind, ...]
    weights: Mapping[Config, int]

    def __post_init__(self) -> None:
        if len(set(self.names)) != len(self.names):
            raise SystemTypeError("system names must be unique")
        clean = {}
        for cfg, k in self.weights.items():
            if k < 0:
                raise ValueError("multiplicities are natural numbers")
            if k:
                cfg = tuple(Morphism(*v) if isinstance(kd, Groudit) else int(v) for kd, v in zip(self.kinds, cfg))
                clean[cfg] = clean.get(cfg, 0) + int(k)
        object.__setattr__(self, "weights", clean)

    @classmethod
    def empty(cls) -> "MultisetState":
        return cls((), (), {(): 1})

    @classmethod
    def basis(cls, systems: Sequence[tuple[str, Kind, Value]]) -> "MultisetState":
        names = tuple(s[0] for s in systems)
        kinds = tuple(s[1] for s in systems)
        return cls(names, kinds, {tuple(s[2] for s in systems): 1})

    def position(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise SystemTypeError(f"no live system named {name!r}") from None

    def kind(self, name: str) -> Kind:
        return self.kinds[self.position(name)]

    def total(self) -> int:
        return sum(self.weights.values())

    def items(self) -> list[tuple[Config, int]]:
        return sorted(self.weights.items())

    def __len__(self) -> int:
        return len(self.weights)

    def marginal(self, names: Sequence[str]) -> dict[tuple, int]:
        pos = [self.position(n) for n in names]
        out: dict[tuple, int] = {}
        for cfg, k in self.weights.items():
            key = tuple(cfg[p] for p in pos)
            out[key] = out.get(key, 0) + k
        return out

    def reorder(self, names: Sequence[str]) -> "MultisetState":
        if sorted(names) != sorted(self.names):
            raise SystemTypeError("reorder needs the same set of systems")
        pos = [self.position(n) for n in names]
        return MultisetState(tuple(names), tuple(self.kinds[p] for p in pos),
                             {tuple(cfg[p] for p in pos): k for cfg, k in self.weights.items()})

    def scaled(self, k: int) -> "MultisetState":
        return MultisetState(self.names, self.kinds, {c: v * k for c, v in self.weights.items()})

    def format(self) -> str:
        """Sum notation in canonical order, e.g. ``(0,0)[1] + 2 (1,0)[0]``."""
        terms = []
        for cfg, k in self.items():
            body = "".join(_fmt_value(kd, v) for kd, v in zip(self.kinds, cfg))
            if not body:
                terms.append(str(k))
            else:
                terms.append(body if k == 1 else f"{k} {body}")
        return " + ".join(terms)

    def to_json(self) -> dict:
        return {
            "systems": list(self.names),
            "terms": [
                {"config": [list(v) if isinstance(v, tuple) else v for v in cfg], "count": k}
                for cfg, k in self.items()
            ],
        }

    def __str__(self) -> str:
        return self.format()


def states_equal_up_to_scalar(x: MultisetState, y: MultisetState) -> tuple[bool, Fraction | None]:
    """Is there a positive rational k with x = k y (systems matched by name)?"""
    if sorted(x.names) != sorted(y.names):
        return False, None
    y = y.reorder(x.names)
    if set(x.weights) != set(y.weights):
        return False, None
    k = None
    for cfg, v in x.weights.items():
        r = Fraction(v, y.weights[cfg])
        if k is None:
            k = r
        elif r != k:
            return False, None
    return (k is not None), k


# ---------------------------------------------------------------------------
# operations


@dataclass(frozen=True)
class Op:
    """A named transformer acting on the systems in ``args``."""

    name: str
    args: tuple[str, ...]
    apply: Callable[[MultisetState], MultisetState] = field(repr=False, compare=False)

    def __call__(self, state: MultisetState) -> MultisetState:
        return self.apply(state)

    @property
    def label(self) -> str:
        return f"{self.name}({','.join(self.args)})"


def _local(state: MultisetState, targets: Sequence[str], new_names: Sequence[str], new_kinds: Sequence[Kind],
           fn: Callable[[tuple], Mapping[tuple, int]]) -> MultisetState:
    """Replace the systems ``targets`` by ``new_names`` using ``fn`` on their values.

    New systems take the position of the first target, or go last when there
    are no targets.
    """
    pos = [state.position(t) for t in targets]
    keep = [i for i in range(len(state.names)) if i not in pos]
    insert_at = min(pos) if pos else len(state.names)
    before = [i for i in keep if i < insert_at]
    after = [i for i in keep if i > insert_at]
    names = tuple(state.names[i] for i in before) + tuple(new_names) + tuple(state.names[i] for i in after)
    kinds = tuple(state.kinds[i] for i in before) + tuple(new_kinds) + tuple(state.kinds[i] for i in after)
    out: dict[Config, int] = {}
    for cfg, k in state.weights.items():
        for new_vals, m in fn(tuple(cfg[p] for p in pos)).items():
            c2 = tuple(cfg[i] for i in before) + tuple(new_vals) + tuple(cfg[i] for i in after)
            out[c2] = out.get(c2, 0) + k * m
    return MultisetState(names, kinds, out)


def _need_groudit(state: MultisetState, name: str) -> Groudit:
    kd = state.kind(name)
    if not isinstance(kd, Groudit):
        raise SystemTypeError(f"{name!r} is a dit, expected a groudit")
    return kd


def _need_dit(state: MultisetState, name: str) -> Dit:
    kd = state.kind(name)
    if not isinstance(kd, Dit):
        raise SystemTypeError(f"{name!r} is a groudit, expected a dit")
    return kd


def _fresh(state: MultisetState, name: str) -> None:
    if name in state.names:
        raise SystemTypeError(f"system {name!r} already exists")


@lru_cache(maxsize=256)
def _biunitary(d: Groudit) -> Biunitary:
    return balancers_to_biunitary(d)


def op_init(target: str, groudit: Groudit) -> Op:
    """New groudit in the sum of identity morphisms, one per object."""

    def run(s):
        _fresh(s, target)
        return _local(s, [], [target], [groudit],
                      lambda _: {(groudit.groupoid.identity(a),): 1 for a in groudit.groupoid.objects})

    return Op("Init", (target,), run)


def op_swap(target: str) -> Op:
    """Apply the groudit's biunitary F."""

    def run(s):
        d = _need_groudit(s, target)
        f = _biunitary(d)
        return _local(s, [target], [target], [d], lambda v: {(f(v[0]),): 1})

    return Op("Swap", (target,), run)


def op_unswap(target: str) -> Op:
    """Apply F^{-1} (the dagger of Swap)."""

    def run(s):
        d = _need_groudit(s, target)
        f = _biunitary(d).inverse()
        return _local(s, [target], [target], [d], lambda v: {(f(v[0]),): 1})

    return Op("Unswap", (target,), run)


def tick_rule(d: Groudit, g: Morphism, h: Morphism) -> tuple[Morphism, Morphism]:
    """(g, h) -> (g F(k)^{-1}, k h) with k = sigma^{-1}_{s(h)}(s(g)).

    Only the facing sides move: the left groudit is multiplied on the right
    and the right groudit on the left, so Ticks on the two sides of a
    groudit commute.  F(k) = tau^{-1}_{s(g)}(s(h)).
    """
    G = d.groupoid
    k = d.sigma_inv(h.object, g.object)
    fk = _biunitary(d)(k)
    return G.compose(g, G.inverse(fk)), G.compose(k, h)


def op_tick(left: str, right: str, links: Iterable[frozenset] | None = None) -> Op:
    def run(s):
        d1, d2 = _need_groudit(s, left), _need_groudit(s, right)
        if d1 != d2:
            raise SystemTypeError(f"Tick needs two groudits of the same type: {left!r}, {right!r}")
        if left == right:
            raise SystemTypeError("Tick needs two distinct groudits")
        if links is not None and frozenset((left, right)) not in links:
            raise LinkError(f"{left!r} and {right!r} are not linked")
        out = _local(s, [left, right], [left, right], [d1, d2], lambda v: {tick_rule(d1, v[0], v[1]): 1})
        return out.reorder(s.names)

    return Op("Tick", (left, right), run)


def op_read(target: str) -> Op:
    def run(s):
        d = _need_groudit(s, target)
        return _local(s, [target], [target], [d.dit], lambda v: {(v[0].object,): 1})

    return Op("Read", (target,), run)


def op_write(target: str, groudit: Groudit) -> Op:
    def run(s):
        dit = _need_dit(s, target)
        if dit.size != groudit.n:
            raise SystemTypeError(f"dit {target!r} has {dit.size} values, groudit has {groudit.n} objects")
        G = groudit.groupoid
        return _local(s, [target], [target], [groudit],
                      lambda v: {(Morphism(v[0], x),): 1 for x in range(G.order(v[0]))})

    return Op("Write", (target,), run)


def op_iread(target: str) -> Op:
    """Swap, then Read: reads the internal component."""
    sw, rd = op_swap(target), op_read(target)
    return Op("IRead", (target,), lambda s: rd(sw(s)))


def op_iwrite(target: str, groudit: Groudit) -> Op:
    """Write, then the inverse Swap: the dagger of IRead."""
    wr, us = op_write(target, groudit), op_unswap(target)
    return Op("IWrite", (target,), lambda s: us(wr(s)))


def op_rand(target: str, size: int) -> Op:
    def run(s):
        _fresh(s, target)
        return _local(s, [], [target], [Dit(size)], lambda _: {(a,): 1 for a in range(size)})

    return Op("Rand", (target,), run)


def op_erase(target: str) -> Op:
    def run(s):
        _need_dit(s, target)
        return _local(s, [target], [], [], lambda v: {(): 1})

    return Op("Erase", (target,), run)


def ctick_left_rule(d: Groudit, c: int, h: Morphism) -> Morphism:
    """Collapsed Write-Tick-Read with the dit on the left: h -> sigma^{-1}_{s(h)}(c) h."""
    return d.groupoid.compose(d.sigma_inv(h.object, c), h)


def ctick_right_rule(d: Groudit, h: Morphism, c: int) -> Morphism:
    """Collapsed Write-Tick-Read with the dit on the right: h -> h tau^{-1}_{s(h)}(c)^{-1}."""
    G = d.groupoid
    return G.compose(h, G.inverse(d.tau_inv(h.object, c)))


def op_ctick_left(bit: str, target: str) -> Op:
    def run(s):
        dit, d = _need_dit(s, bit), _need_groudit(s, target)
        if dit.size != d.n:
            raise SystemTypeError("CTick needs a dit with one value per object")
        out = _local(s, [bit, target], [bit, target], [dit, d],
                     lambda v: {(v[0], ctick_left_rule(d, v[0], v[1])): 1})
        return out.reorder(s.names)

    return Op("CTickL", (bit, target), run)


def op_ctick_right(target: str, bit: str) -> Op:
    def run(s):
        dit, d = _need_dit(s, bit), _need_groudit(s, target)
        if dit.size != d.n:
            raise SystemTypeError("CTick needs a dit with one value per object")
        out = _local(s, [target, bit], [target, bit], [d, dit],
                     lambda v: {(ctick_right_rule(d, v[0], v[1]), v[1]): 1})
        return out.reorder(s.names)

    return Op("CTickR", (target, bit), run)


def op_split(first: str, second: str, groudit: Groudit) -> Op:
    """New correlated pair: the sum over all g of (g, g^{-1})."""

    def run(s):
        _fresh(s, first)
        _fresh(s, second)
        if first == second:
            raise SystemTypeError("Split needs two distinct names")
        G = groudit.groupoid
        return _local(s, [], [first, second], [groudit, groudit],
                      lambda _: {(m, G.inverse(m)): 1 for m in G.morphisms()})

    return Op("Split", (first, second), run)


def op_copy(source: str, target: str) -> Op:
    """Duplicate a dit; groudits have no such operation."""

    def run(s):
        dit = _need_dit(s, source)
        _fresh(s, target)
        out = _local(s, [source], [source, target], [dit, dit], lambda v: {(v[0], v[0]): 1})
        return out

    return Op("Copy", (source, target), run)


def op_transfer(source: str, target: str) -> Op:
    """Hand a system to another owner: a relabelling of the registry."""

    def run(s):
        kd = s.kind(source)
        _fresh(s, target)
        return _local(s, [source], [target], [kd], lambda v: {v: 1})

    return Op("Transfer", (source, target), run)


# ---------------------------------------------------------------------------
# programs


@dataclass(frozen=True)
class Step:
    op: str
    args: tuple[str, ...]
    failed: bool = False

    def to_json(self) -> dict:
        d = {"op": self.op, "args": list(self.args)}
        if self.failed:
            d["failed"] = True
        return d


@dataclass(frozen=True)
class SystemRegistry:
    """The groudit type of the network and its Tick links.

    ``links=None`` means every pair of groudits may Tick.
    """

    groudit: Groudit
    links: frozenset | None = None

    @classmethod
    def with_links(cls, groudit: Groudit, pairs: Iterable[tuple[str, str]]) -> "SystemRegistry":
        return cls(groudit, frozenset(frozenset(p) for p in pairs))


def _arity(n):
    def check(args):
        if len(args) != n:
            raise SystemTypeError(f"expected {n} argument(s), got {len(args)}")
    return check


OPS: dict[str, tuple[int, Callable]] = {
    "init": (1, lambda reg, a: op_init(a[0], reg.groudit)),
    "swap": (1, lambda reg, a: op_swap(a[0])),
    "unswap": (1, lambda reg, a: op_unswap(a[0])),
    "tick": (2, lambda reg, a: op_tick(a[0], a[1], reg.links)),
    "read": (1, lambda reg, a: op_read(a[0])),
    "write": (1, lambda reg, a: op_write(a[0], reg.groudit)),
    "iread": (1, lambda reg, a: op_iread(a[0])),
    "iwrite": (1, lambda reg, a: op_iwrite(a[0], reg.groudit)),
    "rand": (1, lambda reg, a: op_rand(a[0], reg.groudit.n)),
    "erase": (1, lambda reg, a: op_erase(a[0])),
    "ctick-left": (2, lambda reg, a: op_ctick_left(a[0], a[1])),
    "ctick-right": (2, lambda reg, a: op_ctick_right(a[0], a[1])),
    "split": (2, lambda reg, a: op_split(a[0], a[1], reg.groudit)),
    "copy": (2, lambda reg, a: op_copy(a[0], a[1])),
    "transfer": (2, lambda reg, a: op_transfer(a[0], a[1])),
}


def make_op(reg: SystemRegistry, step: Step) -> Op:
    try:
        arity, factory = OPS[step.op]
    except KeyError:
        raise UnknownOpError(f"unknown operation {step.op!r}") from None
    _arity(arity)(step.args)
    return factory(reg, tuple(step.args))


class StepError(NetsimError):
    def __init__(self, index: int, step: Step, cause: Exception):
        super().__init__(f"step {index} ({step.op} {' '.join(step.args)}): {cause}")
        self.index, self.step, self.cause = index, step, cause


@dataclass
class Trace:
    lines: list[tuple[str, str, MultisetState]] = field(default_factory=list)

    def add(self, state: MultisetState, label: str) -> None:
        self.lines.append((state.format(), label, state))

    def text(self) -> str:
        return "\n".join(f"{s}\t{label}" for s, label, _ in self.lines)

    def to_json(self) -> list[dict]:
        return [{"op": label, "state": st.to_json(), "sum": s} for s, label, st in self.lines]


def run_program(reg: SystemRegistry, init: MultisetState, prog: Sequence[Step]) -> tuple[MultisetState, Trace]:
    """Fold the program over the multiset; failed steps are skipped whole."""
    state, trace = init, Trace()
    for i, step in enumerate(prog):
        try:
            op = make_op(reg, step)
        except UnknownOpError:
            raise
        except NetsimError as exc:
            raise StepError(i, step, exc) from exc
        if step.failed:
            trace.add(state, f"{op.label} [failed]")
            continue
        try:
            state = op(state)
        except NetsimError as exc:
            raise StepError(i, step, exc) from exc
        trace.add(state, op.label)
    return state, trace


def parse_program(doc) -> list[Step]:
    if not isinstance(doc, list):
        raise ValueError("a program is a JSON list of steps")
    steps = []
    for i, item in enumerate(doc):
        if not isinstance(item, dict) or "op" not in item:
            raise ValueError(f"step {i} must be an object with an 'op' field")
        args = item.get("args", [])
        if not isinstance(args, list) or not all(isinstance(a, str) for a in args):
            raise ValueError(f"step {i}: 'args' must be a list of system names")
        steps.append(Step(str(item["op"]), tuple(args), bool(item.get("failed", False))))
    return steps


def program_to_json(prog: Sequence[Step]) -> str:
    return json.dumps([s.to_json() for s in prog], indent=2)
