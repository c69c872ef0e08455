"""Flat n-ary composites ("chains") of profunctors and diagrams built on them.

A chain ``[w1, ..., wk]`` is the composite ``w1; w2; ...; wk`` taken all at
once.  Its elements are tuples ``(objects, elements)`` where ``objects`` runs
through the k+1 regions and ``elements[i]`` indexes the carrier of ``w(i+1)``;
the gauge group of every internal region is fixed left to right so that each
element except the last is the least member of its right orbit.  This is the
lexicographically least representative of the class.

Binary composites of chains are identified with chains by
:func:`flatten_iso`, which is how the associator and the unitors of the
trivial groupoid are realized; :func:`whisker` uses the engine's horizontal
composition with identity spans and then flattens.
"""

from __future__ import annotations

from typing import Callable, Sequence

from ..groupoid import Groupoid
from .profunctor import (
    Composite,
    EngineTypeError,
    Profunctor,
    Protransformation,
    cached,
    compose_all,
    compose_horizontal,
    compose_vertical,
    dagger,
    identity_profunctor,
    identity_span,
    is_unit,
)


class Chain(Profunctor):
    kind = "chain"


def _strip(wires: Sequence[Profunctor]) -> tuple[Profunctor, ...]:
    return tuple(w for w in wires if not is_unit(w))


def _canonical(wires, objs, elems):
    """Gauge-fix internal regions from left to right."""
    elems = list(elems)
    for i in range(len(wires) - 1):
        w, nxt = wires[i], wires[i + 1]
        o = objs[i + 1]
        grp = w.target.aut(o)
        R = w.right[(objs[i], o)]
        best = min(range(grp.order), key=lambda f: R[f][elems[i]])
        if best != grp.identity:
            elems[i] = R[best][elems[i]]
            elems[i + 1] = nxt.left[(o, objs[i + 2])][grp.inv(best)][elems[i + 1]]
    return tuple(elems)


def compose_chain(wires: Sequence[Profunctor], endpoint: Groupoid | None = None) -> Profunctor:
    """Flat composite of ``wires``; the empty chain is the point ``1_1``."""
    wires = _strip(wires)
    if not wires:
        return identity_profunctor(Groupoid.trivial() if endpoint is None else endpoint)
    for w1, w2 in zip(wires, wires[1:]):
        if w1.target.key != w2.source.key:
            raise EngineTypeError(f"chain endpoints do not match between {w1.name} and {w2.name}")
    key = ("chain",) + tuple(w.key for w in wires)
    return cached(key, lambda: _build_chain(wires, key))


def _build_chain(wires, key) -> Chain:
    k = len(wires)
    src, tgt = wires[0].source, wires[-1].target
    # partial tuples: (objs, elems) with every element but the last canonical
    partial = [((a,), ()) for a in src.objects]
    for i, w in enumerate(wires):
        nxt = []
        last = i == k - 1
        for objs, elems in partial:
            a = objs[-1]
            for (aa, b) in w.elements:
                if aa != a:
                    continue
                n = len(w.elements[(aa, b)])
                if last:
                    choices = range(n)
                else:
                    R = w.right[(aa, b)]
                    grp = w.target.aut(b)
                    choices = [x for x in range(n) if all(R[f][x] >= x for f in range(grp.order))]
                for x in choices:
                    nxt.append((objs + (b,), elems + (x,)))
        partial = nxt
    elements: dict = {}
    for objs, elems in partial:
        elements.setdefault((objs[0], objs[-1]), []).append((objs, elems))
    elements = {blk: sorted(v) for blk, v in elements.items()}
    index = {blk: {lab: n for n, lab in enumerate(v)} for blk, v in elements.items()}
    left, right = {}, {}
    for blk, labs in elements.items():
        a, c = blk
        ga, gc = src.aut(a), tgt.aut(c)
        idx = index[blk]
        lt = []
        for f in range(ga.order):
            row = []
            for objs, elems in labs:
                e = list(elems)
                e[0] = wires[0].left[(objs[0], objs[1])][f][e[0]]
                row.append(idx[(objs, _canonical(wires, objs, e))])
            lt.append(row)
        rt = []
        for h in range(gc.order):
            row = []
            for objs, elems in labs:
                e = list(elems)
                e[-1] = wires[-1].right[(objs[-2], objs[-1])][h][e[-1]]
                row.append(idx[(objs, tuple(e))])
            rt.append(row)
        left[blk], right[blk] = lt, rt
    ch = Chain.from_tables(src, tgt, elements, left, right, key=key,
                           name="[" + ",".join(w.name for w in wires) + "]", check=True)
    ch.wires = tuple(wires)
    return ch


def wires_of(p: Profunctor) -> tuple[Profunctor, ...]:
    """Leaf wires of a (possibly nested) composite."""
    if is_unit(p):
        return ()
    if isinstance(p, Chain):
        return p.wires
    if isinstance(p, Composite):
        return wires_of(p.first) + wires_of(p.second)
    return (p,)


def flat_label(p: Profunctor, blk, n: int):
    """(objects, elements) of element ``n`` of ``p[blk]`` read through all nesting."""
    if is_unit(p):
        return (blk[0],), ()
    if isinstance(p, Chain):
        return p.elements[blk][n]
    if isinstance(p, Composite):
        a, c = blk
        b, i, j = p.elements[blk][n]
        o1, e1 = flat_label(p.first, (a, b), i)
        o2, e2 = flat_label(p.second, (b, c), j)
        return o1 + o2[1:], e1 + e2
    return blk, (n,)


def flatten_iso(p: Profunctor, wire_maps: dict | None = None, target_wires=None) -> Protransformation:
    """Isomorphism from a nested composite ``p`` onto the flat chain of its wires.

    ``wire_maps`` optionally replaces leaf wire ``i`` by another wire through an
    element bijection ``fn(block, index) -> index``: ``{i: (new_wire, fn)}``.
    """
    wires = list(wires_of(p))
    maps = wire_maps or {}
    for i, (w, _) in maps.items():
        wires[i] = w
    if target_wires is not None:
        wires = list(target_wires)
    tgt = compose_chain(wires, endpoint=p.source)
    tgt_wires = wires_of(tgt)

    def fn(blk, n):
        objs, elems = flat_label(p, blk, n)
        if maps:
            elems = list(elems)
            for i, (_, f) in maps.items():
                elems[i] = f((objs[i], objs[i + 1]), elems[i])
        if not tgt_wires:
            return 0
        return tgt.index[blk][(objs, _canonical(tgt_wires, objs, elems))]

    return _iso(p, tgt, fn)


def _iso(p, q, fn) -> Protransformation:
    vals = {}
    for blk, labs in p.elements.items():
        vals[blk] = {(i, fn(blk, i)): 1 for i in range(len(labs))}
    return Protransformation(p, q, vals, check=True)


def chain_span(sigma: Protransformation, source_maps=None, target_maps=None) -> Protransformation:
    """Transport a span between nested composites to one between flat chains."""
    a = flatten_iso(sigma.source, source_maps)
    b = flatten_iso(sigma.target, target_maps)
    return compose_all(dagger(a), sigma, b)


def whisker(sigma: Protransformation, left: Sequence[Profunctor], right: Sequence[Profunctor]) -> Protransformation:
    """``1_left ; sigma ; 1_right`` on flat chains."""
    left, right = _strip(left), _strip(right)
    src_w = left + wires_of(sigma.source) + right
    tgt_w = left + wires_of(sigma.target) + right
    span = sigma
    if left:
        span = compose_horizontal(identity_span(compose_chain(left)), span)
    if right:
        span = compose_horizontal(span, identity_span(compose_chain(right)))
    parts = []
    a = flatten_iso(span.source, target_wires=src_w)
    if a.source.key != a.target.key:
        parts.append(dagger(a))
    parts.append(span)
    b = flatten_iso(span.target, target_wires=tgt_w)
    if b.source.key != b.target.key:
        parts.append(b)
    return compose_all(*parts)


class Diagram:
    """A stack of layers on flat chains, composed bottom to top."""

    def __init__(self, wires: Sequence[Profunctor], endpoint: Groupoid | None = None):
        self.wires = list(_strip(wires))
        self.endpoint = endpoint
        self.start = compose_chain(self.wires, endpoint)
        self.span = identity_span(self.start)

    def apply(self, pos: int, gen: Protransformation) -> "Diagram":
        """Replace ``wires[pos : pos+k]`` by applying ``gen`` there."""
        src = list(wires_of(gen.source))
        k = len(src)
        here = self.wires[pos:pos + k]
        if [w.key for w in here] != [w.key for w in src]:
            raise EngineTypeError(
                f"layer expects {[w.name for w in src]} at {pos}, found {[w.name for w in here]}"
            )
        layer = whisker(gen, self.wires[:pos], self.wires[pos + k:])
        self.span = compose_vertical(self.span, layer)
        self.wires = self.wires[:pos] + list(wires_of(gen.target)) + self.wires[pos + k:]
        return self

    def insert(self, pos: int, gen: Protransformation) -> "Diagram":
        """Apply a generator whose source is the empty chain at position ``pos``."""
        return self.apply(pos, gen)


def single(w: Profunctor) -> Profunctor:
    return compose_chain([w])


def between(src_wires, tgt_wires, fn: Callable, check: bool = True) -> Protransformation:
    """Span between two flat chains from a function on labels.

    ``fn(blk, (objs, elems))`` returns a dict ``{(objs', elems'): value}``; the
    target labels are canonicalized.
    """
    src = compose_chain(src_wires)
    tgt = compose_chain(tgt_wires, endpoint=src.source)
    tw = wires_of(tgt)
    vals = {}
    for blk, labs in src.elements.items():
        e = {}
        for n in range(len(labs)):
            for (objs, elems), v in fn(blk, flat_label(src, blk, n)).items():
                if not v:
                    continue
                key = (objs, _canonical(tw, objs, elems)) if tw else ((blk[0],), ())
                if not tw:
                    m = 0
                else:
                    m = tgt.index[blk][key]
                e[(n, m)] = e.get((n, m), 0) + v
        if e:
            vals[blk] = e
    return Protransformation(src, tgt, vals, check=check)
