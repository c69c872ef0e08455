"""Generators of the graphical calculus as spans between flat chains.

Wires used for a groudit ``G`` with dit ``D`` (the discrete groupoid on Ob G):

* ``L^G: 1 -/-> G`` and ``R^G: G -/-> 1``, the two walls of a groudit strip;
* ``L^D`` and ``R^D``, the walls of a dit strip;
* ``S: D -/-> G``, the interface between a classical (yellow) region on the
  left and a groudit (blue) region on the right, and its adjoint ``S*``.

A groudit system is the chain ``[L^G, R^G]``; its class ``(x, y)`` is the
morphism ``x y``.  A dit system is ``[L^D, R^D]``; its value is the object of
the enclosed region.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from ..biunitary import Biunitary
from ..groupoid import Groudit, Groupoid, Morphism
from .chain import Diagram, between, chain_span
from .profunctor import (
    Profunctor,
    Protransformation,
    adjoint,
    boundary_left,
    boundary_right,
    cap,
    compose_all,
    cup,
    dagger,
    left_unitor,
    measurement_profunctor,
    right_unitor,
)


def dit_groupoid(g: Groupoid) -> Groupoid:
    return Groupoid.discrete(g.n_objects)


@dataclass(frozen=True)
class Wires:
    """The wire profunctors attached to one groupoid."""

    G: Groupoid
    D: Groupoid
    L: Profunctor
    R: Profunctor
    LD: Profunctor
    RD: Profunctor
    S: Profunctor
    Sa: Profunctor

    @property
    def groudit(self) -> list[Profunctor]:
        return [self.L, self.R]

    @property
    def dit(self) -> list[Profunctor]:
        return [self.LD, self.RD]


@lru_cache(maxsize=None)
def wires_for(g: Groupoid) -> Wires:
    d = dit_groupoid(g)
    s = measurement_profunctor(g)
    return Wires(g, d, boundary_left(g), boundary_right(g), boundary_left(d), boundary_right(d), s, adjoint(s))


# ---------------------------------------------------------------------------
# structural layers


def adjoint_iso(p: Profunctor) -> Protransformation:
    """``[P*] => [Q]`` for boundary wires, x |-> x^{-1}: L* = R and R* = L."""
    if p.key[0] == "L":
        g, other, pos = p.target, boundary_right(p.target), 0
    else:
        g, other, pos = p.source, boundary_left(p.source), 1

    def fn(blk, lab):
        objs, (x,) = lab
        return {(objs, (g.aut(objs[pos]).inv(x),)): 1}

    return between([adjoint(p)], [other], fn)


def unit_in(w: Profunctor, side: str = "right") -> Protransformation:
    """``[w] => [w, 1]`` (or ``[1, w]``): inverse unitor as a chain layer."""
    if side == "right":
        return dagger(chain_span(right_unitor(w)))
    return dagger(chain_span(left_unitor(w)))


def unit_out(w: Profunctor, side: str = "left") -> Protransformation:
    """``[1, w] => [w]`` (or ``[w, 1] => [w]``)."""
    if side == "left":
        return chain_span(left_unitor(w))
    return chain_span(right_unitor(w))


def cup_layer(p: Profunctor) -> Protransformation:
    return chain_span(cup(p))


def cap_layer(p: Profunctor) -> Protransformation:
    return chain_span(cap(p))


def exchange(first: list[Profunctor], second: list[Profunctor]) -> Protransformation:
    """Swap two adjacent closed strips ``first + second => second + first``.

    Both lists compose to ``1 -/-> 1``, so the junction region is the trivial
    groupoid and the flat composite is a plain product of sets.
    """
    k1 = len(first)

    def fn(blk, lab):
        objs, elems = lab
        o1, o2 = objs[:k1 + 1], objs[k1:]
        e1, e2 = elems[:k1], elems[k1:]
        return {(o2 + o1[1:], e2 + e1): 1}

    return between(list(first) + list(second), list(second) + list(first), fn)


# ---------------------------------------------------------------------------
# rotation


def rotate(sigma: Protransformation) -> Protransformation:
    """Quarter turn of a crossing ``[A1, A2] => [B1, B2]`` on ``1 -/-> 1``.

    The result is ``[B1*, A1] => [B2, A2*]``: the top-left leg is bent down
    with a cup, the bottom-right leg is bent up, and the unitors tidy up.
    """
    from .chain import wires_of

    a1, a2 = wires_of(sigma.source)
    b1, b2 = wires_of(sigma.target)
    mid = a1.target
    d = Diagram([adjoint(b1), a1])
    d.apply(1, unit_in(a1, "right"))
    d.apply(2, cup_layer(adjoint(a2)))
    d.apply(1, sigma)
    d.apply(0, cap_layer(adjoint(b1)))
    d.apply(0, unit_out(b2, "left"))
    assert mid.key == b1.target.key
    return d.span


def rotate_boundary(sigma: Protransformation) -> Protransformation:
    """Quarter turn of a span on ``[L, R]``, read back on ``[R, L]`` via L* = R, R* = L."""
    from .chain import wires_of

    L, R = wires_of(sigma.source)
    rot = rotate(sigma)                                   # [L*, L] => [R, R*]
    pre = Diagram([R, L]).apply(0, dagger(adjoint_iso(L))).span
    post = Diagram([R, adjoint(R)]).apply(1, adjoint_iso(R)).span
    return compose_all(pre, rot, post)


# ---------------------------------------------------------------------------
# groudit crossings


def decode_groudit(g: Groupoid, objs, elems) -> Morphism:
    """Morphism held by a ``[L, R]`` segment with region ``objs[1]``."""
    a = objs[1]
    return Morphism(a, g.aut(a).mul(elems[0], elems[1]))


def encode_groudit(g: Groupoid, m: Morphism):
    """Canonical ``[L, R]`` label of a morphism (x = identity, y = m)."""
    a, x = m
    return ((0, a, 0), (g.aut(a).identity, x))


def biunitary_span(f: Biunitary) -> Protransformation:
    """The crossing ``[L, R] => [L, R]``: the class of ``g`` goes to ``F(g)``."""
    g = f.groupoid
    w = wires_for(g)

    def fn(blk, lab):
        objs, elems = lab
        return {encode_groudit(g, f(decode_groudit(g, objs, elems))): 1}

    return between(w.groudit, w.groudit, fn)


def morphism_span(g: Groupoid, fn_m) -> Protransformation:
    """``[L, R] => [L, R]`` from a map on morphisms, ``fn_m(m) -> {m': k}``."""
    w = wires_for(g)

    def fn(blk, lab):
        objs, elems = lab
        return {encode_groudit(g, m2): k for m2, k in fn_m(decode_groudit(g, objs, elems)).items()}

    return between(w.groudit, w.groudit, fn)


def tick_span(f: Biunitary) -> Protransformation:
    """``[R, L] => [R, L]``: the crossing reflected across its anti-diagonal.

    The reflection is the quarter turn of the left-right mirror image.
    """
    return rotate_boundary(mirror(biunitary_span(f)))


def half_turn(sigma: Protransformation) -> Protransformation:
    """Two quarter turns of a span on ``[L, R]``, read back on ``[L, R]``."""
    from .chain import wires_of

    L, R = wires_of(sigma.source)
    rot = rotate(rotate(sigma))                           # [R*, L*] => [R*, L*]
    back = Diagram([adjoint(R), adjoint(L)])
    back.apply(0, adjoint_iso(R)).apply(1, adjoint_iso(L))
    return compose_all(dagger(back.span), rot, back.span)


def mirror(sigma: Protransformation) -> Protransformation:
    """Left-right reflection of a span on ``[L, R]``: half turn, then dagger."""
    return dagger(half_turn(sigma))


# ---------------------------------------------------------------------------
# measurement


@dataclass(frozen=True)
class Measurement:
    """Yellow/blue interface data for one groudit type.

    * ``isospan``: ``[L^G] => [L^D, S]``, x |-> (point, x); unitary.
    * ``isospan_right``: ``[R^G] => [S*, R^D]``, y |-> (y^{-1}, point); unitary.
    * ``vertex``: ``[L^G, S*] => [L^D]``, every class to the point.
    * ``vertex_right``: ``[S, R^G] => [R^D]``, every class to the point.
    """

    wires: Wires
    isospan: Protransformation
    isospan_right: Protransformation
    vertex: Protransformation
    vertex_right: Protransformation

    @property
    def S(self) -> Profunctor:
        return self.wires.S


@lru_cache(maxsize=None)
def measurement_span(g: Groupoid | Groudit) -> Measurement:
    if isinstance(g, Groudit):
        g = g.groupoid
    w = wires_for(g)

    def iso(blk, lab):
        objs, (x,) = lab
        a = objs[1]
        return {((0, a, a), (0, x)): 1}

    def iso_r(blk, lab):
        objs, (y,) = lab
        a = objs[0]
        return {((a, a, 0), (g.aut(a).inv(y), 0)): 1}

    def collapse(blk, lab):
        objs, _ = lab
        return {((objs[0], objs[-1]), (0,)): 1}

    return Measurement(
        w,
        between([w.L], [w.LD, w.S], iso),
        between([w.R], [w.Sa, w.RD], iso_r),
        between([w.L, w.Sa], [w.LD], collapse),
        between([w.S, w.R], [w.RD], collapse),
    )


def write_span(g: Groupoid) -> Protransformation:
    """``[L^D, R^D] => [L^G, R^G]``: a dit becomes the sum over its object."""
    m = measurement_span(g)
    w = m.wires
    d = Diagram(w.dit)
    d.apply(0, dagger(m.vertex))            # [L^G, S*, R^D]
    d.apply(1, dagger(m.isospan_right))     # [L^G, R^G]
    return d.span


def read_span(g: Groupoid) -> Protransformation:
    return dagger(write_span(g))


def init_span(g: Groupoid) -> Protransformation:
    """``[] => [L, R]``: the cup on ``R``."""
    w = wires_for(g)
    d = Diagram([])
    d.apply(0, cup_layer(w.R))              # [R*, R]
    d.apply(0, adjoint_iso(w.R))            # [L, R]
    return d.span


def erase_groudit_span(g: Groupoid) -> Protransformation:
    return dagger(init_span(g))


def rand_span(g: Groupoid) -> Protransformation:
    """``[] => [L^D, R^D]``: the classical cup."""
    w = wires_for(g)
    d = Diagram([])
    d.apply(0, cup_layer(w.RD))
    d.apply(0, adjoint_iso(w.RD))
    return d.span


def erase_span(g: Groupoid) -> Protransformation:
    """``[L^D, R^D] => []``: the classical cap."""
    w = wires_for(g)
    d = Diagram(w.dit)
    d.apply(1, dagger(adjoint_iso(w.LD)))   # [L^D, L^D*]
    d.apply(0, cap_layer(w.LD))
    return d.span


def split_groudit_span(g: Groupoid) -> Protransformation:
    """``[L, R] => [L, R, L, R]``: a white cup inside the blue region."""
    w = wires_for(g)
    d = Diagram(w.groudit)
    d.apply(0, unit_in(w.L, "right"))       # [L, 1, R]
    d.apply(1, cup_layer(w.L))              # [L, L*, L, R]
    d.apply(1, adjoint_iso(w.L))            # [L, R, L, R]
    return d.span


def merge_groudit_span(g: Groupoid) -> Protransformation:
    return dagger(split_groudit_span(g))


def copy_dit_span(g: Groupoid) -> Protransformation:
    """``[L^D, R^D] => [L^D, R^D, L^D, R^D]``: a white cup in the yellow region."""
    w = wires_for(g)
    d = Diagram(w.dit)
    d.apply(0, unit_in(w.LD, "right"))
    d.apply(1, cup_layer(w.LD))
    d.apply(1, adjoint_iso(w.LD))
    return d.span


def merge_dit_span(g: Groupoid) -> Protransformation:
    return dagger(copy_dit_span(g))
