"""Random small groupoids, free profunctors and equivariant spans."""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import permutations

from ..groupoid import Group, Groupoid
from .profunctor import Profunctor, Protransformation


def random_groupoid(rng: random.Random, max_objects: int = 3, max_order: int = 3) -> Groupoid:
    n = rng.randint(1, max_objects)
    return Groupoid(tuple(Group.cyclic(rng.randint(1, max_order)) for _ in range(n)))


def group_isomorphisms(g: Group, h: Group) -> list[tuple[int, ...]]:
    """All isomorphisms ``h -> g`` as tuples ``phi[y] = x``."""
    if g.order != h.order:
        return []
    out = []
    for perm in permutations(range(g.order)):
        if all(perm[h.mul(x, y)] == g.mul(perm[x], perm[y]) for x in range(h.order) for y in range(h.order)):
            out.append(perm)
    return out


def random_profunctor(rng: random.Random, A: Groupoid, B: Groupoid, max_orbits: int = 2,
                      empty_prob: float = 0.3) -> Profunctor:
    """A free profunctor built from transitive pieces.

    A piece over ``(a, b)`` is either the product orbit ``Aut a x Aut b`` or,
    when the two groups are isomorphic, a twisted diagonal ``Aut a`` with
    ``f.x.g = f x phi(g)``.  Both actions are free on both kinds.
    """
    elements, pieces = {}, {}
    for a in A.objects:
        for b in B.objects:
            if rng.random() < empty_prob:
                continue
            ga, gb = A.aut(a), B.aut(b)
            isos = group_isomorphisms(ga, gb)
            labs = []
            for k in range(rng.randint(1, max_orbits)):
                if isos and rng.random() < 0.5:
                    phi = rng.choice(isos)
                    pieces[(a, b, k)] = ("d", phi)
                    labs += [("d", k, x) for x in range(ga.order)]
                else:
                    pieces[(a, b, k)] = ("p", None)
                    labs += [("p", k, x, y) for x in range(ga.order) for y in range(gb.order)]
            elements[(a, b)] = labs

    def left(blk, f, lab):
        ga = A.aut(blk[0])
        if lab[0] == "p":
            return ("p", lab[1], ga.mul(f, lab[2]), lab[3])
        return ("d", lab[1], ga.mul(f, lab[2]))

    def right(blk, g, lab):
        ga, gb = A.aut(blk[0]), B.aut(blk[1])
        if lab[0] == "p":
            return ("p", lab[1], lab[2], gb.mul(lab[3], g))
        phi = pieces[(blk[0], blk[1], lab[1])][1]
        return ("d", lab[1], ga.mul(lab[2], phi[g]))

    return Profunctor(A, B, elements, left, right, name="P")


def random_span(rng: random.Random, P: Profunctor, Q: Profunctor, density: float = 0.4,
                max_value: int = 3) -> Protransformation:
    """Random values constant on the diagonal orbits of ``P x Q`` in each block."""
    vals = {}
    for blk in P.elements:
        if blk not in Q.elements:
            continue
        a, b = blk
        ga, gb = P.source.aut(a), P.target.aut(b)
        n, m = P.size(blk), Q.size(blk)
        seen, e = set(), {}
        for i in range(n):
            for j in range(m):
                if (i, j) in seen:
                    continue
                orbit = set()
                for f in range(ga.order):
                    for g in range(gb.order):
                        orbit.add((P.right[blk][g][P.left[blk][f][i]], Q.right[blk][g][Q.left[blk][f][j]]))
                seen |= orbit
                if rng.random() < density:
                    v = rng.randint(1, max_value)
                    for ij in orbit:
                        e[ij] = v
        if e:
            vals[blk] = e
    return Protransformation(P, Q, vals, check=True)


@dataclass(frozen=True)
class LawInstance:
    """Four composable profunctors and two span pairs, for the law suite."""

    P: Profunctor
    Q: Profunctor
    R: Profunctor
    S: Profunctor
    s1: Protransformation
    s2: Protransformation
    t1: Protransformation
    t2: Protransformation


def random_instance(seed: int) -> LawInstance:
    rng = random.Random(seed)
    A, B, C, D, E = (random_groupoid(rng) for _ in range(5))
    P, Q = random_profunctor(rng, A, B), random_profunctor(rng, B, C)
    R, S = random_profunctor(rng, C, D), random_profunctor(rng, D, E)
    P2, Q2 = random_profunctor(rng, A, B), random_profunctor(rng, B, C)
    return LawInstance(P, Q, R, S, random_span(rng, P, P2), random_span(rng, P2, P),
                       random_span(rng, Q, Q2), random_span(rng, Q2, Q))
