"""Free profunctors between finite skeletal groupoids and the N-valued spans
between them.

A profunctor ``P: A -/-> B`` has a finite carrier ``P[(a, b)]`` for every
source object ``a`` and target object ``b``.  ``Aut_A(a)`` acts on the left and
``Aut_B(b)`` on the right; both actions are free.  Elements of a carrier are
referred to by their position in the sorted list of labels, so the label order
is the canonical total order used for class representatives.

Composition is written in diagram order: ``compose_horizontal_profunctors(P, Q)``
is "first P, then Q", the profunctor written ``Q∘P`` in string-diagram texts.
"""

from __future__ import annotations

import itertools
from typing import Callable, Hashable, Iterable, Mapping

from ..groupoid import Groupoid

Block = tuple[int, int]

_CACHE: dict[Hashable, "Profunctor"] = {}
_fresh = itertools.count()


class EngineTypeError(TypeError):
    """Endpoints or middle profunctors do not match."""


class FreenessError(ValueError):
    """An action is not free, or violates the action laws."""


class EquivarianceError(ValueError):
    """A span is not invariant under the two-sided action."""


def fresh_key(tag: str = "anon") -> tuple:
    return (tag, next(_fresh))


def cached(key: Hashable, build: Callable[[], "Profunctor"]) -> "Profunctor":
    p = _CACHE.get(key)
    if p is None:
        p = build()
        _CACHE[key] = p
    return p


class Profunctor:
    """Finite free bimodule ``source -/-> target``.

    ``elements[(a, b)]`` is the sorted tuple of labels.  ``left[(a, b)][f][i]``
    is the index of ``f.x_i`` and ``right[(a, b)][g][i]`` that of ``x_i.g``.
    Only nonempty carriers are stored.
    """

    kind = "primitive"

    def __init__(
        self,
        source: Groupoid,
        target: Groupoid,
        elements: Mapping[Block, Iterable[Hashable]],
        left_fn: Callable[[Block, int, Hashable], Hashable] | None,
        right_fn: Callable[[Block, int, Hashable], Hashable] | None,
        key: Hashable | None = None,
        name: str = "P",
        check: bool = True,
    ):
        self.source = source
        self.target = target
        self.key = key if key is not None else fresh_key(name)
        self.name = name
        self.elements: dict[Block, tuple] = {}
        self.index: dict[Block, dict] = {}
        for blk, labels in elements.items():
            labels = tuple(sorted(set(labels)))
            if labels:
                self.elements[blk] = labels
                self.index[blk] = {lab: i for i, lab in enumerate(labels)}
        self.left: dict[Block, list[list[int]]] = {}
        self.right: dict[Block, list[list[int]]] = {}
        for blk, labels in self.elements.items():
            a, b = blk
            idx = self.index[blk]
            if left_fn is None:
                self.left[blk] = [list(range(len(labels)))] * source.order(a)
            else:
                self.left[blk] = [[idx[left_fn(blk, f, x)] for x in labels] for f in range(source.order(a))]
            if right_fn is None:
                self.right[blk] = [list(range(len(labels)))] * target.order(b)
            else:
                self.right[blk] = [[idx[right_fn(blk, g, x)] for x in labels] for g in range(target.order(b))]
        if check:
            self.validate()

    @classmethod
    def from_tables(cls, source, target, elements, left, right, key=None, name="P", check=True):
        """Build directly from index tables (used by composites)."""
        self = cls.__new__(cls)
        self.source, self.target = source, target
        self.key = key if key is not None else fresh_key(name)
        self.name = name
        self.elements = {blk: tuple(v) for blk, v in elements.items() if v}
        self.index = {blk: {lab: i for i, lab in enumerate(v)} for blk, v in self.elements.items()}
        self.left = {blk: left[blk] for blk in self.elements}
        self.right = {blk: right[blk] for blk in self.elements}
        if check:
            self.validate()
        return self

    # structure ---------------------------------------------------------
    def blocks(self) -> list[Block]:
        return sorted(self.elements)

    def carrier(self, a: int, b: int) -> tuple:
        return self.elements.get((a, b), ())

    def size(self, blk: Block) -> int:
        return len(self.elements.get(blk, ()))

    def total_size(self) -> int:
        return sum(len(v) for v in self.elements.values())

    def act_left(self, blk: Block, f: int, i: int) -> int:
        return self.left[blk][f][i]

    def act_right(self, blk: Block, g: int, i: int) -> int:
        return self.right[blk][g][i]

    def validate(self) -> None:
        """Action laws, commutation of the two actions, and freeness."""
        for blk, labels in self.elements.items():
            a, b = blk
            ga, gb = self.source.aut(a), self.target.aut(b)
            n = len(labels)
            L, R = self.left[blk], self.right[blk]
            for f in range(ga.order):
                if sorted(L[f]) != list(range(n)):
                    raise FreenessError(f"left action of {f} on {blk} is not a bijection")
            for g in range(gb.order):
                if sorted(R[g]) != list(range(n)):
                    raise FreenessError(f"right action of {g} on {blk} is not a bijection")
            if L[ga.identity] != list(range(n)) or R[gb.identity] != list(range(n)):
                raise FreenessError(f"identity acts nontrivially on {blk}")
            for f1 in range(ga.order):
                for f2 in range(ga.order):
                    prod = L[ga.mul(f1, f2)]
                    if any(prod[i] != L[f1][L[f2][i]] for i in range(n)):
                        raise FreenessError(f"left action on {blk} is not a group action")
            for g1 in range(gb.order):
                for g2 in range(gb.order):
                    prod = R[gb.mul(g1, g2)]
                    if any(prod[i] != R[g2][R[g1][i]] for i in range(n)):
                        raise FreenessError(f"right action on {blk} is not a group action")
            for f in range(ga.order):
                for g in range(gb.order):
                    if any(L[f][R[g][i]] != R[g][L[f][i]] for i in range(n)):
                        raise FreenessError(f"left and right actions on {blk} do not commute")
            for f in range(ga.order):
                if f != ga.identity and any(L[f][i] == i for i in range(n)):
                    raise FreenessError(f"Aut({a}) does not act freely on the left of {blk}")
            for g in range(gb.order):
                if g != gb.identity and any(R[g][i] == i for i in range(n)):
                    raise FreenessError(f"Aut({b}) does not act freely on the right of {blk}")

    def same_as(self, other: "Profunctor") -> bool:
        return self.key == other.key

    def __repr__(self) -> str:
        return f"<{self.name}: {self.total_size()} elements over {len(self.elements)} blocks>"


# ---------------------------------------------------------------------------
# basic profunctors


def identity_profunctor(g: Groupoid) -> Profunctor:
    """Hom sets of a skeletal groupoid: Aut(a) on the diagonal."""

    def build():
        els = {(a, a): range(g.order(a)) for a in g.objects}
        return Profunctor(
            g, g, els,
            lambda blk, f, x: g.aut(blk[0]).mul(f, x),
            lambda blk, h, x: g.aut(blk[1]).mul(x, h),
            key=("id", g.key), name="1",
        )

    return cached(("id", g.key), build)


def is_unit(p: Profunctor) -> bool:
    """The identity on the one-object trivial groupoid (a single point)."""
    return p.key == ("id", Groupoid.trivial().key)


def boundary_left(g: Groupoid) -> Profunctor:
    """``L: 1 -/-> G`` with carrier Aut(a) acted on by right multiplication."""
    one = Groupoid.trivial()

    def build():
        els = {(0, a): range(g.order(a)) for a in g.objects}
        return Profunctor(one, g, els, None, lambda blk, h, x: g.aut(blk[1]).mul(x, h),
                          key=("L", g.key), name="L")

    return cached(("L", g.key), build)


def boundary_right(g: Groupoid) -> Profunctor:
    """``R: G -/-> 1`` with carrier Aut(a) acted on by left multiplication."""
    one = Groupoid.trivial()

    def build():
        els = {(a, 0): range(g.order(a)) for a in g.objects}
        return Profunctor(g, one, els, lambda blk, f, x: g.aut(blk[0]).mul(f, x), None,
                          key=("R", g.key), name="R")

    return cached(("R", g.key), build)


def measurement_profunctor(g: Groupoid) -> Profunctor:
    """``S: D -/-> G`` for the discrete groupoid D on Ob(G): S[(b, g)] = Aut(g) if b = g."""
    d = Groupoid.discrete(g.n_objects)

    def build():
        els = {(a, a): range(g.order(a)) for a in g.objects}
        return Profunctor(d, g, els, None, lambda blk, h, x: g.aut(blk[1]).mul(x, h),
                          key=("S", g.key), name="S")

    return cached(("S", g.key), build)


def adjoint(p: Profunctor) -> Profunctor:
    """``P*``: same sets, action (f, x, g) -> g^{-1}.x.f^{-1}.  ``P**`` is ``P``."""
    back = getattr(p, "_adjoint_of", None)
    if back is not None:
        return back

    def build():
        els = {(b, a): p.elements[(a, b)] for (a, b) in p.elements}
        left, right = {}, {}
        for (a, b) in p.elements:
            gb, ga = p.target.aut(b), p.source.aut(a)
            left[(b, a)] = [p.right[(a, b)][gb.inv(h)] for h in range(gb.order)]
            right[(b, a)] = [p.left[(a, b)][ga.inv(f)] for f in range(ga.order)]
        q = Profunctor.from_tables(p.target, p.source, els, left, right,
                                   key=("adj", p.key), name=p.name + "*", check=False)
        q._adjoint_of = p
        return q

    return cached(("adj", p.key), build)


# ---------------------------------------------------------------------------
# horizontal composite of profunctors


class Composite(Profunctor):
    """``first`` then ``second``: pairs (x, y) over a middle object b modulo
    (x.f, y) ~ (x, f.y).  Labels are ``(b, i, j)`` for the minimal pair in the
    class; ``orbit`` records the class size."""

    kind = "composite"

    def class_of(self, blk: Block, b: int, i: int, j: int) -> int:
        return self.pair_class[blk][(b, i, j)]


def compose_horizontal_profunctors(p: Profunctor, q: Profunctor) -> Composite:
    if p.target.key != q.source.key:
        raise EngineTypeError("endpoint mismatch in horizontal composition")
    key = ("comp", p.key, q.key)

    def build():
        mid = p.target
        by_a: dict[int, list[int]] = {}
        for (a, b) in p.elements:
            by_a.setdefault(a, []).append(b)
        by_b: dict[int, list[int]] = {}
        for (b, c) in q.elements:
            by_b.setdefault(b, []).append(c)
        elements, pair_class, orbit = {}, {}, {}
        for a in sorted(by_a):
            for b in sorted(by_a[a]):
                for c in by_b.get(b, ()):
                    blk = (a, c)
                    pc = pair_class.setdefault(blk, {})
                    labs = elements.setdefault(blk, [])
                    gb = mid.aut(b)
                    Rp, Lq = p.right[(a, b)], q.left[(b, c)]
                    for i in range(len(p.elements[(a, b)])):
                        for j in range(len(q.elements[(b, c)])):
                            if (b, i, j) in pc:
                                continue
                            orb = {(Rp[f][i], Lq[gb.inv(f)][j]) for f in range(gb.order)}
                            rep = (b,) + min(orb)
                            labs.append(rep)
                            for (x, y) in orb:
                                pc[(b, x, y)] = rep
                            orbit.setdefault(blk, {})[rep] = len(orb)
        elements = {blk: sorted(v) for blk, v in elements.items() if v}
        index = {blk: {lab: n for n, lab in enumerate(v)} for blk, v in elements.items()}
        pair_idx = {blk: {pr: index[blk][rep] for pr, rep in pc.items()} for blk, pc in pair_class.items()
                    if blk in elements}
        left, right = {}, {}
        for blk, labs in elements.items():
            a, c = blk
            ga, gc = p.source.aut(a), q.target.aut(c)
            pi = pair_idx[blk]
            left[blk] = [[pi[(b, p.left[(a, b)][f][i], j)] for (b, i, j) in labs] for f in range(ga.order)]
            right[blk] = [[pi[(b, i, q.right[(b, c)][h][j])] for (b, i, j) in labs] for h in range(gc.order)]
        comp = Composite.from_tables(p.source, q.target, elements, left, right, key=key,
                                     name=f"({p.name};{q.name})", check=True)
        comp.first, comp.second = p, q
        comp.pair_class = pair_idx
        comp.orbit = {blk: [orbit[blk][lab] for lab in labs] for blk, labs in elements.items()}
        return comp

    return cached(key, build)


# ---------------------------------------------------------------------------
# spans


class Protransformation:
    """N-valued equivariant span ``source => target``.

    ``values[(a, b)]`` maps ``(i, j)`` to a positive Python int, with ``i`` an
    index into ``source[(a, b)]`` and ``j`` into ``target[(a, b)]``.
    """

    def __init__(self, source: Profunctor, target: Profunctor,
                 values: Mapping[Block, Mapping[tuple[int, int], int]], check: bool = True):
        if source.source.key != target.source.key or source.target.key != target.target.key:
            raise EngineTypeError("span endpoints differ")
        self.source, self.target = source, target
        self.values: dict[Block, dict[tuple[int, int], int]] = {}
        for blk, entries in values.items():
            clean = {k: int(v) for k, v in entries.items() if v}
            if any(v < 0 for v in clean.values()):
                raise ValueError("span values must be natural numbers")
            if clean:
                if blk not in source.elements or blk not in target.elements:
                    raise EngineTypeError(f"span has entries on an empty block {blk}")
                self.values[blk] = clean
        if check:
            self.check_equivariance()

    def check_equivariance(self) -> None:
        P, Q = self.source, self.target
        for blk, entries in self.values.items():
            a, b = blk
            ga, gb = P.source.aut(a), P.target.aut(b)
            for f in range(ga.order):
                Lp, Lq = P.left[blk][f], Q.left[blk][f]
                for (i, j), v in entries.items():
                    if entries.get((Lp[i], Lq[j])) != v:
                        raise EquivarianceError(f"span is not left-equivariant on {blk}")
            for g in range(gb.order):
                Rp, Rq = P.right[blk][g], Q.right[blk][g]
                for (i, j), v in entries.items():
                    if entries.get((Rp[i], Rq[j])) != v:
                        raise EquivarianceError(f"span is not right-equivariant on {blk}")

    def get(self, blk: Block, i: int, j: int) -> int:
        return self.values.get(blk, {}).get((i, j), 0)

    def row(self, blk: Block, i: int) -> dict[int, int]:
        return {j: v for (ii, j), v in self.values.get(blk, {}).items() if ii == i}

    def rows(self) -> dict[Block, dict[int, dict[int, int]]]:
        out: dict[Block, dict[int, dict[int, int]]] = {}
        for blk, entries in self.values.items():
            r = out.setdefault(blk, {})
            for (i, j), v in entries.items():
                r.setdefault(i, {})[j] = v
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Protransformation):
            return NotImplemented
        return (self.source.key == other.source.key and self.target.key == other.target.key
                and self.values == other.values)

    __hash__ = None  # type: ignore[assignment]

    def scaled(self, k: int) -> "Protransformation":
        return Protransformation(self.source, self.target,
                                 {blk: {ij: v * k for ij, v in e.items()} for blk, e in self.values.items()},
                                 check=False)

    def nnz(self) -> int:
        return sum(len(e) for e in self.values.values())

    def dump(self) -> str:
        """Per-block matrices of N values, row-major, rows indexed by source elements."""
        lines = []
        for blk in sorted(set(self.source.elements) | set(self.target.elements)):
            n, m = self.source.size(blk), self.target.size(blk)
            lines.append(f"block {blk}: {n}x{m}")
            for i in range(n):
                lines.append(" ".join(str(self.get(blk, i, j)) for j in range(m)))
        return "\n".join(lines)

    def __repr__(self) -> str:
        return f"<span {self.source.name} => {self.target.name}, {self.nnz()} nonzero>"


def identity_span(p: Profunctor) -> Protransformation:
    return Protransformation(p, p, {blk: {(i, i): 1 for i in range(len(v))} for blk, v in p.elements.items()},
                             check=False)


def zero_span(p: Profunctor, q: Profunctor) -> Protransformation:
    return Protransformation(p, q, {}, check=False)


def iso_span(p: Profunctor, q: Profunctor, fn: Callable[[Block, int], int], check: bool = True) -> Protransformation:
    """Span of a bijection ``p -> q`` given on element indices block by block."""
    vals = {}
    for blk, labs in p.elements.items():
        vals[blk] = {(i, fn(blk, i)): 1 for i in range(len(labs))}
    return Protransformation(p, q, vals, check=check)


def compose_vertical(sigma: Protransformation, tau: Protransformation) -> Protransformation:
    """(tau sigma)(p, r) = sum_q sigma(p, q) tau(q, r)."""
    if sigma.target.key != tau.source.key:
        raise EngineTypeError("middle profunctors differ in vertical composition")
    trow = tau.rows()
    out: dict[Block, dict[tuple[int, int], int]] = {}
    for blk, entries in sigma.values.items():
        tb = trow.get(blk)
        if not tb:
            continue
        acc: dict[tuple[int, int], int] = {}
        for (i, j), v in entries.items():
            for k, w in tb.get(j, {}).items():
                acc[(i, k)] = acc.get((i, k), 0) + v * w
        if acc:
            out[blk] = acc
    return Protransformation(sigma.source, tau.target, out, check=False)


def compose_all(*spans: Protransformation) -> Protransformation:
    """Vertical composite in the order given (first span applied first)."""
    result = spans[0]
    for s in spans[1:]:
        result = compose_vertical(result, s)
    return result


def dagger(sigma: Protransformation) -> Protransformation:
    vals = {blk: {(j, i): v for (i, j), v in e.items()} for blk, e in sigma.values.items()}
    return Protransformation(sigma.target, sigma.source, vals, check=False)


def compose_horizontal(sigma: Protransformation, tau: Protransformation) -> Protransformation:
    """Orbit form: sum over (s~, t~) in the class of the target of sigma(s, s~) tau(t, t~).

    ``sigma: S => S'`` on ``A -/-> B`` and ``tau: T => T'`` on ``B -/-> C``; the
    result goes from ``S;T`` to ``S';T'``.
    """
    S, S2, T, T2 = sigma.source, sigma.target, tau.source, tau.target
    src = compose_horizontal_profunctors(S, T)
    tgt = compose_horizontal_profunctors(S2, T2)
    srows, trows = sigma.rows(), tau.rows()
    out: dict[Block, dict[tuple[int, int], int]] = {}
    for blk, labs in src.elements.items():
        a, c = blk
        tpc = tgt.pair_class.get(blk)
        if tpc is None:
            continue
        acc: dict[tuple[int, int], int] = {}
        for n, (b, i, j) in enumerate(labs):
            rs = srows.get((a, b), {}).get(i)
            rt = trows.get((b, c), {}).get(j)
            if not rs or not rt:
                continue
            for i2, v in rs.items():
                for j2, w in rt.items():
                    m = tpc[(b, i2, j2)]
                    acc[(n, m)] = acc.get((n, m), 0) + v * w
        if acc:
            out[blk] = acc
    return Protransformation(src, tgt, out, check=False)


def compose_horizontal_sum_form(sigma: Protransformation, tau: Protransformation,
                                reps: Callable | None = None) -> Protransformation:
    """Sum over the middle group: sum_f sigma(s, s'.f) tau(f.t, t').

    ``reps`` may pick alternative class representatives ``(blk, label) -> (b, i, j)``
    to exercise well-definedness.
    """
    S, S2, T, T2 = sigma.source, sigma.target, tau.source, tau.target
    src = compose_horizontal_profunctors(S, T)
    tgt = compose_horizontal_profunctors(S2, T2)
    mid = S.target
    out: dict[Block, dict[tuple[int, int], int]] = {}
    for blk in src.elements:
        if blk not in tgt.elements:
            continue
        a, c = blk
        acc = {}
        for n, lab in enumerate(src.elements[blk]):
            b, i, j = reps(src, blk, lab) if reps else lab
            for m, lab2 in enumerate(tgt.elements[blk]):
                b2, i2, j2 = reps(tgt, blk, lab2) if reps else lab2
                if b2 != b:
                    continue
                gb = mid.aut(b)
                total = 0
                for f in range(gb.order):
                    total += sigma.get((a, b), i, S2.right[(a, b)][f][i2]) * tau.get((b, c), T.left[(b, c)][f][j], j2)
                if total:
                    acc[(n, m)] = total
        if acc:
            out[blk] = acc
    return Protransformation(src, tgt, out, check=False)


def equal_up_to_scalar(x: Protransformation, y: Protransformation):
    """Return the positive rational k with x = k y, or None."""
    from fractions import Fraction

    if x.source.key != y.source.key or x.target.key != y.target.key:
        return None
    if set(x.values) != set(y.values):
        return None
    k = None
    for blk, e in x.values.items():
        f = y.values[blk]
        if set(e) != set(f):
            return None
        for ij, v in e.items():
            r = Fraction(v, f[ij])
            if k is None:
                k = r
            elif r != k:
                return None
    return k if k is not None else None


# ---------------------------------------------------------------------------
# dagger pivotal structure and coherence isomorphisms


def cap(p: Profunctor) -> Protransformation:
    """``P;P* => 1_A``: [p, p'], f  |->  delta(f^{-1}.p, p')."""
    A = p.source
    comp = compose_horizontal_profunctors(p, adjoint(p))
    one = identity_profunctor(A)
    vals = {}
    for blk, labs in comp.elements.items():
        a, a2 = blk
        if a != a2:
            continue
        ga = A.aut(a)
        e = {}
        for n, (b, i, j) in enumerate(labs):
            for f in range(ga.order):
                if p.left[(a, b)][ga.inv(f)][i] == j:
                    e[(n, f)] = 1
        if e:
            vals[blk] = e
    return Protransformation(comp, one, vals)


def cup(p: Profunctor) -> Protransformation:
    """``1_B => P*;P``: f, [p', p]  |->  delta(p', p.f^{-1})."""
    B = p.target
    comp = compose_horizontal_profunctors(adjoint(p), p)
    one = identity_profunctor(B)
    vals = {}
    for blk, labs in comp.elements.items():
        b, b2 = blk
        if b != b2:
            continue
        gb = B.aut(b)
        e = {}
        for n, (a, j, i) in enumerate(labs):
            for f in range(gb.order):
                if p.right[(a, b)][gb.inv(f)][i] == j:
                    e[(f, n)] = 1
        if e:
            vals[blk] = e
    return Protransformation(one, comp, vals)


def left_unitor(p: Profunctor) -> Protransformation:
    """``1_A;P => P``, [f, p] |-> f.p."""
    comp = compose_horizontal_profunctors(identity_profunctor(p.source), p)

    def fn(blk, n):
        b, f, i = comp.elements[blk][n]
        return p.left[(b, blk[1])][f][i]

    return iso_span(comp, p, fn)


def right_unitor(p: Profunctor) -> Protransformation:
    """``P;1_B => P``, [p, g] |-> p.g."""
    comp = compose_horizontal_profunctors(p, identity_profunctor(p.target))

    def fn(blk, n):
        b, i, g = comp.elements[blk][n]
        return p.right[(blk[0], b)][g][i]

    return iso_span(comp, p, fn)


def associator(p: Profunctor, q: Profunctor, r: Profunctor) -> Protransformation:
    """``(P;Q);R => P;(Q;R)``, [[p, q], r] |-> [p, [q, r]]."""
    pq = compose_horizontal_profunctors(p, q)
    qr = compose_horizontal_profunctors(q, r)
    src = compose_horizontal_profunctors(pq, r)
    tgt = compose_horizontal_profunctors(p, qr)

    def fn(blk, n):
        a, d = blk
        c, x, z = src.elements[blk][n]
        b, i, j = pq.elements[(a, c)][x]
        y = qr.pair_class[(b, d)][(c, j, z)]
        return tgt.pair_class[blk][(b, i, y)]

    return iso_span(src, tgt, fn)
