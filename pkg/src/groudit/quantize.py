"""Quantization: groupoid algebras, carrier spaces and the matrices of spans.

A profunctor ``P: A -/-> B`` becomes the vector space with basis the carrier
elements of ``P`` (all blocks, sorted), a left module over the groupoid
algebra of ``A`` and a right module over that of ``B``.  A span ``sigma``
becomes the matrix ``Q(sigma)[q, p] = sigma(p, q)``.

Vertical composition and dagger are preserved exactly.  Horizontal
composition is preserved after splitting the idempotent ``X`` on the plain
tensor product that averages over the middle group.  The orbit-sum map
sends a composite element to the sum of its pairs; it splits X up to the
factor |Aut b|, and after normalizing its columns it splits X exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gaf.profunctor import (
    Composite,
    Profunctor,
    Protransformation,
    compose_horizontal,
    compose_horizontal_profunctors,
)
from .groupoid import Groupoid, Morphism


@dataclass(frozen=True)
class GroupoidAlgebra:
    """Convolution algebra of a groupoid on the basis Mor(G).

    ``table[i, j]`` is the index of ``m_i m_j`` or -1 when the two morphisms
    do not compose.
    """

    groupoid: Groupoid
    table: np.ndarray
    star_index: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.star_index)

    def basis(self, m: Morphism) -> np.ndarray:
        v = np.zeros(self.dim, dtype=complex)
        v[self.groupoid.index(Morphism(*m))] = 1
        return v

    def multiply(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        out = np.zeros(self.dim, dtype=np.result_type(x, y))
        for i in np.nonzero(x)[0]:
            for j in np.nonzero(y)[0]:
                k = self.table[i, j]
                if k >= 0:
                    out[k] += x[i] * y[j]
        return out

    def star(self, x: np.ndarray) -> np.ndarray:
        out = np.zeros_like(x)
        out[self.star_index] = np.conj(x)
        return out

    def unit(self) -> np.ndarray:
        v = np.zeros(self.dim, dtype=complex)
        for a in self.groupoid.objects:
            v[self.groupoid.index(self.groupoid.identity(a))] = 1
        return v


def algebra_of(g: Groupoid) -> GroupoidAlgebra:
    n = g.n_morphisms
    table = -np.ones((n, n), dtype=np.int64)
    mors = list(g.morphisms())
    for i, m1 in enumerate(mors):
        for j, m2 in enumerate(mors):
            if m1.object == m2.object:
                table[i, j] = g.index(g.compose(m1, m2))
    star = np.array([g.index(g.inverse(m)) for m in mors], dtype=np.int64)
    return GroupoidAlgebra(g, table, star)


# ---------------------------------------------------------------------------
# carrier spaces


def carrier_index(p: Profunctor) -> dict[tuple, int]:
    """``(block, i) -> row`` in block order."""
    out, n = {}, 0
    for blk in p.blocks():
        for i in range(p.size(blk)):
            out[(blk, i)] = n
            n += 1
    return out


def dimension(p: Profunctor) -> int:
    return p.total_size()


def left_action(p: Profunctor, m: Morphism) -> np.ndarray:
    """Matrix of ``x |-> m.x`` on the carrier space (zero off the object of m)."""
    idx = carrier_index(p)
    out = np.zeros((len(idx), len(idx)), dtype=np.int64)
    for (blk, i), r in idx.items():
        if blk[0] == m[0]:
            out[idx[(blk, p.left[blk][m[1]][i])], r] = 1
    return out


def right_action(p: Profunctor, m: Morphism) -> np.ndarray:
    idx = carrier_index(p)
    out = np.zeros((len(idx), len(idx)), dtype=np.int64)
    for (blk, i), r in idx.items():
        if blk[1] == m[0]:
            out[idx[(blk, p.right[blk][m[1]][i])], r] = 1
    return out


@dataclass(frozen=True)
class QuantizedMap:
    """Integer matrix of a span; ``matrix`` is the complex view."""

    source: Profunctor
    target: Profunctor
    integer: np.ndarray

    @property
    def matrix(self) -> np.ndarray:
        return self.integer.astype(complex)

    @property
    def shape(self) -> tuple[int, int]:
        return self.integer.shape

    def is_permutation(self) -> bool:
        m = self.integer
        return (m.shape[0] == m.shape[1] and set(np.unique(m)) <= {0, 1}
                and bool((m.sum(axis=0) == 1).all() and (m.sum(axis=1) == 1).all()))

    def is_unitary(self) -> bool:
        m = self.matrix
        return m.shape[0] == m.shape[1] and np.allclose(m.conj().T @ m, np.eye(m.shape[0]))

    def intertwines(self) -> bool:
        """Q(sigma)(f.p.g) = f.Q(sigma)(p).g for every pair of morphisms."""
        S, T, M = self.source, self.target, self.integer
        for f in S.source.morphisms():
            if not np.array_equal(M @ left_action(S, f), left_action(T, f) @ M):
                return False
        for g in S.target.morphisms():
            if not np.array_equal(M @ right_action(S, g), right_action(T, g) @ M):
                return False
        return True

    def to_json(self) -> list:
        m = self.matrix
        return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def quantize_protransformation(sigma: Protransformation) -> QuantizedMap:
    si, ti = carrier_index(sigma.source), carrier_index(sigma.target)
    out = np.zeros((len(ti), len(si)), dtype=np.int64)
    for blk, e in sigma.values.items():
        for (i, j), v in e.items():
            out[ti[(blk, j)], si[(blk, i)]] += v
    return QuantizedMap(sigma.source, sigma.target, out)


# ---------------------------------------------------------------------------
# horizontal composition


def splitting_map(comp: Composite) -> np.ndarray:
    """``E``: orbit of a composite element to the sum of its pairs in Q(P) (x) Q(Q)."""
    p, q = comp.first, comp.second
    pi, qi, ci = carrier_index(p), carrier_index(q), carrier_index(comp)
    dq = len(qi)
    E = np.zeros((len(pi) * dq, len(ci)), dtype=np.int64)
    mid = p.target
    for (blk, n), col in ci.items():
        a, c = blk
        b, i, j = comp.elements[blk][n]
        gb = mid.aut(b)
        for f in range(gb.order):
            x = p.right[(a, b)][f][i]
            y = q.left[(b, c)][gb.inv(f)][j]
            E[pi[((a, b), x)] * dq + qi[((b, c), y)], col] += 1
    return E


def averaging_idempotent(p: Profunctor, q: Profunctor) -> np.ndarray:
    """``X = sum_b |Aut b|^{-1} sum_f (x.f) (x) (f^{-1}.y)`` on compatible pairs."""
    pi, qi = carrier_index(p), carrier_index(q)
    dq = len(qi)
    X = np.zeros((len(pi) * dq, len(pi) * dq))
    mid = p.target
    for ((a, b), i), r in pi.items():
        for ((b2, c), j), s in qi.items():
            if b2 != b:
                continue
            gb = mid.aut(b)
            for f in range(gb.order):
                x = p.right[(a, b)][f][i]
                y = q.left[(b, c)][gb.inv(f)][j]
                X[pi[((a, b), x)] * dq + qi[((b, c), y)], r * dq + s] += 1.0 / gb.order
    return X


def stabilizer_sizes(p: Profunctor, q: Profunctor) -> set[int]:
    """Sizes of {f : (x.f, f^{-1}.y) = (x, y)} over all compatible pairs."""
    mid = p.target
    sizes = set()
    for (a, b), xs in p.elements.items():
        for (b2, c), ys in q.elements.items():
            if b2 != b:
                continue
            gb = mid.aut(b)
            for i in range(len(xs)):
                for j in range(len(ys)):
                    sizes.add(sum(1 for f in range(gb.order)
                                  if p.right[(a, b)][f][i] == i and q.left[(b, c)][gb.inv(f)][j] == j))
    return sizes


@dataclass(frozen=True)
class HorizontalReport:
    """``constant``/``deviation`` use the isometric splitting; ``orbit_constants``
    are the factors seen with the unnormalized orbit-sum splitting (one per
    middle group order that occurs)."""

    constant: float
    deviation: float
    idempotent_ok: bool
    splits: bool
    stabilizers: frozenset
    orbit_constants: frozenset

    @property
    def ok(self) -> bool:
        return (self.constant > 0 and self.deviation < 1e-9 and self.idempotent_ok and self.splits
                and self.stabilizers <= frozenset({1}))


def _fit(lhs: np.ndarray, rhs: np.ndarray) -> tuple[float, float]:
    """Least-squares c with lhs ~ c rhs, and the relative deviation."""
    nr = float((rhs * rhs).sum())
    nl = float(np.sqrt((lhs * lhs).sum()))
    if nr == 0:
        return (1.0, 0.0) if nl == 0 else (0.0, 1.0)
    c = float((lhs * rhs).sum() / nr)
    return c, float(np.sqrt(((lhs - c * rhs) ** 2).sum())) / (nl if nl else 1.0)


def check_horizontal_functoriality(sigma: Protransformation, tau: Protransformation) -> HorizontalReport:
    """Compare ``E^† (Q sigma (x) Q tau) E`` with ``Q(sigma ; tau)``.

    ``E`` has orthonormal columns and ``E E^† = X``, so E splits the
    averaging idempotent exactly.  With the orbit-sum splitting (columns not
    normalized) the same comparison holds block by block with factor
    ``|Aut b|``; those factors are reported as ``orbit_constants``.
    """
    comp_s = compose_horizontal_profunctors(sigma.source, tau.source)
    comp_t = compose_horizontal_profunctors(sigma.target, tau.target)
    Os, Ot = splitting_map(comp_s).astype(float), splitting_map(comp_t).astype(float)
    Es = Os / np.sqrt(np.maximum(Os.sum(axis=0), 1))
    Et = Ot / np.sqrt(np.maximum(Ot.sum(axis=0), 1))
    qs, qt = quantize_protransformation(sigma).integer, quantize_protransformation(tau).integer
    middle = np.kron(qs, qt).astype(float)
    rhs = quantize_protransformation(compose_horizontal(sigma, tau)).integer.astype(float)
    c, dev = _fit(Et.T @ middle @ Es, rhs)

    raw = Ot.T @ middle @ Os
    consts = set()
    for col in range(rhs.shape[1]):
        for row in np.nonzero(rhs[:, col])[0]:
            consts.add(round(float(raw[row, col] / rhs[row, col]), 9))

    X = averaging_idempotent(sigma.source, tau.source)
    idem = bool(np.allclose(X @ X, X, atol=1e-12))
    splits = bool(np.allclose(Es @ Es.T, X, atol=1e-9)) and bool(np.allclose(Es.T @ Es, np.eye(Es.shape[1])))
    stab = frozenset(stabilizer_sizes(sigma.source, tau.source) | stabilizer_sizes(sigma.target, tau.target))
    return HorizontalReport(c, dev, idem, splits, stab, frozenset(consts))
