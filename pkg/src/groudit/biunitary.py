"""Biunitary permutations of Mor(G) and their balancer description."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from itertools import islice, permutations, product
from typing import NamedTuple

import numpy as np

from .groupoid import Groudit, Groupoid, GroupoidError, Morphism

DEFAULT_GUARD = 10
ORDERINGS = ("sigma-tau", "tau-sigma")


class EnumerationGuardError(RuntimeError):
    """Refusal to enumerate |Mor|! permutations past the configured bound."""

    def __init__(self, n_morphisms: int, guard: int):
        super().__init__(
            f"|Mor(G)| = {n_morphisms} exceeds the enumeration guard {guard}"
            f" ({n_morphisms}! permutations); raise GROUDIT_ENUM_GUARD to override"
        )
        self.n_morphisms = n_morphisms
        self.guard = guard


class BiunitaryCheck(NamedTuple):
    ok: bool
    witness: tuple[int, int] | None = None
    intersection: int | None = None

    def __bool__(self) -> bool:
        return self.ok


def _normalize_perm(g: Groupoid, perm) -> tuple[int, ...]:
    out = []
    for p in perm:
        if isinstance(p, (tuple, list)):
            out.append(g.index(Morphism(*p)))
        else:
            out.append(int(p))
    if len(out) != g.n_morphisms:
        raise GroupoidError(f"permutation has length {len(out)}, expected |Mor(G)| = {g.n_morphisms}")
    if sorted(out) != list(range(g.n_morphisms)):
        raise GroupoidError("map is not a bijection of Mor(G)")
    return tuple(out)


def check_biunitary(g: Groupoid, perm) -> BiunitaryCheck:
    """One-intersection test |F(Aut a) ∩ Aut b| = 1 over all object pairs."""
    p = _normalize_perm(g, perm)
    counts = {}
    for a in g.objects:
        images = [g.morphism(p[g.index(Morphism(a, x))]).object for x in range(g.order(a))]
        for b in g.objects:
            counts[(a, b)] = images.count(b)
    # an empty intersection is the more telling witness, so report one first
    for want in (lambda k: k == 0, lambda k: k != 1):
        for ab, k in counts.items():
            if want(k):
                return BiunitaryCheck(False, ab, k)
    return BiunitaryCheck(True)


@dataclass(frozen=True)
class Biunitary:
    groupoid: Groupoid
    perm: tuple[int, ...]

    def __post_init__(self) -> None:
        perm = _normalize_perm(self.groupoid, self.perm)
        object.__setattr__(self, "perm", perm)
        res = check_biunitary(self.groupoid, perm)
        if not res:
            raise GroupoidError(
                f"not biunitary: |F(Aut {res.witness[0]}) ∩ Aut {res.witness[1]}| = {res.intersection}"
            )

    def __call__(self, m: Morphism) -> Morphism:
        g = self.groupoid
        return g.morphism(self.perm[g.index(Morphism(*m))])

    def inverse(self) -> "Biunitary":
        inv = [0] * len(self.perm)
        for i, j in enumerate(self.perm):
            inv[j] = i
        return Biunitary(self.groupoid, tuple(inv))

    def is_involution(self) -> bool:
        return all(self.perm[j] == i for i, j in enumerate(self.perm))

    def table(self) -> list[tuple[Morphism, Morphism]]:
        return [(m, self(m)) for m in self.groupoid.morphisms()]


def balancers_to_biunitary(d: Groudit, ordering: str = "sigma-tau") -> Biunitary:
    """F(g) = tau^{-1}_{eps_{s(g)}(g)}(s(g)), with eps chosen by ``ordering``."""
    if ordering not in ORDERINGS:
        raise ValueError(f"ordering must be one of {ORDERINGS}")
    eps, tau = (d.sigma, d.tau) if ordering == "sigma-tau" else (d.tau, d.sigma)
    g = d.groupoid
    perm = []
    for a, x in g.morphisms():
        b = eps[a][x]
        perm.append(g.index(Morphism(b, tau[b].index(a))))
    return Biunitary(g, tuple(perm))


def biunitary_to_balancers(f: Biunitary, ordering: str = "sigma-tau") -> Groudit:
    """eps_a(g) = s(F g) and tau_a(g) = s(F^{-1} g)."""
    if ordering not in ORDERINGS:
        raise ValueError(f"ordering must be one of {ORDERINGS}")
    g = f.groupoid
    finv = f.inverse()
    eps = tuple(tuple(f(Morphism(a, x)).object for x in range(g.order(a))) for a in g.objects)
    tau = tuple(tuple(finv(Morphism(a, x)).object for x in range(g.order(a))) for a in g.objects)
    if ordering == "sigma-tau":
        return Groudit(g, eps, tau)
    return Groudit(g, tau, eps)


def enumeration_guard() -> int:
    raw = os.environ.get("GROUDIT_ENUM_GUARD")
    return int(raw) if raw else DEFAULT_GUARD


def enumerate_biunitaries(g: Groupoid, guard: int | None = None, chunk: int = 200_000) -> list[Biunitary]:
    """All biunitary permutations, in lexicographic order of the image tuple."""
    guard = enumeration_guard() if guard is None else guard
    m = g.n_morphisms
    if m > guard:
        raise EnumerationGuardError(m, guard)
    obj = np.array([mm.object for mm in g.morphisms()], dtype=np.int64)
    blocks = [[g.index(Morphism(a, x)) for x in range(g.order(a))] for a in g.objects]
    found: list[tuple[int, ...]] = []
    it = permutations(range(m))
    while True:
        batch = list(islice(it, chunk))
        if not batch:
            break
        perms = np.array(batch, dtype=np.int64)
        targets = obj[perms]
        ok = np.ones(len(perms), dtype=bool)
        for cols in blocks:
            sub = targets[:, cols]
            for b in g.objects:
                ok &= (sub == b).sum(axis=1) == 1
        found.extend(tuple(int(v) for v in row) for row in perms[ok])
    return [Biunitary(g, p) for p in found]


def enumerate_balancer_pairs(g: Groupoid) -> list[Groudit]:
    """Every (sigma, tau) pair of per-object bijections Aut(a) -> Ob."""
    n = g.n_objects
    if any(g.order(a) != n for a in g.objects):
        return []
    per_object = list(permutations(range(n)))
    tables = list(product(per_object, repeat=n))
    return [Groudit(g, s, t) for s in tables for t in tables]


def count_balancer_pairs(g: Groupoid) -> int:
    n = g.n_objects
    if any(g.order(a) != n for a in g.objects):
        return 0
    return math.factorial(n) ** (2 * n)
