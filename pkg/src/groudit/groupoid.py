"""Finite skeletal groupoids, groudits and dits.

Objects and group elements are dense integers starting at 0.  A morphism is
an ``(object, element)`` pair; every morphism is an automorphism because the
groupoids are skeletal.  The flattened index of ``(a, x)`` is ``a*k + x`` when
every group has order ``k``, and a running offset in general.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, NamedTuple, Sequence


class GroupoidError(ValueError):
    """Raised when tables do not describe a valid groupoid or groudit."""


class CompositionError(ValueError):
    """Raised when two morphisms live at different objects."""


class Morphism(NamedTuple):
    object: int
    element: int

    def __str__(self) -> str:
        return f"({self.object},{self.element})"


def _as_table(rows: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(v) for v in row) for row in rows)


@dataclass(frozen=True)
class Group:
    """A finite group given by its multiplication table.

    ``table[x][y]`` is the product ``x y`` (apply ``y`` first when read as
    composition ``x ∘ y``).  The identity is found from the table.
    """

    table: tuple[tuple[int, ...], ...]
    identity: int = field(init=False)
    inverse: tuple[int, ...] = field(init=False)

    def __post_init__(self) -> None:
        table = _as_table(self.table)
        object.__setattr__(self, "table", table)
        n = len(table)
        if n == 0 or any(len(row) != n for row in table):
            raise GroupoidError("group table must be square and nonempty")
        for row in table:
            if sorted(row) != list(range(n)):
                raise GroupoidError("group table rows must be permutations")
        for j in range(n):
            if sorted(table[i][j] for i in range(n)) != list(range(n)):
                raise GroupoidError("group table columns must be permutations")
        ids = [e for e in range(n) if all(table[e][x] == x == table[x][e] for x in range(n))]
        if len(ids) != 1:
            raise GroupoidError("group table has no two-sided identity")
        e = ids[0]
        for x in range(n):
            for y in range(n):
                xy = table[x][y]
                for z in range(n):
                    if table[xy][z] != table[x][table[y][z]]:
                        raise GroupoidError("group table is not associative")
        inv = tuple(next(y for y in range(n) if table[x][y] == e) for x in range(n))
        object.__setattr__(self, "identity", e)
        object.__setattr__(self, "inverse", inv)

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, x: int, y: int) -> int:
        return self.table[x][y]

    def inv(self, x: int) -> int:
        return self.inverse[x]

    @classmethod
    def cyclic(cls, n: int) -> "Group":
        if n < 1:
            raise GroupoidError("cyclic group order must be positive")
        return cls(tuple(tuple((i + j) % n for j in range(n)) for i in range(n)))

    @classmethod
    def symmetric3(cls) -> "Group":
        """S3 with elements ordered as the lexicographic permutations of 0,1,2."""
        from itertools import permutations

        perms = list(permutations(range(3)))
        index = {p: i for i, p in enumerate(perms)}
        # (p q)(i) = p(q(i)), so q acts first.
        rows = [[index[tuple(p[q[i]] for i in range(3))] for q in perms] for p in perms]
        return cls(rows)


@dataclass(frozen=True)
class Groupoid:
    """Skeletal groupoid: one group of automorphisms per object."""

    groups: tuple[Group, ...]

    def __post_init__(self) -> None:
        groups = tuple(g if isinstance(g, Group) else Group(g) for g in self.groups)
        if not groups:
            raise GroupoidError("a groupoid needs at least one object")
        object.__setattr__(self, "groups", groups)
        offsets = [0]
        for g in groups:
            offsets.append(offsets[-1] + g.order)
        object.__setattr__(self, "_offsets", tuple(offsets))

    @classmethod
    def from_tables(cls, tables: Sequence[Sequence[Sequence[int]]]) -> "Groupoid":
        return cls(tuple(Group(_as_table(t)) for t in tables))

    @classmethod
    def discrete(cls, n: int) -> "Groupoid":
        """n objects with trivial groups; the engine's view of a dit."""
        return cls(tuple(Group(((0,),)) for _ in range(n)))

    @classmethod
    def trivial(cls) -> "Groupoid":
        return cls.discrete(1)

    @classmethod
    def disjoint_cyclic(cls, n_objects: int, order: int) -> "Groupoid":
        return cls(tuple(Group.cyclic(order) for _ in range(n_objects)))

    @property
    def key(self) -> tuple:
        return tuple(g.table for g in self.groups)

    @property
    def n_objects(self) -> int:
        return len(self.groups)

    @property
    def objects(self) -> range:
        return range(len(self.groups))

    def aut(self, a: int) -> Group:
        return self.groups[a]

    def order(self, a: int) -> int:
        return self.groups[a].order

    def identity(self, a: int) -> Morphism:
        return Morphism(a, self.groups[a].identity)

    def morphisms(self) -> Iterator[Morphism]:
        """Object-major, element-minor enumeration of Mor(G)."""
        for a, g in enumerate(self.groups):
            for x in range(g.order):
                yield Morphism(a, x)

    @property
    def n_morphisms(self) -> int:
        return self._offsets[-1]

    def index(self, m: Morphism) -> int:
        a, x = m
        if not (0 <= a < self.n_objects and 0 <= x < self.groups[a].order):
            raise GroupoidError(f"{m} is not a morphism of this groupoid")
        return self._offsets[a] + x

    def morphism(self, i: int) -> Morphism:
        for a in range(self.n_objects):
            if i < self._offsets[a + 1]:
                return Morphism(a, i - self._offsets[a])
        raise GroupoidError(f"morphism index {i} out of range")

    def compose(self, m1: Morphism, m2: Morphism) -> Morphism:
        """``m1 ∘ m2``; only defined at a common object."""
        if m1[0] != m2[0]:
            raise CompositionError(f"cannot compose {tuple(m1)} and {tuple(m2)}: objects differ")
        a = m1[0]
        return Morphism(a, self.groups[a].mul(m1[1], m2[1]))

    def inverse(self, m: Morphism) -> Morphism:
        return Morphism(m[0], self.groups[m[0]].inv(m[1]))

    @staticmethod
    def source(m: Morphism) -> int:
        return m[0]

    target = source


def compose(g: Groupoid, m1: Morphism, m2: Morphism) -> Morphism:
    return g.compose(Morphism(*m1), Morphism(*m2))


@dataclass(frozen=True)
class Dit:
    size: int

    def __post_init__(self) -> None:
        if self.size < 1:
            raise GroupoidError("a dit needs at least one value")

    def values(self) -> range:
        return range(self.size)


def _check_balancer(groupoid: Groupoid, tables, name: str) -> tuple[tuple[int, ...], ...]:
    n = groupoid.n_objects
    tables = _as_table(tables)
    if len(tables) != n:
        raise GroupoidError(f"{name} needs one table per object")
    for a, t in enumerate(tables):
        if len(t) != groupoid.order(a):
            raise GroupoidError(f"{name}[{a}] must have one entry per element of Aut({a})")
        if sorted(t) != list(range(n)):
            raise GroupoidError(f"{name}[{a}] is not a bijection Aut({a}) -> Ob")
    return tables


@dataclass(frozen=True)
class Groudit:
    """A skeletal groupoid with two balancers Aut(a) -> Ob."""

    groupoid: Groupoid
    sigma: tuple[tuple[int, ...], ...]
    tau: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        g = self.groupoid
        for a in g.objects:
            if g.order(a) != g.n_objects:
                raise GroupoidError(
                    f"|Aut({a})| = {g.order(a)} but a groudit needs |Aut(a)| = |Ob| = {g.n_objects}"
                )
        object.__setattr__(self, "sigma", _check_balancer(g, self.sigma, "sigma"))
        object.__setattr__(self, "tau", _check_balancer(g, self.tau, "tau"))

    @property
    def n(self) -> int:
        return self.groupoid.n_objects

    @property
    def dit(self) -> Dit:
        return Dit(self.n)

    @staticmethod
    def _inverse(table: Sequence[int], value: int) -> int:
        return table.index(value)

    def sigma_inv(self, a: int, b: int) -> Morphism:
        """The element of Aut(a) sent to ``b`` by sigma_a."""
        return Morphism(a, self.sigma[a].index(b))

    def tau_inv(self, a: int, b: int) -> Morphism:
        return Morphism(a, self.tau[a].index(b))

    def to_json(self) -> dict:
        return {
            "objects": self.n,
            "groups": [list(map(list, grp.table)) for grp in self.groupoid.groups],
            "sigma": [list(t) for t in self.sigma],
            "tau": [list(t) for t in self.tau],
        }


def make_groubit() -> Groudit:
    ident = ((0, 1), (0, 1))
    return Groudit(Groupoid.disjoint_cyclic(2, 2), ident, ident)


def make_cyclic_groudit(n: int, sigma_tables=None, tau_tables=None) -> Groudit:
    """``n`` copies of Z_n; balancers default to the identity tables."""
    if n < 1:
        raise GroupoidError("n must be positive")
    ident = tuple(tuple(range(n)) for _ in range(n))
    return Groudit(
        Groupoid.disjoint_cyclic(n, n),
        ident if sigma_tables is None else sigma_tables,
        ident if tau_tables is None else tau_tables,
    )


def groudit_from_json(doc: dict) -> Groudit:
    if not isinstance(doc, dict):
        raise GroupoidError("groudit document must be a JSON object")
    if "cyclic" in doc:
        return make_cyclic_groudit(int(doc["cyclic"]), doc.get("sigma"), doc.get("tau"))
    try:
        n = int(doc["objects"])
        groups = doc["groups"]
    except KeyError as exc:
        raise GroupoidError(f"missing field {exc.args[0]!r}") from None
    if len(groups) != n:
        raise GroupoidError("'groups' must list one table per object")
    g = Groupoid.from_tables(groups)
    ident = tuple(tuple(range(n)) for _ in range(n))
    return Groudit(g, doc.get("sigma", ident), doc.get("tau", ident))


def load_groudit(path: str | Path) -> Groudit:
    with open(path, encoding="utf-8") as fh:
        return groudit_from_json(json.load(fh))
