import itertools
import json

import pytest
from hypothesis import given

from groudit import (
    CompositionError,
    Group,
    Groudit,
    Groupoid,
    GroupoidError,
    Morphism,
    compose,
    groudit_from_json,
    make_cyclic_groudit,
    make_groubit,
)

from conftest import groudits, s3_groudit


def test_groubit_shape(groubit):
    g = groubit.groupoid
    assert list(g.objects) == [0, 1]
    assert all(g.order(a) == 2 for a in g.objects)
    assert groubit.sigma == ((0, 1), (0, 1)) and groubit.tau == ((0, 1), (0, 1))
    assert groubit.sigma[0][1] == 1 and groubit.sigma[1][0] == 0


def test_groubit_composition(groubit):
    g = groubit.groupoid
    assert compose(g, Morphism(0, 1), Morphism(0, 1)) == Morphism(0, 0)
    assert compose(g, Morphism(1, 1), Morphism(1, 1)) == Morphism(1, 0)
    for a, b, c in itertools.product(range(2), repeat=3):
        assert compose(g, Morphism(a, b), Morphism(a, c)) == Morphism(a, b ^ c)


def test_z3_composition(z3):
    assert compose(z3.groupoid, Morphism(0, 1), Morphism(0, 2)) == Morphism(0, 0)


def test_compose_needs_same_object(groubit):
    with pytest.raises(CompositionError):
        compose(groubit.groupoid, Morphism(0, 1), Morphism(1, 1))


def test_cyclic_two_is_groubit():
    assert make_cyclic_groudit(2) == make_groubit()
    assert make_cyclic_groudit(3).groupoid.n_morphisms == 9


def test_validation():
    with pytest.raises(GroupoidError):
        make_cyclic_groudit(2, [(0, 0), (0, 1)])
    with pytest.raises(GroupoidError):
        Groudit(Groupoid((Group.cyclic(3), Group.cyclic(3))), ((0, 1, 2),) * 2, ((0, 1, 2),) * 2)
    with pytest.raises(GroupoidError):
        Group(((0, 1), (0, 1)))


def test_canonical_order(z3):
    mors = list(z3.groupoid.morphisms())
    assert mors == sorted(mors)
    assert [z3.groupoid.index(m) for m in mors] == list(range(9))
    assert all(z3.groupoid.index(m) == 3 * m.object + m.element for m in mors)


@given(groudits)
def test_group_axioms(d):
    g = d.groupoid
    assert all(g.order(a) == d.n for a in g.objects)
    for a in g.objects:
        ms = [Morphism(a, x) for x in range(g.order(a))]
        for x, y, z in itertools.product(ms, repeat=3):
            assert g.compose(g.compose(x, y), z) == g.compose(x, g.compose(y, z))
        for x in ms:
            assert g.compose(x, g.inverse(x)) == g.identity(a)
            assert g.compose(x, g.identity(a)) == x


def test_nonabelian_axioms():
    g = s3_groudit().groupoid
    grp = g.aut(0)
    assert any(grp.mul(x, y) != grp.mul(y, x) for x in range(6) for y in range(6))
    for x, y, z in itertools.product(range(6), repeat=3):
        assert grp.mul(grp.mul(x, y), z) == grp.mul(x, grp.mul(y, z))


def test_json_roundtrip(groubit):
    d = s3_groudit(3)
    assert groudit_from_json(json.loads(json.dumps(d.to_json()))) == d
    assert groudit_from_json({"cyclic": 2}) == groubit
    with pytest.raises(GroupoidError):
        groudit_from_json({"groups": []})
