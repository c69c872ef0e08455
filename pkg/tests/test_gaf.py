import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from groudit import Groupoid, balancers_to_biunitary, check_biunitary, make_cyclic_groudit, make_groubit
from groudit.gaf import (
    Profunctor,
    Protransformation,
    biunitary_span,
    boundary_left,
    boundary_right,
    compose_horizontal,
    compose_horizontal_profunctors,
    compose_horizontal_sum_form,
    compose_vertical,
    dagger,
    identity_profunctor,
    identity_span,
    left_unitor,
    measurement_profunctor,
    right_unitor,
)
from groudit.gaf import laws
from groudit.gaf.sampling import random_instance
from groudit.gaf.semantics import (
    biunitary_agreement,
    check_graphical_biunitarity,
    measurement_equations,
    yellow_biunitary_equations,
)
from groudit.quantize import carrier_index

from conftest import cyclic_with_balancers

seeds = st.integers(0, 2**32 - 1)


def dense(span):
    """Independent matrix of a span over flattened carriers, rows = source."""
    si, ti = carrier_index(span.source), carrier_index(span.target)
    m = np.zeros((len(si), len(ti)), dtype=object)
    for blk, e in span.values.items():
        for (i, j), v in e.items():
            m[si[(blk, i)], ti[(blk, j)]] = v
    return m


def test_identity_profunctor_carriers():
    g = make_groubit().groupoid
    one = identity_profunctor(g)
    assert len(one.carrier(0, 0)) == 2 and one.carrier(0, 1) == ()
    one.validate()


def test_boundary_carriers():
    g = make_groubit().groupoid
    L, R = boundary_left(g), boundary_right(g)
    assert all(len(L.carrier(0, a)) == 2 and len(R.carrier(a, 0)) == 2 for a in g.objects)
    comp = compose_horizontal_profunctors(L, R)
    per_b = {}
    for b, _, _ in comp.elements[(0, 0)]:
        per_b[b] = per_b.get(b, 0) + 1
    assert per_b == {0: 2, 1: 2}


def test_constant_spans_compose_to_twelve():
    one = Groupoid.trivial()
    P = Profunctor(one, one, {(0, 0): [0]}, None, None)
    Q = Profunctor(one, one, {(0, 0): [0, 1, 2]}, None, None)
    s = Protransformation(P, Q, {(0, 0): {(0, j): 2 for j in range(3)}})
    t = Protransformation(Q, P, {(0, 0): {(j, 0): 2 for j in range(3)}})
    assert compose_vertical(s, t).get((0, 0), 0, 0) == 12


def test_unitors_and_identity_composite():
    g = make_cyclic_groudit(3).groupoid
    L = boundary_left(g)
    one = identity_profunctor(g)
    lam = left_unitor(compose_horizontal_profunctors(L, boundary_right(g)))
    assert compose_vertical(dagger(lam), lam) == identity_span(lam.target)
    rho = right_unitor(L)
    assert compose_vertical(rho, dagger(rho)) == identity_span(rho.source)
    assert compose_horizontal(identity_span(L), identity_span(one)) == identity_span(
        compose_horizontal_profunctors(L, one))


@given(seeds)
def test_vertical_matches_matrix_product(seed):
    x = random_instance(seed)
    assert (dense(compose_vertical(x.s1, x.s2)) == dense(x.s1).dot(dense(x.s2))).all()


@given(seeds)
def test_vertical_associative_with_units(seed):
    x = random_instance(seed)
    assert compose_vertical(compose_vertical(x.s1, x.s2), x.s1) == compose_vertical(x.s1, compose_vertical(x.s2, x.s1))
    assert compose_vertical(identity_span(x.s1.source), x.s1) == x.s1 == compose_vertical(x.s1, identity_span(x.s1.target))


def _other_rep(comp, blk, lab):
    idx = comp.index[blk][lab]
    return max(pr for pr, n in comp.pair_class[blk].items() if n == idx)


@given(seeds)
def test_horizontal_independent_of_representatives(seed):
    x = random_instance(seed)
    assert compose_horizontal_sum_form(x.s1, x.t1, reps=_other_rep) == compose_horizontal(x.s1, x.t1)


@settings(max_examples=100)
@given(seeds)
def test_law_suite(seed):
    x = random_instance(seed)
    assert laws.interchange(x.s1, x.s2, x.t1, x.t2)
    assert laws.pentagon(x.P, x.Q, x.R, x.S)
    assert laws.triangle(x.P, x.Q)
    assert laws.snake(x.P) and laws.snake_adjoint(x.P)
    assert laws.dagger_antihomomorphism(x.s1, x.s2)
    assert laws.dagger_horizontal(x.s1, x.t1)
    assert laws.freeness_preserved(x.P, x.Q)
    assert laws.horizontal_forms_agree(x.s1, x.t1)


@pytest.mark.parametrize("d", [make_groubit(), make_cyclic_groudit(3)], ids=["groubit", "z3"])
def test_snakes_on_wires(d):
    g = d.groupoid
    for p in (boundary_left(g), boundary_right(g), identity_profunctor(g), measurement_profunctor(g)):
        assert laws.snake(p) and laws.snake_adjoint(p)


def test_dagger_basics():
    x = random_instance(7)
    assert dagger(dagger(x.s1)) == x.s1
    assert dagger(identity_span(x.P)) == identity_span(x.P)


def test_measurement_identities():
    res = measurement_equations(make_groubit().groupoid)
    assert [r.holds for r in res] == [True] * 6
    assert res[2].scalar == 2 and res[4].scalar == 2 and res[5].scalar == 1


@pytest.mark.parametrize("d", [make_groubit(), make_cyclic_groudit(3), cyclic_with_balancers(3, 11)])
def test_yellow_biunitary(d):
    assert all(r.holds for r in yellow_biunitary_equations(d))


def test_graphical_biunitarity_agrees_on_all_24():
    g = make_groubit().groupoid
    rows = biunitary_agreement(g, itertools.permutations(range(4)))
    assert len(rows) == 24 and all(a == b for _, a, b in rows)
    assert sum(a for _, a, _ in rows) == 16
    assert check_graphical_biunitarity(g, balancers_to_biunitary(make_groubit()).perm)
    assert not check_graphical_biunitarity(g, range(4))


@given(st.permutations(range(9)))
@settings(max_examples=15)
def test_graphical_biunitarity_z3(perm):
    g = make_cyclic_groudit(3).groupoid
    assert check_graphical_biunitarity(g, perm) == bool(check_biunitary(g, perm))


def test_crossing_is_unitary():
    f = balancers_to_biunitary(cyclic_with_balancers(3, 4))
    F = biunitary_span(f)
    assert compose_vertical(F, dagger(F)) == identity_span(F.source)


def test_equivariance_enforced():
    from groudit.gaf import EquivarianceError

    L = boundary_left(make_groubit().groupoid)
    with pytest.raises(EquivarianceError):
        Protransformation(L, L, {(0, 0): {(0, 0): 1}})
