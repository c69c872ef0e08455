import itertools
import json
from fractions import Fraction

import pytest
from hypothesis import given, settings

from groudit import Morphism, make_groubit
from groudit.protocols import (
    UnknownProtocolError,
    basic_block_table,
    build_kd,
    build_state_transfer,
    entangled_state,
    failed_final_tick_report,
    kd_distribution,
    verify_dense_coding,
    verify_entanglement,
    verify_kd,
    verify_protocol,
    verify_state_transfer,
    verify_teleportation,
)

from conftest import cyclic_with_balancers, groudits


def test_basic_block_table(groubit):
    table = basic_block_table(groubit)
    assert len(table) == 16
    for (g, h), out in table.items():
        (a, b), (c, d) = g, h
        assert {cfg: k for cfg, k in out.weights.items()} == {(Morphism(b ^ c, d), Morphism(d ^ a, b)): 1}


def test_three_party_transfer_groubit(groubit):
    rep = verify_state_transfer(groubit, 3)
    assert rep.passed and rep.counts() == (4, 4) and rep.scalars == [1]
    for r in rep.results:
        a, b = r.input
        expected = " + ".join(f"({c},0)({d},0)({a},{b})" for c, d in itertools.product(range(2), repeat=2))
        assert r.output == expected


def test_four_party_z3(z3):
    assert verify_protocol("state-transfer", z3, parties=4).passed


def test_transfer_needs_two_parties(groubit):
    with pytest.raises(ValueError):
        build_state_transfer(groubit, 1)


@pytest.mark.parametrize("d", [make_groubit(), cyclic_with_balancers(3, 1)])
def test_failed_final_tick_is_recoverable(d):
    rep = failed_final_tick_report(d)
    assert all(v["logical_recovered"] and v["retry_completes"] for v in rep.values())
    fail = verify_state_transfer(d, 3, fail_step=len(build_state_transfer(d, 3)) - 1)
    assert not fail.passed and any("yes" in n for n in fail.notes)


def test_entanglement(groubit, z3):
    s = entangled_state(groubit)
    assert {tuple(map(tuple, c)): k for c, k in s.weights.items()} == {
        ((a, c), (a, c)): 1 for a, c in itertools.product(range(2), repeat=2)}
    assert len(entangled_state(z3)) == 9 and set(entangled_state(z3).weights.values()) == {1}
    assert verify_entanglement(groubit).passed


def test_teleportation(groubit, z3):
    rep = verify_teleportation(groubit)
    assert rep.passed and rep.counts() == (4, 4) and rep.scalars == [Fraction(4)]
    rz = verify_teleportation(z3)
    assert rz.passed and rz.scalars == [Fraction(9)]


def test_dense_coding_identity(groubit, z3):
    for d in (groubit, z3):
        rep = verify_dense_coding(d)
        assert rep.passed and all(k == v for k, v in rep.decoded.items())
        assert verify_dense_coding(d, via_chain=True).decoded == rep.decoded


@settings(max_examples=15)
@given(groudits)
def test_protocols_for_any_groudit(d):
    for name in ("state-transfer", "entanglement", "dense-coding", "teleportation"):
        rep = verify_protocol(name, d)
        assert rep.passed, (name, rep.text())
        assert all(r.engine_passed in (True, None) for r in rep.results)
    dc = verify_dense_coding(d)
    assert len(set(dc.decoded.values())) == d.n ** 2


def test_kd_matched(groubit):
    for a, b in (("write", "read"), ("iwrite", "iread")):
        table = kd_distribution(groubit, a, b, b)
        assert all(len(set(o)) == 1 for o in table) and len(table) == 2
        assert all(len(set(o)) == 1 for o in kd_distribution(groubit, a, None, b))


def test_kd_eve_in_other_basis_gives_uniform_product(groubit):
    table = kd_distribution(groubit, "write", "iread", "read")
    assert table == {o: 1 for o in itertools.product(range(2), repeat=3)}


def test_kd_eve_matching_alice_stays_correlated(groubit):
    # Eve in Alice's basis learns kA exactly; only Bob's bit is random.
    table = kd_distribution(groubit, "write", "read", "iread")
    assert set(table) == {(a, a, b) for a in range(2) for b in range(2)}
    assert len(set(table.values())) == 1


def test_kd_report(groubit):
    rep = verify_kd(groubit)
    assert len(rep.kd_tables) == 12
    assert rep.counts() == (8, 12)
    failing = {r.input for r in rep.results if not r.passed}
    assert failing == {("write", "read", "iread"), ("write", "iread", "iread"),
                       ("iwrite", "read", "read"), ("iwrite", "iread", "read")}
    with pytest.raises(ValueError):
        build_kd(groubit, "read", None, "read")


def test_unknown_protocol(groubit):
    with pytest.raises(UnknownProtocolError):
        verify_protocol("e91", groubit)


def test_report_json_roundtrip(groubit):
    rep = verify_protocol("teleportation", groubit)
    doc = json.loads(json.dumps(rep.to_json(), sort_keys=True))
    assert doc["passed"] and doc["scalars"] == ["4"]
    assert rep.text() == verify_protocol("teleportation", groubit).text()
