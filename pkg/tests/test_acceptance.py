"""Acceptance criteria 1 to 12, one check each.

Run under pytest (a PASS/FAIL line per criterion is printed in the terminal
summary) or directly with ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import itertools
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from groudit import (
    Morphism,
    balancers_to_biunitary,
    biunitary_to_balancers,
    count_balancer_pairs,
    enumerate_balancer_pairs,
    enumerate_biunitaries,
    make_cyclic_groudit,
    make_groubit,
)
from groudit.gaf import biunitary_span, compose_vertical, dagger, laws
from groudit.gaf.sampling import random_instance
from groudit.gaf.semantics import measurement_equations, oracle_equivalence, run_engine, yellow_biunitary_equations
from groudit.netsim import MultisetState, Step, SystemRegistry, run_program
from groudit.protocols import (
    ENCODE,
    DECODE,
    basic_block_table,
    build_state_transfer,
    chain_registry,
    kd_distribution,
    party_names,
    verify_dense_coding,
    verify_teleportation,
)
from groudit.quantize import check_horizontal_functoriality, quantize_protransformation

# pinned limits
RUNTIME_1 = 1.0
RUNTIME_2 = 60.0
RUNTIME_3 = 1.0
REL_TOL = 1e-9
LAW_INSTANCES = 100

RESULTS: dict[int, tuple[bool, str]] = {}


def _plain(state: MultisetState) -> dict:
    return {tuple(tuple(v) if isinstance(v, tuple) else v for v in cfg): k for cfg, k in state.weights.items()}


# ---------------------------------------------------------------------------


def criterion_1():
    t = time.perf_counter()
    g = make_groubit().groupoid
    found = enumerate_biunitaries(g)
    pairs = enumerate_balancer_pairs(g)
    fwd = all(balancers_to_biunitary(biunitary_to_balancers(f)) == f for f in found)
    back = all(biunitary_to_balancers(balancers_to_biunitary(d)) == d for d in pairs)
    dt = time.perf_counter() - t
    ok = len(found) == 16 and math.factorial(g.n_morphisms) == 24 and len(pairs) == 16 and fwd and back
    return ok and dt < RUNTIME_1, f"{len(found)} of 24, {len(pairs)} balancer pairs, round trips {fwd and back}, {dt:.3f}s"


def criterion_2():
    t = time.perf_counter()
    g = make_cyclic_groudit(3).groupoid
    n = len(enumerate_biunitaries(g))
    dt = time.perf_counter() - t
    pairs = count_balancer_pairs(g)
    ok = n == 46656 == pairs and math.factorial(9) == 362880
    return ok and dt < RUNTIME_2, f"{n} of 362880, {pairs} balancer pairs, {dt:.2f}s"


def criterion_3():
    t = time.perf_counter()
    d = make_groubit()
    names = party_names(3)
    prog = build_state_transfer(d, 3)
    reg = chain_registry(d, names)
    ok = True
    for a, b in itertools.product(range(2), repeat=2):
        init = MultisetState.basis([(names[0], d, Morphism(a, b))])
        out = run_program(reg, init, prog)[0]
        want = {((c, 0), (dd, 0), (a, b)): 1 for c, dd in itertools.product(range(2), repeat=2)}
        ok &= out.names == tuple(names) and _plain(out) == want
        ok &= _plain(run_engine(d, init, prog)) == want
    dt = time.perf_counter() - t
    return ok and dt < RUNTIME_3, f"4 inputs exact, {dt:.3f}s"


def criterion_4():
    d = make_groubit()
    table = basic_block_table(d)
    ok = len(table) == 16
    for ((a, b), (c, dd)), out in table.items():
        ok &= _plain(out) == {((b ^ c, dd), (dd ^ a, b)): 1}
    return ok, f"{len(table)} input pairs"


def criterion_5():
    details, ok = [], True
    for d in (make_groubit(), make_cyclic_groudit(3)):
        rep = verify_dense_coding(d)
        ident = all(k == v for k, v in rep.decoded.items())
        bij = len(rep.decoded) == d.n ** 2 == len(set(rep.decoded.values()))
        ok &= rep.passed and bij and all(r.engine_passed for r in rep.results)
        details.append(f"d={d.n}: {rep.counts()[0]}/{rep.counts()[1]}, {'identity' if ident else 'bijection'}")
    return ok, "; ".join(details)


def criterion_6():
    details, ok = [], True
    for d in (make_groubit(), make_cyclic_groudit(3)):
        rep = verify_teleportation(d)
        ok &= rep.passed and len(rep.scalars) == 1 and rep.scalars[0] > 0
        details.append(f"d={d.n}: {rep.counts()[0]}/{rep.counts()[1]}, scalar {','.join(map(str, rep.scalars))}")
    return ok, "; ".join(details)


def criterion_7():
    d = make_groubit()
    bad = []
    for a, e, b in itertools.product(ENCODE, DECODE, DECODE):
        table = kd_distribution(d, a, e, b)
        matched = {"write": "read", "iwrite": "iread"}[a] == e == b
        if matched:
            good = all(len(set(o)) == 1 for o in table)
        else:
            full = set(itertools.product(range(2), repeat=3))
            good = set(table) == full and len(set(table.values())) == 1
        if not good:
            bad.append(f"{a}/{e}/{b}")
    return not bad, "8 combos; " + ("all as expected" if not bad else "not uniform: " + ", ".join(bad))


def criterion_8():
    counts = dict.fromkeys(("interchange", "pentagon", "triangle", "snake", "dagger", "freeness"), 0)
    for seed in range(LAW_INSTANCES):
        x = random_instance(seed)
        counts["interchange"] += laws.interchange(x.s1, x.s2, x.t1, x.t2)
        counts["pentagon"] += laws.pentagon(x.P, x.Q, x.R, x.S)
        counts["triangle"] += laws.triangle(x.P, x.Q)
        counts["snake"] += laws.snake(x.P) and laws.snake_adjoint(x.P)
        counts["dagger"] += laws.dagger_antihomomorphism(x.s1, x.s2) and laws.dagger_horizontal(x.s1, x.t1)
        counts["freeness"] += laws.freeness_preserved(x.P, x.Q)
    ok = all(v == LAW_INSTANCES for v in counts.values())
    return ok, ", ".join(f"{k} {v}/{LAW_INSTANCES}" for k, v in counts.items())


def criterion_9():
    res = measurement_equations(make_groubit().groupoid)
    c_fails, d_, e_, f_, yellow, blue = (r.holds for r in res)
    ok = c_fails and d_ and e_ and f_ and yellow and res[4].scalar == 2 and res[2].scalar == 2 and blue
    for dd in (make_groubit(), make_cyclic_groudit(3)):
        ok &= all(r.holds for r in yellow_biunitary_equations(dd))
    return ok, (f"vertex non-identity {c_fails}, isospan and vertex identities {d_ and e_ and f_}, "
                f"yellow loop {res[4].scalar}, yellow crossings on groubit and Z3")


def criterion_10():
    ok, scal = True, set()
    for d in (make_groubit(), make_cyclic_groudit(3)):
        for r in oracle_equivalence(d):
            ok &= r.holds and isinstance(r.scalar, Fraction) and r.scalar > 0
            scal.add((r.op, r.scalar))
    ctick = sorted({str(k) for op, k in scal if op.startswith("ctick")})
    other = sorted({str(k) for op, k in scal if not op.startswith("ctick")})
    return ok, f"scalars: ctick {','.join(ctick)}; others {','.join(other)}"


def criterion_11():
    ok, worst = True, 0.0
    for seed in range(LAW_INSTANCES):
        x = random_instance(seed)
        qa, qb = quantize_protransformation(x.s1), quantize_protransformation(x.s2)
        ok &= np.array_equal(quantize_protransformation(compose_vertical(x.s1, x.s2)).integer, qb.integer @ qa.integer)
        ok &= np.array_equal(quantize_protransformation(dagger(x.s1)).integer, qa.integer.T)
        h = check_horizontal_functoriality(x.s1, x.t1)
        ok &= h.constant > 0 and h.deviation < REL_TOL and h.idempotent_ok and h.splits and h.stabilizers <= {1}
        worst = max(worst, h.deviation)
    q = quantize_protransformation(biunitary_span(balancers_to_biunitary(make_groubit())))
    ok &= q.shape == (4, 4) and q.is_permutation()
    return ok, f"{LAW_INSTANCES} instances, worst horizontal deviation {worst:.1e}, groubit F 4x4 permutation {q.is_permutation()}"


def criterion_12():
    d = make_groubit()
    reg = SystemRegistry.with_links(d, [("A", "B"), ("B", "C")])
    mors = list(d.groupoid.morphisms())
    n, ok = 0, True
    for a, b, c in itertools.product(mors, repeat=3):
        init = MultisetState.basis([("A", d, a), ("B", d, b), ("C", d, c)])
        x = run_program(reg, init, [Step("tick", ("A", "B")), Step("tick", ("B", "C"))])[0]
        y = run_program(reg, init, [Step("tick", ("B", "C")), Step("tick", ("A", "B"))])[0]
        ok &= x == y
        n += 1
    return ok and n == 64, f"{n} chain inputs"


CRITERIA = {i: globals()[f"criterion_{i}"] for i in range(1, 13)}


def _line(i: int, ok: bool, detail: str) -> str:
    return f"criterion {i:2d}: {'PASS' if ok else 'FAIL'}  {detail}"


@pytest.fixture(scope="module", autouse=True)
def _summary(request):
    yield
    rep = request.config.pluginmanager.get_plugin("terminalreporter")
    lines = [_line(i, *RESULTS[i]) for i in sorted(RESULTS)]
    if rep is not None:
        rep.write_line("")
        rep.write_line("acceptance summary")
        for line in lines:
            rep.write_line(line)
    else:
        print("\n".join(lines))


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    ok, detail = CRITERIA[number]()
    RESULTS[number] = (ok, detail)
    print(_line(number, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    for i, fn in CRITERIA.items():
        print(_line(i, *fn()))
