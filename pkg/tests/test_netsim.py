import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from groudit import Morphism, balancers_to_biunitary, make_cyclic_groudit, make_groubit
from groudit.netsim import (
    LinkError,
    MultisetState,
    Step,
    StepError,
    SystemRegistry,
    UnknownOpError,
    parse_program,
    run_program,
    states_equal_up_to_scalar,
    tick_rule,
)
from groudit.gaf.semantics import oracle_equivalence, run_engine

from conftest import cyclic_with_balancers, groudits, s3_groudit


def run(d, init, *steps, links=None):
    reg = SystemRegistry(d) if links is None else SystemRegistry.with_links(d, links)
    return run_program(reg, init, [Step(op, tuple(args)) for op, *args in steps])[0]


def state(d, *systems):
    return MultisetState.basis([(n, d if isinstance(v, tuple) else d.dit, Morphism(*v) if isinstance(v, tuple) else v)
                                for n, v in systems])


def weights(s):
    return {tuple(tuple(v) if isinstance(v, tuple) else v for v in cfg): k for cfg, k in s.weights.items()}


def test_init(groubit, z3):
    assert weights(run(groubit, MultisetState.empty(), ("init", "A"))) == {((0, 0),): 1, ((1, 0),): 1}
    assert weights(run(z3, MultisetState.empty(), ("init", "A"))) == {((a, 0),): 1 for a in range(3)}
    assert len(run(groubit, MultisetState.empty(), ("init", "A"), ("init", "B"))) == 4
    with pytest.raises(StepError):
        run(groubit, MultisetState.empty(), ("init", "A"), ("init", "A"))


def test_swap(groubit, z3):
    assert weights(run(groubit, state(groubit, ("A", (0, 1))), ("swap", "A"))) == {((1, 0),): 1}
    for a in range(2):
        assert weights(run(groubit, state(groubit, ("A", (a, a))), ("swap", "A"))) == {((a, a),): 1}
    assert weights(run(z3, state(z3, ("A", (0, 2))), ("swap", "A"))) == {((2, 0),): 1}
    with pytest.raises(StepError):
        run(groubit, state(groubit, ("A", 1)), ("swap", "A"))


def test_tick_examples(groubit):
    assert weights(run(groubit, state(groubit, ("A", (0, 1)), ("B", (1, 0))), ("tick", "A", "B"))) == {((0, 0), (1, 0)): 1}
    assert weights(run(groubit, state(groubit, ("A", (1, 1)), ("B", (0, 1))), ("tick", "A", "B"))) == {((1, 1), (0, 0)): 1}


def test_tick_groubit_formula(groubit):
    for a, b, c, d in itertools.product(range(2), repeat=4):
        assert tick_rule(groubit, Morphism(a, b), Morphism(c, d)) == (Morphism(a, b ^ c), Morphism(c, a ^ d))


def test_tick_needs_link(groubit):
    init = state(groubit, ("A", (0, 0)), ("B", (0, 0)), ("C", (0, 0)))
    with pytest.raises(StepError) as exc:
        run(groubit, init, ("tick", "A", "C"), links=[("A", "B"), ("B", "C")])
    assert isinstance(exc.value.cause, LinkError)


def test_read_write(groubit, z3):
    assert weights(run(groubit, state(groubit, ("A", (1, 0))), ("read", "A"))) == {(1,): 1}
    merged = MultisetState(("A",), (groubit,), {(Morphism(0, 0),): 1, (Morphism(0, 1),): 1})
    assert weights(run(groubit, merged, ("read", "A"))) == {(0,): 2}
    assert weights(run(z3, state(z3, ("A", (2, 0))), ("read", "A"))) == {(2,): 1}
    assert weights(run(groubit, state(groubit, ("A", 1)), ("write", "A"))) == {((1, 0),): 1, ((1, 1),): 1}
    assert len(run(z3, state(z3, ("A", 0)), ("write", "A"))) == 3


def test_rand_erase(groubit):
    assert weights(run(groubit, MultisetState.empty(), ("rand", "k"))) == {(0,): 1, (1,): 1}
    out = run(groubit, state(groubit, ("k", 1)), ("erase", "k"))
    assert out.names == () and weights(out) == {(): 1}
    out = run(make_cyclic_groudit(3), MultisetState.empty(), ("rand", "k"), ("erase", "k"))
    assert weights(out) == {(): 3}


def test_iread_iwrite(groubit):
    assert weights(run(groubit, state(groubit, ("A", (1, 0))), ("iread", "A"))) == {(0,): 1}
    assert weights(run(groubit, state(groubit, ("A", 1)), ("iwrite", "A"))) == {((0, 1),): 1, ((1, 1),): 1}
    for x in range(2):
        assert weights(run(groubit, state(groubit, ("A", x)), ("iwrite", "A"), ("iread", "A"))) == {(x,): 2}


@given(groudits)
def test_iread_after_iwrite_is_multiple(d):
    for x in range(d.n):
        out = run(d, state(d, ("A", x)), ("iwrite", "A"), ("iread", "A"))
        assert weights(out) == {(x,): d.n}


def test_ctick(groubit):
    assert weights(run(groubit, state(groubit, ("c", 1), ("A", (0, 0))), ("ctick-left", "c", "A"))) == {(1, (0, 1)): 1}
    for a, b in itertools.product(range(2), repeat=2):
        for op, order in (("ctick-left", ("c", "A")), ("ctick-right", ("A", "c"))):
            out = run(groubit, state(groubit, ("c", 0), ("A", (a, b))), (op, *order))
            assert weights(out) == {(0, (a, b)): 1}


def test_split(groubit, z3):
    out = run(groubit, MultisetState.empty(), ("split", "A", "B"))
    assert weights(out) == {(m, m): 1 for m in itertools.product(range(2), repeat=2)}
    out = run(z3, MultisetState.empty(), ("split", "A", "B"))
    assert len(out) == 9 and weights(out)[((0, 1), (0, 2))] == 1


def test_copy_and_transfer(groubit):
    out = run(groubit, state(groubit, ("k", 1)), ("copy", "k", "k2"), ("transfer", "k2", "j"))
    assert out.names == ("k", "j") and weights(out) == {(1, 1): 1}


def test_program_basics(groubit):
    reg = SystemRegistry(groubit)
    init = state(groubit, ("A", (0, 1)))
    assert run_program(reg, init, [])[0] == init
    prog = [Step("swap", ("A",)), Step("read", ("A",)), Step("write", ("A",), failed=True), Step("erase", ("A",))]
    out, trace = run_program(reg, init, prog)
    assert weights(out) == {(): 1}
    assert "[failed]" in trace.text().splitlines()[2]
    with pytest.raises(UnknownOpError):
        run_program(reg, init, [Step("teleport", ("A",))])
    with pytest.raises(ValueError):
        parse_program([{"args": []}])


def test_entanglement_trace(groubit):
    prog = parse_program([{"op": "init", "args": ["A"]}, {"op": "init", "args": ["B"]},
                          {"op": "tick", "args": ["A", "B"]}, {"op": "swap", "args": ["B"]}])
    out, trace = run_program(SystemRegistry(groubit), MultisetState.empty(), prog)
    assert weights(out) == {((a, c), (a, c)): 1 for a, c in itertools.product(range(2), repeat=2)}
    lines = trace.text().splitlines()
    assert len(lines) == 4 and lines[-1] == "(0,0)(0,0) + (0,1)(0,1) + (1,0)(1,0) + (1,1)(1,1)\tSwap(B)"


def test_scalar_comparison(groubit):
    s = MultisetState(("A",), (groubit.dit,), {(0,): 2})
    assert states_equal_up_to_scalar(s, MultisetState(("A",), (groubit.dit,), {(0,): 1})) == (True, 2)
    x = MultisetState(("A",), (groubit.dit,), {(0,): 1, (1,): 1})
    y = MultisetState(("A",), (groubit.dit,), {(0,): 1, (1,): 2})
    assert states_equal_up_to_scalar(x, y)[0] is False


# ---------------------------------------------------------------------------
# properties


@given(groudits)
def test_read_write_multiplicity(d):
    for x in range(d.n):
        assert weights(run(d, state(d, ("A", x)), ("write", "A"), ("read", "A"))) == {(x,): d.n}


@given(groudits)
def test_swap_involution_iff_f_is(d):
    f = balancers_to_biunitary(d)
    twice = all(weights(run(d, state(d, ("A", m)), ("swap", "A"), ("swap", "A"))) == {(m,): 1}
                for m in d.groupoid.morphisms())
    assert twice == f.is_involution()


@settings(max_examples=25)
@given(groudits, st.data())
def test_race_freedom(d, data):
    mors = list(d.groupoid.morphisms())
    a, b, c = (data.draw(st.sampled_from(mors)) for _ in range(3))
    init = state(d, ("A", tuple(a)), ("B", tuple(b)), ("C", tuple(c)))
    links = [("A", "B"), ("B", "C")]
    x = run(d, init, ("tick", "A", "B"), ("tick", "B", "C"), links=links)
    y = run(d, init, ("tick", "B", "C"), ("tick", "A", "B"), links=links)
    assert x == y


def test_race_freedom_nonabelian():
    d = s3_groudit(2)
    mors = list(d.groupoid.morphisms())[::5]
    for a, b, c in itertools.product(mors, repeat=3):
        init = state(d, ("A", tuple(a)), ("B", tuple(b)), ("C", tuple(c)))
        assert run(d, init, ("tick", "A", "B"), ("tick", "B", "C")) == run(d, init, ("tick", "B", "C"), ("tick", "A", "B"))


@st.composite
def programs(draw):
    d = draw(groudits)
    live = {}
    steps = []
    for i in range(draw(st.integers(1, 7))):
        gs = sorted(n for n, k in live.items() if k == "g")
        ds = sorted(n for n, k in live.items() if k == "d")
        choices = ["init", "rand"]
        if gs:
            choices += ["swap", "unswap", "read", "iread"]
        if ds:
            choices += ["write", "iwrite", "erase", "copy"]
        if len(gs) >= 2:
            choices += ["tick"]
        if gs and ds:
            choices += ["ctick-left", "ctick-right"]
        op = draw(st.sampled_from(choices))
        new = f"s{i}"
        if op in ("init", "rand"):
            args = (new,)
            live[new] = "g" if op == "init" else "d"
        elif op in ("swap", "unswap"):
            args = (draw(st.sampled_from(gs)),)
        elif op in ("read", "iread"):
            args = (draw(st.sampled_from(gs)),)
            live[args[0]] = "d"
        elif op in ("write", "iwrite"):
            args = (draw(st.sampled_from(ds)),)
            live[args[0]] = "g"
        elif op == "erase":
            args = (draw(st.sampled_from(ds)),)
            del live[args[0]]
        elif op == "copy":
            args = (draw(st.sampled_from(ds)), new)
            live[new] = "d"
        elif op == "tick":
            args = tuple(draw(st.permutations(gs))[:2])
        elif op == "ctick-left":
            args = (draw(st.sampled_from(ds)), draw(st.sampled_from(gs)))
        else:
            args = (draw(st.sampled_from(gs)), draw(st.sampled_from(ds)))
        steps.append(Step(op, args))
    return d, steps


@settings(max_examples=60)
@given(programs())
def test_totality_and_engine_agreement(case):
    d, prog = case
    out, trace = run_program(SystemRegistry(d), MultisetState.empty(), prog)
    assert all(st.total() > 0 for _, _, st in trace.lines)
    eng = run_engine(d, MultisetState.empty(), prog)
    ok, k = states_equal_up_to_scalar(out, eng)
    assert ok and k > 0


@pytest.mark.parametrize("d", [make_groubit(), make_cyclic_groudit(3), cyclic_with_balancers(3, 2)],
                         ids=["groubit", "z3", "z3-random"])
def test_oracle_equivalence(d):
    res = oracle_equivalence(d)
    assert res and all(r.holds for r in res)
    for r in res:
        expected = Fraction(1, d.n) if r.op.startswith("ctick") else Fraction(1)
        assert r.scalar == expected, r


def test_local_and_diagram_engines_agree():
    d = cyclic_with_balancers(3, 9)
    prog = [Step("init", ("A",)), Step("init", ("B",)), Step("split", ("C", "E")), Step("tick", ("A", "E")),
            Step("swap", ("C",)), Step("read", ("B",)), Step("ctick-left", ("B", "A")), Step("tick", ("C", "A"))]
    x = run_engine(d, MultisetState.empty(), prog, "local")
    y = run_engine(d, MultisetState.empty(), prog, "diagram")
    s = run_program(SystemRegistry(d), MultisetState.empty(), prog)[0]
    assert states_equal_up_to_scalar(x, y)[0] and states_equal_up_to_scalar(x, s)[0]
