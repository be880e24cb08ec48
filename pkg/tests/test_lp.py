from dataclasses import replace
from fractions import Fraction as F
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from qcvolume.closed_form import VolumeSign
from qcvolume.lp import (
    LpBuilder,
    LpSolution,
    LpStructureError,
    Relation,
    Sense,
    Status,
    check_complementary_slackness,
    dualize,
    dump,
    is_standard,
    solve,
    solve_linear_system,
    standardize,
)
from qcvolume.models import DUAL_REDUCED, FINAL_DUAL, REDUCED_LP, SYMMETRIC_LP, build

LE, GE, EQ = Relation.LE, Relation.GE, Relation.EQ
GOLDEN = Path(__file__).parent / "golden"


def lp(sense, rows, objective, free=()):
    names = sorted({v for _, c, _, _ in rows for v in c} | set(objective))
    b = LpBuilder("t", sense)
    for n in names:
        b.var(n, free=n in free)
    for i, (name, coeffs, rel, rhs) in enumerate(rows):
        b.add(name or f"r{i}", coeffs, rel, rhs)
    b.objective(objective)
    return b.build()


def test_textbook_max():
    m = lp(Sense.MAX, [("", {"x": 1, "y": 1}, LE, 4), ("", {"x": 1, "y": 3}, LE, 6)], {"x": 3, "y": 2})
    sol = solve(m)
    assert sol.status is Status.OPTIMAL
    assert sol.objective_value == 12
    assert sol.primal == {"x": F(4), "y": F(0)}


def test_fractional_optimum_and_equality():
    m = lp(Sense.MIN, [("", {"x": 2, "y": 3}, EQ, 1), ("", {"x": 1, "y": -1}, GE, 0)], {"x": 1, "y": 1})
    sol = solve(m)
    # x = y = 1/5 beats the vertex (1/2, 0)
    assert sol.objective_value == F(2, 5)
    assert m.is_feasible(sol.primal)


def test_infeasible_and_unbounded():
    assert solve(lp(Sense.MAX, [("", {"x": 1}, LE, -1)], {"x": 1})).status is Status.INFEASIBLE
    assert solve(lp(Sense.MAX, [("", {"x": 1, "y": -1}, LE, 1)], {"x": 1})).status is Status.UNBOUNDED


def test_free_variable():
    m = lp(Sense.MIN, [("", {"x": 1}, GE, -5)], {"x": 1}, free={"x"})
    sol = solve(m)
    assert sol.objective_value == -5 and sol.primal["x"] == -5


def test_degenerate_cycling_example_terminates():
    # a classic LP on which largest-coefficient pivoting cycles; optimum at x4 = x6 = 1
    m = lp(
        Sense.MAX,
        [
            ("", {"x4": F(1, 4), "x5": -8, "x6": -1, "x7": 9}, LE, 0),
            ("", {"x4": F(1, 2), "x5": -12, "x6": F(-1, 2), "x7": 3}, LE, 0),
            ("", {"x6": 1}, LE, 1),
        ],
        {"x4": F(3, 4), "x5": -20, "x6": F(1, 2), "x7": -6},
    )
    sol = solve(m)
    assert sol.objective_value == F(5, 4)
    assert sol.primal == {"x4": 1, "x5": 0, "x6": 1, "x7": 0}


def test_structure_errors():
    b = LpBuilder("t", Sense.MAX)
    b.var("x")
    b.var("x")
    with pytest.raises(LpStructureError):
        b.build()
    b = LpBuilder("t", Sense.MAX)
    b.var("x")
    b.objective({"z": 1})
    with pytest.raises(LpStructureError):
        b.build()


def test_standardize_idempotent_and_standard():
    m = build(SYMMETRIC_LP, 4, VolumeSign.NEGATIVE)
    once = standardize(m)
    assert is_standard(once)
    assert standardize(once) == once
    free = lp(Sense.MIN, [("e", {"x": 1, "y": 1}, EQ, 2)], {"x": 1}, free={"x"})
    s = standardize(free)
    assert [v.name for v in s.variables] == ["x+", "x-", "y"]
    assert [c.name for c in s.constraints] == ["e:le", "e:ge"]


def test_dualize_small_example():
    m = lp(Sense.MAX, [("c1", {"x": 1, "y": 1}, LE, 4), ("c2", {"x": 1, "y": 3}, LE, 6)], {"x": 3, "y": 2})
    d = dualize(m)
    assert d.sense is Sense.MIN
    assert [v.name for v in d.variables] == ["c1", "c2"]
    assert solve(d).objective_value == 12


def test_dualize_reduced_is_dual_reduced():
    for d in range(2, 13):
        for sign in VolumeSign:
            dual = build(DUAL_REDUCED, d, sign)
            assert replace(dualize(build(REDUCED_LP, d, sign)), name=dual.name) == dual


@settings(max_examples=60, deadline=None)
@given(
    st.integers(1, 3),
    st.integers(1, 3),
    st.data(),
)
def test_double_dual_and_zero_gap(n, m, data):
    ints = st.integers(-4, 4)
    a = [[data.draw(ints) for _ in range(n)] for _ in range(m)]
    rhs = [data.draw(st.integers(0, 6)) for _ in range(m)]
    obj = [data.draw(ints) for _ in range(n)]
    b = LpBuilder("rand", Sense.MAX)
    names = [b.var(f"x{j}") for j in range(n)]
    for i in range(m):
        b.add(f"r{i}", dict(zip(names, a[i])), LE, rhs[i])
    b.add("box", {v: 1 for v in names}, LE, 10)
    b.objective(dict(zip(names, obj)))
    model = b.build()
    primal = solve(model)
    dual = solve(dualize(model))
    # rhs >= 0 keeps x = 0 feasible and the box keeps it bounded
    assert primal.optimal and dual.optimal
    assert primal.objective_value == dual.objective_value
    assert solve(dualize(dualize(model))).objective_value == primal.objective_value
    assert check_complementary_slackness(model, primal, dual)


def test_zero_gap_on_reduced_family():
    for d in range(3, 15):
        for sign in VolumeSign:
            primal = build(REDUCED_LP, d, sign)
            p, q = solve(primal), solve(dualize(primal))
            assert p.objective_value == q.objective_value
            assert check_complementary_slackness(primal, p, q)


def test_slackness_rejects_non_optimal_pair():
    m = lp(Sense.MAX, [("c1", {"x": 1, "y": 1}, LE, 4), ("c2", {"x": 1, "y": 3}, LE, 6)], {"x": 3, "y": 2})
    p = solve(m)
    # a feasible but suboptimal dual point with the same claimed value
    fake = LpSolution(Status.OPTIMAL, p.objective_value, {"c1": F(0), "c2": F(3)})
    assert not check_complementary_slackness(m, p, fake)
    with pytest.raises(LpStructureError):
        check_complementary_slackness(m, p, LpSolution(Status.INFEASIBLE))


def test_slackness_on_degenerate_optimum():
    # both rows tight at the vertex (1, 1) plus a redundant third through it
    m = lp(
        Sense.MAX,
        [("a", {"x": 1}, LE, 1), ("b", {"y": 1}, LE, 1), ("c", {"x": 1, "y": 1}, LE, 2)],
        {"x": 1, "y": 1},
    )
    p, q = solve(m), solve(dualize(m))
    assert p.objective_value == q.objective_value == 2
    assert check_complementary_slackness(m, p, q)


def test_returned_point_is_basic_and_within_pivot_bound():
    m = build(SYMMETRIC_LP, 6, VolumeSign.POSITIVE)
    sol = solve(m)
    assert m.is_feasible(sol.primal)
    std = standardize(m)
    n, rows = len(std.variables), len(std.constraints)
    assert sol.pivots <= 10 * (n + rows) ** 2 + 100
    assert sum(1 for v in sol.primal.values() if v) <= rows


def test_linear_system():
    x, free = solve_linear_system([[F(1), F(1)], [F(1), F(-1)]], [F(3), F(1)])
    assert x == [2, 1] and free == []
    x, free = solve_linear_system([[F(1), F(1)]], [F(2)])
    assert x == [2, 0] and free == [1]
    x, _ = solve_linear_system([[F(1)], [F(1)]], [F(1), F(2)])
    assert x is None


@pytest.mark.parametrize("family,d,sign,name", [
    (REDUCED_LP, 7, VolumeSign.NEGATIVE, "reduced_d7_negative.lp"),
    (DUAL_REDUCED, 7, VolumeSign.NEGATIVE, "dual_reduced_d7_negative.lp"),
    (FINAL_DUAL, 8, VolumeSign.POSITIVE, "final_dual_d8_positive.lp"),
    (SYMMETRIC_LP, 3, VolumeSign.POSITIVE, "symmetric_d3_positive.lp"),
])
def test_dump_golden(family, d, sign, name):
    assert dump(build(family, d, sign)) == (GOLDEN / name).read_text()
