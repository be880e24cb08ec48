"""Builders for the extreme-volume linear programs and their reductions.

Families, from largest to smallest:

``FULL``          grid LP over a box: variables ``a_k, b_k`` and one ``q_I`` per vertex
``SYMMETRIC``     same LP restricted to permutation-symmetric points ``(a, b, q_0..q_d)``
``REDUCED``       redundant rows dropped, levels replaced by increments ``delta_j``
``DUAL_REDUCED``  dual of ``REDUCED`` (variables ``y1, l1..ld, y2, y3``)
``DUAL_BRANCH``   dual after eliminating ``y1, y2`` with ``l_d`` pinned to one branch
``FINAL_DUAL``    dual in ``(l_1..l_{d-1}, w)`` with ``w = (d-1) y3``

Negative volumes are minimized, positive ones maximized.  Dual models of a
minimization are stored as ``max -(...)`` so every model in a chain has the
same optimal value.

Variable order is fixed per family (the listing order above each builder)
so :func:`qcvolume.lp.dump` output is reproducible.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .closed_form import AuxiliaryInstance, VolumeSign, dual_rhs
from .exact import binomial
from .grid import bitstring, edges
from .lp import LpBuilder, LpModel, LpSolution, Relation, Sense, Status, dualize, solve_linear_system

__all__ = [
    "Family",
    "LpFamily",
    "FULL_LP",
    "SYMMETRIC_LP",
    "REDUCED_LP",
    "DUAL_REDUCED",
    "FINAL_DUAL",
    "dual_branch",
    "build",
    "build_auxiliary_lp",
    "SmallDimSolution",
    "small_min_candidates",
    "solve_small_min",
    "recover_primal_by_slackness",
]

LE, GE, EQ = Relation.LE, Relation.GE, Relation.EQ


class Family(enum.Enum):
    FULL = "FullLp"
    SYMMETRIC = "SymmetricLp"
    REDUCED = "ReducedLp"
    DUAL_REDUCED = "DualReduced"
    DUAL_BRANCH = "SimplifiedDualBranch"
    FINAL_DUAL = "FinalDual"


@dataclass(frozen=True)
class LpFamily:
    kind: Family
    l_d_zero: bool | None = None

    def __str__(self) -> str:
        if self.kind is Family.DUAL_BRANCH:
            return f"{self.kind.value}(l_d_zero={self.l_d_zero})"
        return self.kind.value


FULL_LP = LpFamily(Family.FULL)
SYMMETRIC_LP = LpFamily(Family.SYMMETRIC)
REDUCED_LP = LpFamily(Family.REDUCED)
DUAL_REDUCED = LpFamily(Family.DUAL_REDUCED)
FINAL_DUAL = LpFamily(Family.FINAL_DUAL)


def dual_branch(l_d_zero: bool) -> LpFamily:
    return LpFamily(Family.DUAL_BRANCH, l_d_zero)


def _primal_sense(sign: VolumeSign) -> Sense:
    return Sense.MIN if sign is VolumeSign.NEGATIVE else Sense.MAX


def _dual_objective(sign: VolumeSign, coeffs: dict[str, int]) -> tuple[Sense, dict[str, int]]:
    # a minimizing primal has dual value -(min b.y) = max -(b.y)
    if sign is VolumeSign.NEGATIVE:
        return Sense.MAX, {k: -v for k, v in coeffs.items()}
    return Sense.MIN, coeffs


def _full(d: int, sign: VolumeSign) -> LpModel:
    # a1..ad, b1..bd, q_<bits> in multi-index order
    lp = LpBuilder(f"FullLp(d={d}, {sign.value})", _primal_sense(sign))
    a = [lp.var(f"a{k + 1}") for k in range(d)]
    b = [lp.var(f"b{k + 1}") for k in range(d)]
    q = [lp.var(f"q{bitstring(i, d)}") for i in range(1 << d)]
    lp.objective({q[i]: (-1) ** (d - i.bit_count()) for i in range(1 << d)})
    for k in range(d):
        # a_k < b_k relaxed to <=
        lp.add(f"order{k + 1}", {a[k]: 1, b[k]: -1}, LE, 0)
        lp.add(f"cap{k + 1}", {b[k]: 1}, LE, 1)
    for i, j, l in edges(d):
        tag = f"{bitstring(i, d)}->{bitstring(j, d)}"
        lp.add(f"mono[{tag}]", {q[j]: 1, q[i]: -1}, GE, 0)
        lp.add(f"lip[{tag}]", {q[j]: 1, q[i]: -1, b[l]: -1, a[l]: 1}, LE, 0)
    for i in range(1 << d):
        x = [b[k] if i >> k & 1 else a[k] for k in range(d)]
        row = {q[i]: Fraction(1)}
        for name in x:
            row[name] = row.get(name, 0) - 1
        lp.add(f"G[{bitstring(i, d)}]", row, GE, 1 - d)
        for k, name in enumerate(x):
            lp.add(f"H[{bitstring(i, d)},{k + 1}]", {q[i]: 1, name: -1}, LE, 0)
    return lp.build()


def _symmetric(d: int, sign: VolumeSign) -> LpModel:
    # a, b, q0..qd
    lp = LpBuilder(f"SymmetricLp(d={d}, {sign.value})", _primal_sense(sign))
    lp.var("a")
    lp.var("b")
    q = [lp.var(f"q{i}") for i in range(d + 1)]
    lp.objective({q[i]: (-1) ** (d - i) * binomial(d, i) for i in range(d + 1)})
    lp.add("order", {"a": 1, "b": -1}, LE, 0)
    lp.add("cap", {"b": 1}, LE, 1)
    for i in range(1, d + 1):
        lp.add(f"mono{i}", {q[i]: 1, q[i - 1]: -1}, GE, 0)
        lp.add(f"lip{i}", {q[i]: 1, q[i - 1]: -1, "b": -1, "a": 1}, LE, 0)
    for i in range(d + 1):
        row = {q[i]: 1}
        if d - i:
            row["a"] = -(d - i)
        if i:
            row["b"] = -i
        lp.add(f"G{i}", row, GE, 1 - d)
        lp.add(f"H{i}", {q[i]: 1, ("a" if i < d else "b"): -1}, LE, 0)
    return lp.build()


def _reduced(d: int, sign: VolumeSign) -> LpModel:
    # a, b, q0, delta1..deltad; rows named after their dual variables
    lp = LpBuilder(f"ReducedLp(d={d}, {sign.value})", _primal_sense(sign))
    lp.var("a")
    lp.var("b")
    lp.var("q0")
    delta = [lp.var(f"delta{j}") for j in range(1, d + 1)]
    lp.objective({delta[j - 1]: (-1) ** (d + j) * binomial(d - 1, j - 1) for j in range(1, d + 1)})
    lp.add("y1", {"b": 1}, LE, 1)
    for i in range(1, d + 1):
        lp.add(f"l{i}", {"a": 1, "b": -1, delta[i - 1]: 1}, LE, 0)
    lp.add("y2", {"q0": 1, "a": -1, **{delta[i]: 1 for i in range(d - 1)}}, LE, 0)
    lp.add("y3", {"q0": 1, "b": -d, **{x: 1 for x in delta}}, GE, 1 - d)
    return lp.build()


def _dual_reduced(d: int, sign: VolumeSign) -> LpModel:
    # y1, l1..ld, y2, y3; rows named after the primal variables
    sense, obj = _dual_objective(sign, {"y1": 1, "y3": d - 1})
    lp = LpBuilder(f"DualReduced(d={d}, {sign.value})", sense)
    lp.var("y1")
    l = [lp.var(f"l{i}") for i in range(1, d + 1)]
    lp.var("y2")
    lp.var("y3")
    lp.objective(obj)
    lp.add("a", {**{x: 1 for x in l}, "y2": -1}, GE, 0)
    lp.add("b", {"y1": 1, **{x: -1 for x in l}, "y3": d}, GE, 0)
    lp.add("q0", {"y2": 1, "y3": -1}, GE, 0)
    rhs = dual_rhs(d, sign)
    for j in range(1, d):
        lp.add(f"delta{j}", {l[j - 1]: 1, "y2": 1, "y3": -1}, GE, rhs[j - 1])
    lp.add(f"delta{d}", {l[d - 1]: 1, "y3": -1}, GE, -sign.alpha)
    return lp.build()


def _dual_branch(d: int, sign: VolumeSign, l_d_zero: bool) -> LpModel:
    # l1..ld, y3
    if l_d_zero and sign is VolumeSign.POSITIVE:
        raise ValueError("the l_d = 0 branch only exists for negative volumes")
    sense, obj = _dual_objective(sign, {"y3": d - 1})
    tag = "l_d=0" if l_d_zero else "l_d-y3=" + ("-1" if sign is VolumeSign.NEGATIVE else "1")
    lp = LpBuilder(f"SimplifiedDualBranch[{tag}](d={d}, {sign.value})", sense)
    l = [lp.var(f"l{i}") for i in range(1, d + 1)]
    lp.var("y3")
    lp.objective(obj)
    lp.add("b", {**{x: -1 for x in l}, "y3": d}, EQ, 0)
    rhs = dual_rhs(d, sign)
    for j in range(1, d):
        lp.add(f"delta{j}", {l[j - 1]: 1, "y3": d - 1}, GE, rhs[j - 1])
    lp.add(f"delta{d}", {l[d - 1]: 1, "y3": -1}, GE, -sign.alpha)
    if l_d_zero:
        lp.add("branch", {l[d - 1]: 1}, EQ, 0)
    else:
        lp.add("branch", {l[d - 1]: 1, "y3": -1}, EQ, -sign.alpha)
    return lp.build()


def _final_dual(d: int, sign: VolumeSign) -> LpModel:
    # l1..l(d-1), w
    sense, obj = _dual_objective(sign, {"w": 1})
    lp = LpBuilder(f"FinalDual(d={d}, {sign.value})", sense)
    l = [lp.var(f"l{i}") for i in range(1, d)]
    lp.var("w")
    lp.objective(obj)
    lp.add("sum", {**{x: -1 for x in l}, "w": 1}, EQ, -sign.alpha)
    rhs = dual_rhs(d, sign)
    for j in range(1, d):
        lp.add(f"delta{j}", {l[j - 1]: 1, "w": 1}, GE, rhs[j - 1])
    return lp.build()


def build(family: LpFamily, d: int, sign: VolumeSign) -> LpModel:
    if d < 2:
        raise ValueError(f"{family}: d must be >= 2, got {d}")
    kind = family.kind
    if kind is Family.FULL:
        if d > 6:
            raise ValueError(f"FullLp has 2^d vertex variables; only d <= 6 is built (got {d})")
        return _full(d, sign)
    if kind is Family.SYMMETRIC:
        return _symmetric(d, sign)
    if kind is Family.REDUCED:
        return _reduced(d, sign)
    if kind is Family.DUAL_REDUCED:
        return _dual_reduced(d, sign)
    if kind is Family.DUAL_BRANCH:
        if family.l_d_zero is None:
            raise ValueError("SimplifiedDualBranch needs l_d_zero")
        return _dual_branch(d, sign, family.l_d_zero)
    if kind is Family.FINAL_DUAL:
        return _final_dual(d, sign)
    raise ValueError(f"unknown family {family}")


def build_auxiliary_lp(inst: AuxiliaryInstance) -> LpModel:
    """``min w`` s.t. ``sum y + sum z = w + alpha``, ``y_i + w >= c_i``, ``z_i + w >= e_i``."""
    lp = LpBuilder(f"Auxiliary(k={inst.k}, r={inst.r})", Sense.MIN)
    lp.var("w")
    y = [lp.var(f"y{i}") for i in range(1, inst.k + 1)]
    z = [lp.var(f"z{i}") for i in range(1, inst.r + 1)]
    lp.objective({"w": 1})
    lp.add("sum", {**{v: 1 for v in y + z}, "w": -1}, EQ, inst.alpha)
    for v, c in zip(y, inst.c):
        lp.add(f"c{v[1:]}", {v: 1, "w": 1}, GE, c)
    for v, e in zip(z, inst.e):
        lp.add(f"e{v[1:]}", {v: 1, "w": 1}, GE, e)
    return lp.build()


# -- negative volumes in d = 3..6 -------------------------------------------


@dataclass(frozen=True)
class SmallDimSolution:
    d: int
    a: Fraction
    b: Fraction
    q_levels: tuple[Fraction, ...]
    volume: Fraction
    y3: Fraction
    l: tuple[Fraction, ...]


@dataclass(frozen=True)
class Candidate:
    tight: tuple[int, ...]  # rows j with l_j + (d-1) y3 = rhs_j
    y3: Fraction
    l: tuple[Fraction, ...]  # l_1..l_{d-1}
    feasible: bool


def small_min_candidates(d: int) -> list[Candidate]:
    """Active-set candidates of the ``l_d = 0`` dual branch.

    Rows with a negative right-hand side stay slack (``l_j = 0``); among the
    positive ones, the tight set is the ``t`` largest for ``t = all .. 1``.
    Then ``d*y3 = sum_T (rhs_j - (d-1) y3)`` fixes ``y3``.
    """
    rhs = dual_rhs(d, VolumeSign.NEGATIVE)
    positive = sorted((j for j in range(1, d) if rhs[j - 1] > 0), key=lambda j: (rhs[j - 1], j))
    out = []
    for t in range(len(positive), 0, -1):
        tight = tuple(sorted(positive[-t:]))
        y3 = Fraction(sum(rhs[j - 1] for j in tight), d + t * (d - 1))
        l = tuple(rhs[j - 1] - (d - 1) * y3 if j in tight else Fraction(0) for j in range(1, d))
        ok = (
            0 <= y3 <= 1
            and all(x >= 0 for x in l)
            and all(l[j - 1] + (d - 1) * y3 >= rhs[j - 1] for j in range(1, d))
        )
        out.append(Candidate(tight, y3, l, ok))
    return out


def solve_small_min(d: int) -> SmallDimSolution:
    """Maximal negative volume for d = 3..6 by active-set enumeration."""
    if d not in (3, 4, 5, 6):
        raise ValueError(f"solve_small_min covers d = 3..6, got {d}")
    feasible = [c for c in small_min_candidates(d) if c.feasible]
    best = min(feasible, key=lambda c: c.y3)
    y3 = best.y3
    dual = {"y1": Fraction(0), "y2": d * y3, "y3": y3, f"l{d}": Fraction(0)}
    dual.update({f"l{j}": v for j, v in enumerate(best.l, start=1)})
    value = -(d - 1) * y3
    sol = LpSolution(status=Status.OPTIMAL, objective_value=value, primal=dual)
    a, b, q0, delta = recover_primal_by_slackness(d, VolumeSign.NEGATIVE, sol)
    levels = [q0]
    for step in delta:
        levels.append(levels[-1] + step)
    return SmallDimSolution(d, a, b, tuple(levels), value, y3, best.l + (Fraction(0),))


# -- primal recovery --------------------------------------------------------


def recover_primal_by_slackness(
    d: int, sign: VolumeSign, dual_sol: LpSolution
) -> tuple[Fraction, Fraction, Fraction, tuple[Fraction, ...]]:
    """Primal ``(a, b, q0, delta)`` of ``REDUCED`` from an optimal ``DUAL_REDUCED`` point.

    Rows with a positive dual value are made tight, variables whose dual row is
    slack are fixed at zero, and the remaining equations are solved exactly.
    Undetermined coordinates are set to zero; the result is checked for
    feasibility and for matching the dual objective.
    """
    if not dual_sol.optimal:
        raise ValueError("primal recovery needs an optimal dual solution")
    primal = _reduced(d, sign)
    dual = dualize(primal)
    y = dual.vector(dual_sol.primal)
    n = len(primal.variables)
    eq_rows: list[Sequence[Fraction]] = []
    eq_rhs: list[Fraction] = []
    for yi, con in zip(y, primal.constraints):
        if yi > 0:
            eq_rows.append(con.coeffs)
            eq_rhs.append(con.rhs)
    for j, con in enumerate(dual.constraints):
        if con.lhs(y) != con.rhs:
            unit = [Fraction(0)] * n
            unit[j] = Fraction(1)
            eq_rows.append(unit)
            eq_rhs.append(Fraction(0))
    x, _free = solve_linear_system(eq_rows, eq_rhs)
    if x is None:
        raise ValueError("slackness conditions are inconsistent; dual point is not optimal")
    values = dict(zip(primal.var_names, x))
    if not primal.is_feasible(values) or primal.objective_value(values) != dual_sol.objective_value:
        raise ValueError("slackness conditions do not pin down an optimal primal point")
    return values["a"], values["b"], values["q0"], tuple(values[f"delta{j}"] for j in range(1, d + 1))
