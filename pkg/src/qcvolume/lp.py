"""Exact rational linear programming.

Models carry dense rational coefficient rows; :func:`solve` runs a two-phase
tableau simplex over :class:`~fractions.Fraction` with Bland's rule, so every
reported optimum is exact and the method terminates on degenerate programs.

:func:`dualize` follows the textbook recipe on the inequality form
``max c.x  s.t.  A x <= b, x >= 0``  ->  ``min b.y  s.t.  A^T y >= c, y >= 0``.
A minimization ``min c.x`` is first read as ``-(max (-c).x)``, so its dual is
returned as ``max (-b).y  s.t.  A^T y >= -c`` and keeps the primal's value.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exact import as_rational, render_rational

log = logging.getLogger(__name__)

__all__ = [
    "Sense",
    "Relation",
    "Status",
    "Variable",
    "Constraint",
    "LpModel",
    "LpBuilder",
    "LpSolution",
    "LpStructureError",
    "solve",
    "standardize",
    "dualize",
    "check_complementary_slackness",
    "dump",
    "solve_linear_system",
]


class Sense(enum.Enum):
    MIN = "minimize"
    MAX = "maximize"


class Relation(enum.Enum):
    LE = "<="
    GE = ">="
    EQ = "="


class Status(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


class LpStructureError(ValueError):
    """Malformed model, or a model/solution pair that does not fit together."""


@dataclass(frozen=True)
class Variable:
    name: str
    # 0 for x >= 0, None for a free variable
    lower: Fraction | None = Fraction(0)


@dataclass(frozen=True)
class Constraint:
    name: str
    coeffs: tuple[Fraction, ...]
    relation: Relation
    rhs: Fraction

    def lhs(self, x: Sequence[Fraction]) -> Fraction:
        return sum((a * v for a, v in zip(self.coeffs, x) if a), Fraction(0))

    def holds(self, x: Sequence[Fraction]) -> bool:
        value = self.lhs(x)
        if self.relation is Relation.LE:
            return value <= self.rhs
        if self.relation is Relation.GE:
            return value >= self.rhs
        return value == self.rhs


@dataclass(frozen=True)
class LpModel:
    name: str
    variables: tuple[Variable, ...]
    constraints: tuple[Constraint, ...]
    objective: tuple[Fraction, ...]
    sense: Sense

    def __post_init__(self):
        names = [v.name for v in self.variables]
        if len(set(names)) != len(names):
            raise LpStructureError(f"{self.name}: duplicate variable names")
        cnames = [c.name for c in self.constraints]
        if len(set(cnames)) != len(cnames):
            raise LpStructureError(f"{self.name}: duplicate constraint names")
        n = len(self.variables)
        if len(self.objective) != n:
            raise LpStructureError(f"{self.name}: objective has {len(self.objective)} entries, expected {n}")
        for c in self.constraints:
            if len(c.coeffs) != n:
                raise LpStructureError(f"{self.name}: constraint {c.name} has {len(c.coeffs)} coefficients, expected {n}")
        for v in self.variables:
            if v.lower is not None and v.lower != 0:
                raise LpStructureError(f"{self.name}: variable {v.name} lower bound must be 0 or free")

    @property
    def var_names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    def index(self, name: str) -> int:
        return self.var_names.index(name)

    def vector(self, values: Mapping[str, Fraction]) -> tuple[Fraction, ...]:
        return tuple(Fraction(values.get(v.name, 0)) for v in self.variables)

    def objective_value(self, values: Mapping[str, Fraction]) -> Fraction:
        x = self.vector(values)
        return sum((c * v for c, v in zip(self.objective, x)), Fraction(0))

    def is_feasible(self, values: Mapping[str, Fraction]) -> bool:
        x = self.vector(values)
        if any(v.lower is not None and xv < 0 for v, xv in zip(self.variables, x)):
            return False
        return all(c.holds(x) for c in self.constraints)

    def with_constraint(self, name: str, coeffs: Mapping[str, Fraction | int], relation: Relation, rhs) -> "LpModel":
        row = _dense(self.var_names, coeffs)
        extra = Constraint(name, row, relation, as_rational(rhs))
        return replace(self, constraints=self.constraints + (extra,))


def _dense(names: Sequence[str], coeffs: Mapping[str, Fraction | int]) -> tuple[Fraction, ...]:
    unknown = set(coeffs) - set(names)
    if unknown:
        raise LpStructureError(f"unknown variables {sorted(unknown)}")
    return tuple(as_rational(coeffs.get(n, 0)) for n in names)


class LpBuilder:
    """Accumulates variables and named rows, then freezes into an :class:`LpModel`."""

    def __init__(self, name: str, sense: Sense):
        self.name = name
        self.sense = sense
        self._vars: list[Variable] = []
        self._rows: list[tuple[str, dict[str, Fraction], Relation, Fraction]] = []
        self._objective: dict[str, Fraction] = {}

    def var(self, name: str, *, free: bool = False) -> str:
        self._vars.append(Variable(name, None if free else Fraction(0)))
        return name

    def add(self, name: str, coeffs: Mapping[str, Fraction | int], relation: Relation, rhs) -> None:
        self._rows.append((name, dict(coeffs), relation, as_rational(rhs)))

    def objective(self, coeffs: Mapping[str, Fraction | int]) -> None:
        self._objective = dict(coeffs)

    def build(self) -> LpModel:
        names = [v.name for v in self._vars]
        return LpModel(
            name=self.name,
            variables=tuple(self._vars),
            constraints=tuple(Constraint(n, _dense(names, c), rel, rhs) for n, c, rel, rhs in self._rows),
            objective=_dense(names, self._objective),
            sense=self.sense,
        )


@dataclass(frozen=True)
class LpSolution:
    status: Status
    objective_value: Fraction | None = None
    primal: dict[str, Fraction] = field(default_factory=dict)
    basis: tuple[str, ...] = ()
    pivots: int = 0

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL


# -- standard form and dual -------------------------------------------------


def _split_name(name: str, part: str) -> str:
    return f"{name}{part}"


def standardize(model: LpModel) -> LpModel:
    """Inequality form: every row ``<=``, every variable ``>= 0``.

    ``>=`` rows are negated, ``=`` rows become an opposing ``<=`` pair
    (``name:le`` / ``name:ge``), free variables ``x`` split into ``x+ - x-``.
    Sense and objective meaning are preserved.  Idempotent.
    """
    columns: list[tuple[str, int, int]] = []  # (name, source index, sign)
    for i, v in enumerate(model.variables):
        if v.lower is None:
            columns.append((_split_name(v.name, "+"), i, 1))
            columns.append((_split_name(v.name, "-"), i, -1))
        else:
            columns.append((v.name, i, 1))

    def remap(row: Sequence[Fraction]) -> tuple[Fraction, ...]:
        return tuple(row[i] * s for _, i, s in columns)

    rows: list[Constraint] = []
    for c in model.constraints:
        coeffs = remap(c.coeffs)
        if c.relation is Relation.LE:
            rows.append(Constraint(c.name, coeffs, Relation.LE, c.rhs))
        elif c.relation is Relation.GE:
            rows.append(Constraint(c.name, tuple(-a for a in coeffs), Relation.LE, -c.rhs))
        else:
            rows.append(Constraint(f"{c.name}:le", coeffs, Relation.LE, c.rhs))
            rows.append(Constraint(f"{c.name}:ge", tuple(-a for a in coeffs), Relation.LE, -c.rhs))
    return LpModel(
        name=model.name,
        variables=tuple(Variable(n) for n, _, _ in columns),
        constraints=tuple(rows),
        objective=remap(model.objective),
        sense=model.sense,
    )


def is_standard(model: LpModel) -> bool:
    return all(v.lower is not None for v in model.variables) and all(
        c.relation is Relation.LE for c in model.constraints
    )


def dualize(model: LpModel, name: str | None = None) -> LpModel:
    """Dual program with one variable per (standardized) row, named after it.

    Dual rows are named after the primal variables.  The returned model has
    the same optimal value as ``model``.
    """
    std = standardize(model)
    m = len(std.constraints)
    neg = std.sense is Sense.MIN
    c = [-a for a in std.objective] if neg else list(std.objective)
    rows = []
    for j, v in enumerate(std.variables):
        col = tuple(std.constraints[i].coeffs[j] for i in range(m))
        rows.append(Constraint(v.name, col, Relation.GE, c[j]))
    b = [con.rhs for con in std.constraints]
    return LpModel(
        name=name or f"dual({model.name})",
        variables=tuple(Variable(con.name) for con in std.constraints),
        constraints=tuple(rows),
        objective=tuple(-x for x in b) if neg else tuple(b),
        sense=Sense.MAX if neg else Sense.MIN,
    )


# -- simplex ----------------------------------------------------------------


class _Tableau:
    """Sparse tableau in canonical form for ``min cost.x, rows x = rhs, x >= 0``."""

    def __init__(self, rows: list[dict[int, Fraction]], rhs: list[Fraction], basis: list[int], ncols: int):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.ncols = ncols
        self.cost: dict[int, Fraction] = {}
        self.value = Fraction(0)  # minus the current objective
        self.pivots = 0

    def set_cost(self, cost: Mapping[int, Fraction]) -> None:
        reduced = {j: v for j, v in cost.items() if v}
        value = Fraction(0)
        for i, bj in enumerate(self.basis):
            cb = cost.get(bj, 0)
            if not cb:
                continue
            for j, a in self.rows[i].items():
                r = reduced.get(j, 0) - cb * a
                if r:
                    reduced[j] = r
                else:
                    reduced.pop(j, None)
            value -= cb * self.rhs[i]
        self.cost = reduced
        self.value = value

    def pivot(self, r: int, j: int) -> None:
        prow = self.rows[r]
        p = prow[j]
        if p != 1:
            prow = {k: v / p for k, v in prow.items()}
            self.rows[r] = prow
            self.rhs[r] /= p
        prhs = self.rhs[r]
        for i, row in enumerate(self.rows):
            if i == r:
                continue
            f = row.get(j)
            if not f:
                continue
            for k, v in prow.items():
                nv = row.get(k, 0) - f * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
            self.rhs[i] -= f * prhs
        f = self.cost.get(j)
        if f:
            for k, v in prow.items():
                nv = self.cost.get(k, 0) - f * v
                if nv:
                    self.cost[k] = nv
                else:
                    self.cost.pop(k, None)
            self.value -= f * prhs
        self.basis[r] = j
        self.pivots += 1

    def run(self, allowed: set[int] | None = None, limit: int | None = None) -> bool:
        """Bland's rule iterations; returns False when unbounded."""
        while True:
            entering = min(
                (j for j, v in self.cost.items() if v < 0 and (allowed is None or j in allowed)),
                default=None,
            )
            if entering is None:
                return True
            best = None
            for i, row in enumerate(self.rows):
                a = row.get(entering)
                if a is None or a <= 0:
                    continue
                ratio = self.rhs[i] / a
                key = (ratio, self.basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
            if best is None:
                return False
            self.pivot(best[1], entering)
            if limit is not None and self.pivots > limit:
                raise RuntimeError(f"simplex exceeded {limit} pivots")


def solve(model: LpModel) -> LpSolution:
    """Exact optimum of ``model`` (two-phase simplex, Bland's rule)."""
    # structural columns (free variables split), then slack/surplus, then artificials
    col_src: list[tuple[int, int]] = []
    for i, v in enumerate(model.variables):
        col_src.append((i, 1))
        if v.lower is None:
            col_src.append((i, -1))
    nstruct = len(col_src)

    rows: list[dict[int, Fraction]] = []
    rhs: list[Fraction] = []
    basis: list[int] = []
    ncols = nstruct
    pending_art: list[int] = []
    for con in model.constraints:
        row = {}
        for j, (i, s) in enumerate(col_src):
            a = con.coeffs[i] * s
            if a:
                row[j] = a
        b = con.rhs
        rel = con.relation
        if b < 0:
            row = {j: -a for j, a in row.items()}
            b = -b
            rel = {Relation.LE: Relation.GE, Relation.GE: Relation.LE, Relation.EQ: Relation.EQ}[rel]
        if rel is Relation.LE:
            row[ncols] = Fraction(1)
            basis.append(ncols)
            ncols += 1
        elif rel is Relation.GE:
            row[ncols] = Fraction(-1)
            ncols += 1
            basis.append(-1)
            pending_art.append(len(rows))
        else:
            basis.append(-1)
            pending_art.append(len(rows))
        rows.append(row)
        rhs.append(b)
    first_art = ncols
    for r in pending_art:
        rows[r][ncols] = Fraction(1)
        basis[r] = ncols
        ncols += 1

    tab = _Tableau(rows, rhs, basis, ncols)
    m = len(rows)
    limit = 10 * (m + ncols) ** 2 + 100

    if ncols > first_art:
        tab.set_cost({j: Fraction(1) for j in range(first_art, ncols)})
        tab.run(limit=limit)
        if tab.value != 0:
            return LpSolution(Status.INFEASIBLE, pivots=tab.pivots)
        # drive zero-level artificials out of the basis; drop redundant rows
        keep = []
        for i in range(m):
            if tab.basis[i] >= first_art:
                j = min((k for k, v in tab.rows[i].items() if k < first_art and v), default=None)
                if j is None:
                    continue
                tab.pivot(i, j)
            keep.append(i)
        tab.rows = [{k: v for k, v in tab.rows[i].items() if k < first_art} for i in keep]
        tab.rhs = [tab.rhs[i] for i in keep]
        tab.basis = [tab.basis[i] for i in keep]

    sign = 1 if model.sense is Sense.MIN else -1
    cost = {}
    for j, (i, s) in enumerate(col_src):
        if model.objective[i]:
            cost[j] = sign * s * model.objective[i]
    tab.set_cost(cost)
    allowed = set(range(first_art))
    if not tab.run(allowed=allowed, limit=limit):
        return LpSolution(Status.UNBOUNDED, pivots=tab.pivots)

    colval = [Fraction(0)] * nstruct
    for i, bj in enumerate(tab.basis):
        if bj < nstruct:
            colval[bj] = tab.rhs[i]
    values = [Fraction(0)] * len(model.variables)
    for j, (i, s) in enumerate(col_src):
        values[i] += s * colval[j]
    primal = {v.name: x for v, x in zip(model.variables, values)}
    objective = sum((c * x for c, x in zip(model.objective, values)), Fraction(0))
    names = []
    for bj in tab.basis:
        if bj < nstruct:
            i, s = col_src[bj]
            base = model.variables[i].name
            names.append(base if model.variables[i].lower is not None else base + ("+" if s > 0 else "-"))
        else:
            names.append(f"_slack{bj - nstruct}")
    return LpSolution(Status.OPTIMAL, objective, primal, tuple(names), tab.pivots)


# -- optimality certificate -------------------------------------------------


def check_complementary_slackness(primal_model: LpModel, primal_sol: LpSolution, dual_sol: LpSolution) -> bool:
    """Exact complementary-slackness check for ``primal_model`` and its dual.

    ``dual_sol`` must be a solution of ``dualize(primal_model)``.  Positive
    dual values require tight primal rows; positive primal values require
    tight dual rows.  Differing objective values return ``False``.
    """
    if not (primal_sol.optimal and dual_sol.optimal):
        raise LpStructureError("complementary slackness needs two optimal solutions")
    std = standardize(primal_model)
    dual = dualize(primal_model)
    missing = [v.name for v in dual.variables if v.name not in dual_sol.primal]
    if missing or set(primal_sol.primal) != set(primal_model.var_names):
        raise LpStructureError("solutions do not match the primal/dual variable sets")
    if primal_sol.objective_value != dual_sol.objective_value:
        log.warning("objective values differ: %s vs %s", primal_sol.objective_value, dual_sol.objective_value)
        return False

    x = []
    for v in primal_model.variables:
        val = primal_sol.primal[v.name]
        if v.lower is None:
            x += [max(val, Fraction(0)), max(-val, Fraction(0))]
        else:
            x.append(val)
    y = dual.vector(dual_sol.primal)
    for yi, con in zip(y, std.constraints):
        if yi > 0 and con.lhs(x) != con.rhs:
            return False
    for xj, con in zip(x, dual.constraints):
        if xj > 0 and con.lhs(y) != con.rhs:
            return False
    return True


# -- exact linear algebra ---------------------------------------------------


def solve_linear_system(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> tuple[list[Fraction] | None, list[int]]:
    """Gauss-Jordan elimination over the rationals.

    Returns ``(solution, free_columns)``; ``solution`` is ``None`` for an
    inconsistent system, and free columns are set to zero in it.
    """
    n = len(rows[0]) if rows else 0
    mat = [list(map(Fraction, r)) + [Fraction(b)] for r, b in zip(rows, rhs)]
    pivots: list[int] = []
    r = 0
    for col in range(n):
        pr = next((i for i in range(r, len(mat)) if mat[i][col]), None)
        if pr is None:
            continue
        mat[r], mat[pr] = mat[pr], mat[r]
        p = mat[r][col]
        mat[r] = [v / p for v in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][col]:
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(col)
        r += 1
    if any(row[-1] for row in mat[r:]):
        return None, []
    sol = [Fraction(0)] * n
    for i, col in enumerate(pivots):
        sol[col] = mat[i][-1]
    free = [c for c in range(n) if c not in pivots]
    return sol, free


# -- text dump --------------------------------------------------------------


def _term(coef: Fraction, name: str, first: bool) -> str:
    sign = "-" if coef < 0 else ("" if first else "+")
    mag = abs(coef)
    body = name if mag == 1 else f"{render_rational(mag)} {name}"
    if first:
        return f"{sign}{body}"
    return f"{sign} {body}"


def _expr(coeffs: Iterable[Fraction], names: Sequence[str]) -> str:
    parts = []
    for c, n in zip(coeffs, names):
        if c:
            parts.append(_term(c, n, not parts))
    return " ".join(parts) if parts else "0"


def dump(model: LpModel) -> str:
    """Deterministic human-readable listing in declaration order."""
    names = model.var_names
    lines = [f"model {model.name}", model.sense.value, f"  obj: {_expr(model.objective, names)}", "subject to"]
    for c in model.constraints:
        lines.append(f"  {c.name}: {_expr(c.coeffs, names)} {c.relation.value} {render_rational(c.rhs)}")
    lines.append("bounds")
    for v in model.variables:
        lines.append(f"  {v.name} free" if v.lower is None else f"  {v.name} >= 0")
    lines.append("end")
    return "\n".join(lines) + "\n"
