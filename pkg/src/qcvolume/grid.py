"""Quasi-copula values on the 2^d vertex grid of a box.

A multi-index ``I`` in {0,1}^d is stored as an int whose bit ``k`` is ``I_{k+1}``
(coordinate ``k`` counted from zero).  Serialized bitstrings are written
coordinate 1 first, i.e. ``"I_1 I_2 ... I_d"``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

from .exact import as_rational, binomial, parse_rational, render_rational

__all__ = [
    "Box",
    "GridQuasiCopula",
    "Violation",
    "GridStructureError",
    "norm1",
    "index_sign",
    "bitstring",
    "parse_bitstring",
    "edges",
    "g_lower",
    "h_upper",
    "volume",
    "level_volume",
    "validate",
    "symmetric_grid",
    "permute",
    "grid_to_json",
    "grid_from_json",
]


class GridStructureError(ValueError):
    pass


def norm1(index: int) -> int:
    return index.bit_count()


def index_sign(index: int, d: int) -> int:
    return -1 if (d - norm1(index)) % 2 else 1


def bitstring(index: int, d: int) -> str:
    return "".join("1" if index >> k & 1 else "0" for k in range(d))


def parse_bitstring(text: str) -> int:
    if not text or set(text) - {"0", "1"}:
        raise GridStructureError(f"bad multi-index {text!r}")
    return sum(1 << k for k, ch in enumerate(text) if ch == "1")


def edges(d: int) -> Iterator[tuple[int, int, int]]:
    """All ``(I, J, l)`` with ``J - I`` the unit multi-index in coordinate ``l``."""
    for l in range(d):
        bit = 1 << l
        for i in range(1 << d):
            if not i & bit:
                yield i, i | bit, l


@dataclass(frozen=True)
class Box:
    a: tuple[Fraction, ...]
    b: tuple[Fraction, ...]

    def __post_init__(self):
        a = tuple(as_rational(x) for x in self.a)
        b = tuple(as_rational(x) for x in self.b)
        if len(a) != len(b) or not a:
            raise GridStructureError("box needs matching nonempty a and b")
        for k, (lo, hi) in enumerate(zip(a, b)):
            if not (0 <= lo < hi <= 1):
                raise GridStructureError(f"coordinate {k + 1}: need 0 <= a < b <= 1, got [{lo}, {hi}]")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def cube(cls, a, b, d: int) -> "Box":
        return cls((as_rational(a),) * d, (as_rational(b),) * d)

    @property
    def d(self) -> int:
        return len(self.a)

    def vertex(self, index: int) -> tuple[Fraction, ...]:
        return tuple(self.b[k] if index >> k & 1 else self.a[k] for k in range(self.d))


@dataclass(frozen=True)
class GridQuasiCopula:
    box: Box
    q: Mapping[int, Fraction]

    @property
    def d(self) -> int:
        return self.box.d

    def value(self, index: int) -> Fraction:
        try:
            return self.q[index]
        except KeyError:
            raise GridStructureError(f"missing vertex {bitstring(index, self.d)}") from None

    def require_complete(self) -> None:
        n = 1 << self.d
        missing = [i for i in range(n) if i not in self.q]
        if missing:
            raise GridStructureError(
                f"{len(missing)} missing vertices, first {bitstring(missing[0], self.d)}"
            )


def g_lower(x: Sequence[Fraction]) -> Fraction:
    return sum(x, Fraction(0)) - len(x) + 1


def h_upper(x: Sequence[Fraction]) -> Fraction:
    return min(x)


def volume(grid: GridQuasiCopula) -> Fraction:
    """Alternating vertex sum ``sum_I sign(I) q_I``."""
    grid.require_complete()
    d = grid.d
    total = Fraction(0)
    for i in range(1 << d):
        total += index_sign(i, d) * grid.q[i]
    return total


def level_volume(levels: Sequence[Fraction]) -> Fraction:
    """Volume of a symmetric grid from its per-level values ``q_0..q_d``."""
    d = len(levels) - 1
    return sum(((-1) ** (d - i) * binomial(d, i) * q for i, q in enumerate(levels)), Fraction(0))


@dataclass(frozen=True)
class Violation:
    kind: str  # "lower-bound" | "upper-bound" | "monotonicity" | "lipschitz"
    where: str  # bitstring, or "I->J@l" for an edge
    lhs: Fraction
    rhs: Fraction

    def __str__(self) -> str:
        return f"{self.kind} at {self.where}: {render_rational(self.lhs)} <= {render_rational(self.rhs)} fails"


def validate(grid: GridQuasiCopula) -> list[Violation]:
    """Every failed vertex-bound and edge constraint of the grid system."""
    grid.require_complete()
    d, box, q = grid.d, grid.box, grid.q
    out = []
    for i in range(1 << d):
        x = box.vertex(i)
        lo = max(Fraction(0), g_lower(x))
        hi = h_upper(x)
        if not lo <= q[i]:
            out.append(Violation("lower-bound", bitstring(i, d), lo, q[i]))
        if not q[i] <= hi:
            out.append(Violation("upper-bound", bitstring(i, d), q[i], hi))
    widths = [hi - lo for lo, hi in zip(box.a, box.b)]
    for i, j, l in edges(d):
        step = q[j] - q[i]
        if step < 0:
            out.append(Violation("monotonicity", _edge_label(i, j, l, d), Fraction(0), step))
        if step > widths[l]:
            out.append(Violation("lipschitz", _edge_label(i, j, l, d), step, widths[l]))
    return out


def _edge_label(i: int, j: int, l: int, d: int) -> str:
    return f"{bitstring(i, d)}->{bitstring(j, d)}@{l + 1}"


def symmetric_grid(sol) -> GridQuasiCopula:
    """Grid of a :class:`~qcvolume.closed_form.ClosedFormSolution`: ``q_I = q_levels[|I|]``."""
    d = sol.d
    if len(sol.q_levels) != d + 1:
        raise GridStructureError(f"need {d + 1} levels, got {len(sol.q_levels)}")
    box = Box.cube(sol.box_edge_a, sol.box_edge_b, d)
    q = {i: sol.q_levels[norm1(i)] for i in range(1 << d)}
    return GridQuasiCopula(box, q)


def permute(grid: GridQuasiCopula, perm: Sequence[int]) -> GridQuasiCopula:
    """Relabel axes: new coordinate ``k`` is old coordinate ``perm[k]``."""
    d = grid.d
    if sorted(perm) != list(range(d)):
        raise ValueError(f"not a permutation of 0..{d - 1}: {perm}")
    box = Box(tuple(grid.box.a[p] for p in perm), tuple(grid.box.b[p] for p in perm))
    q = {}
    for i, v in grid.q.items():
        j = 0
        for k, p in enumerate(perm):
            if i >> p & 1:
                j |= 1 << k
        q[j] = v
    return GridQuasiCopula(box, q)


def grid_to_json(grid: GridQuasiCopula) -> str:
    grid.require_complete()
    d = grid.d
    payload = {
        "d": d,
        "a": [render_rational(x) for x in grid.box.a],
        "b": [render_rational(x) for x in grid.box.b],
        "q": {bitstring(i, d): render_rational(grid.q[i]) for i in range(1 << d)},
    }
    return json.dumps(payload, indent=1)


def grid_from_json(text: str) -> GridQuasiCopula:
    data = json.loads(text)
    d = data["d"]
    box = Box(tuple(map(parse_rational, data["a"])), tuple(map(parse_rational, data["b"])))
    if box.d != d:
        raise GridStructureError(f"box has {box.d} coordinates, header says d={d}")
    q = {}
    for key, val in data["q"].items():
        if len(key) != d:
            raise GridStructureError(f"multi-index {key!r} has wrong length for d={d}")
        q[parse_bitstring(key)] = parse_rational(val)
    return GridQuasiCopula(box, q)
