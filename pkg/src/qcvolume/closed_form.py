"""Closed-form extreme volumes of d-quasi-copulas.

For a dimension ``d`` and a sign, the extreme box volume is found by a short
scan: build the binomial coefficient vector ``c``, form the running averages

    w_i = (c_k + c_{k-1} + ... + c_{k-i+1} -/+ 1) / (i + 1),

and stop at the first ``i`` with ``w_i >= c_{k-i}`` (``c_0 = 0``).  The optimal
box is ``[i0/(i0+1), 1]^d`` with a symmetric grid built from a 0/1 pattern of
level increments.

The same scan solves the general auxiliary LP ``min w`` over the data
``(c, e, alpha)``; see :func:`solve_auxiliary`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exact import as_rational, binomial

__all__ = [
    "VolumeSign",
    "UnsupportedDimensionError",
    "AuxiliaryInstance",
    "AuxiliarySolution",
    "ClosedFormSolution",
    "coeffs",
    "dual_rhs",
    "w_sequence",
    "find_i0",
    "solve_auxiliary",
    "extreme_volume",
    "q_levels",
    "compare_min_max",
    "terminal_w",
]


class VolumeSign(enum.Enum):
    NEGATIVE = "negative"
    POSITIVE = "positive"

    @property
    def alpha(self) -> int:
        # offset in the auxiliary LP: sum(l) = w + alpha
        return 1 if self is VolumeSign.NEGATIVE else -1

    @classmethod
    def parse(cls, text: str) -> "VolumeSign":
        try:
            return cls(text.lower())
        except ValueError:
            raise ValueError(f"sign must be 'negative' or 'positive', got {text!r}") from None


class UnsupportedDimensionError(ValueError):
    pass


SUPPORTED_RULE = (
    "Negative requires d >= 7 for the closed form (d=3..6 served analytically); "
    "Positive requires d >= 3; d=2 unsupported"
)


def _check_dim(d: int, sign: VolumeSign, *, allow_small_negative: bool = False) -> None:
    if not isinstance(d, int) or isinstance(d, bool):
        raise TypeError(f"dimension must be an int, got {d!r}")
    low = 3 if (sign is VolumeSign.POSITIVE or allow_small_negative) else 7
    if d < low:
        raise UnsupportedDimensionError(f"d={d} unsupported for {sign.value}: {SUPPORTED_RULE}")


def coeffs(d: int, sign: VolumeSign) -> tuple[int, ...]:
    """The nondecreasing binomial vector ``(c_1, ..., c_k)``.

    Negative: ``k = floor(d/2)``, d >= 7.  Positive: ``k = floor((d+1)/2) - 1``, d >= 3.
    """
    _check_dim(d, sign)
    n = d - 1
    h = d // 2
    if sign is VolumeSign.NEGATIVE:
        if d % 2 == 0:
            out = [binomial(n, j) for j in range(0, h)]
        elif d % 4 == 1:
            out = [binomial(n, j) for j in range(1, h, 2) for _ in (0, 1)]
        else:
            out = [binomial(n, j) for j in range(1, h - 1, 2) for _ in (0, 1)]
            out.append(binomial(n, h))
    else:
        if d % 2 == 0:
            out = [binomial(n, j) for j in range(1, h)]
        elif d % 4 == 1:
            out = [binomial(n, 0)]
            out += [binomial(n, j) for j in range(2, h - 1, 2) for _ in (0, 1)]
            out.append(binomial(n, h))
        else:
            out = [binomial(n, 0)]
            out += [binomial(n, j) for j in range(2, h, 2) for _ in (0, 1)]
    return tuple(out)


def dual_rhs(d: int, sign: VolumeSign) -> tuple[int, ...]:
    """Right-hand sides ``+/-C(d-1, j-1)`` of the reduced dual rows, j = 1..d-1.

    Negative uses ``(-1)^(d+j+1) C(d-1, j-1)``, Positive ``(-1)^(d+j) C(d-1, j-1)``.
    The positive entries are the multiset of :func:`coeffs`, the negative ones
    are the ``e`` data of the auxiliary LP.
    """
    flip = 1 if sign is VolumeSign.NEGATIVE else 0
    return tuple(
        (-1) ** (d + j + flip) * binomial(d - 1, j - 1) for j in range(1, d)
    )


def w_sequence(c: Sequence[Fraction | int], alpha: Fraction | int) -> tuple[Fraction, ...]:
    """``w_i = (sum of the i largest-index c's - alpha) / (i + 1)`` for i = 1..k."""
    k = len(c)
    out = []
    running = Fraction(0)
    for i in range(1, k + 1):
        running += c[k - i]
        out.append((running - alpha) / (i + 1))
    return tuple(out)


def find_i0(c: Sequence[Fraction | int], w: Sequence[Fraction]) -> int:
    """Smallest ``i`` in 1..k with ``w_i >= c_{k-i}`` where ``c_0 = 0``."""
    k = len(c)
    for i in range(1, k + 1):
        threshold = c[k - i - 1] if k - i >= 1 else 0
        if w[i - 1] >= threshold:
            return i
    raise AssertionError("w_k >= 0 = c_0 must hold; inputs violate the hypotheses")


@dataclass(frozen=True)
class AuxiliaryInstance:
    """Data ``(c, e, alpha)`` of the auxiliary LP.

    ``c`` positive and nondecreasing, ``e`` negative, ``-c_k < alpha <= c_k``.
    """

    c: tuple[Fraction, ...]
    e: tuple[Fraction, ...] = ()
    alpha: Fraction = Fraction(0)

    def __post_init__(self):
        c = tuple(as_rational(x) for x in self.c)
        e = tuple(as_rational(x) for x in self.e)
        alpha = as_rational(self.alpha)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "e", e)
        object.__setattr__(self, "alpha", alpha)
        if not c:
            raise ValueError("c must be nonempty")
        if any(x <= 0 for x in c):
            raise ValueError("c entries must be positive")
        if any(x > y for x, y in zip(c, c[1:])):
            raise ValueError("c must be nondecreasing")
        if any(x >= 0 for x in e):
            raise ValueError("e entries must be negative")
        if not (-c[-1] < alpha <= c[-1]):
            raise ValueError(f"alpha={alpha} outside (-c_k, c_k]")

    @property
    def k(self) -> int:
        return len(self.c)

    @property
    def r(self) -> int:
        return len(self.e)


@dataclass(frozen=True)
class AuxiliarySolution:
    i0: int
    w: Fraction
    y: tuple[Fraction, ...]
    z: tuple[Fraction, ...]


def solve_auxiliary(inst: AuxiliaryInstance) -> AuxiliarySolution:
    ws = w_sequence(inst.c, inst.alpha)
    i0 = find_i0(inst.c, ws)
    w = ws[i0 - 1]
    k = inst.k
    y = tuple(Fraction(0) if i < k - i0 else inst.c[i] - w for i in range(k))
    return AuxiliarySolution(i0=i0, w=w, y=y, z=(Fraction(0),) * inst.r)


@dataclass(frozen=True)
class ClosedFormSolution:
    """Extreme volume together with its symmetric realization.

    For negative volumes in d = 3..6 the values come from the small-dimension
    solver: ``i0`` is ``None``, ``coeffs``/``w_sequence`` are empty and the box
    is ``[box_edge_a, box_edge_b]^d`` with ``box_edge_b < 1``.
    """

    d: int
    sign: VolumeSign
    coeffs: tuple[int, ...]
    w_sequence: tuple[Fraction, ...]
    i0: int | None
    volume: Fraction
    box_edge_a: Fraction
    delta: tuple[Fraction, ...]
    q_levels: tuple[Fraction, ...]
    box_edge_b: Fraction = Fraction(1)
    small_dim: bool = field(default=False)


def q_levels(delta: Sequence[Fraction]) -> tuple[Fraction, ...]:
    levels = [Fraction(0)]
    for step in delta:
        levels.append(levels[-1] + step)
    return tuple(levels)


def _delta(d: int, sign: VolumeSign, c: Sequence[int], i0: int) -> tuple[Fraction, ...]:
    k = len(c)
    threshold = c[k - i0 - 1] if k - i0 >= 1 else 0
    step = Fraction(1, i0 + 1)
    # odd j for (negative, even d) and (positive, odd d); even j otherwise
    want_odd = (sign is VolumeSign.NEGATIVE) == (d % 2 == 0)
    out = []
    for j in range(1, d + 1):
        on = j == d or ((j % 2 == 1) == want_odd and binomial(d - 1, j - 1) > threshold)
        out.append(step if on else Fraction(0))
    return tuple(out)


def extreme_volume(d: int, sign: VolumeSign) -> ClosedFormSolution:
    """Maximal negative (signed, < 0) or maximal positive box volume in dimension d."""
    _check_dim(d, sign, allow_small_negative=True)
    if sign is VolumeSign.NEGATIVE and d < 7:
        from .models import solve_small_min

        small = solve_small_min(d)
        delta = tuple(b - a for a, b in zip(small.q_levels, small.q_levels[1:]))
        return ClosedFormSolution(
            d=d, sign=sign, coeffs=(), w_sequence=(), i0=None, volume=small.volume,
            box_edge_a=small.a, delta=delta, q_levels=small.q_levels,
            box_edge_b=small.b, small_dim=True,
        )
    c = coeffs(d, sign)
    ws = w_sequence(c, sign.alpha)
    i0 = find_i0(c, ws)
    w = ws[i0 - 1]
    delta = _delta(d, sign, c, i0)
    return ClosedFormSolution(
        d=d,
        sign=sign,
        coeffs=c,
        w_sequence=ws,
        i0=i0,
        volume=-w if sign is VolumeSign.NEGATIVE else w,
        box_edge_a=Fraction(i0, i0 + 1),
        delta=delta,
        q_levels=q_levels(delta),
    )


def compare_min_max(d: int) -> tuple[int, Fraction | None]:
    """``(i0_neg - i0_pos, w_pos - w_neg or None)`` for even d >= 8."""
    if d % 2 or d < 8:
        raise UnsupportedDimensionError(f"compare_min_max needs even d >= 8, got {d}")
    neg = extreme_volume(d, VolumeSign.NEGATIVE)
    pos = extreme_volume(d, VolumeSign.POSITIVE)
    diff = neg.i0 - pos.i0
    if diff != 0:
        return diff, None
    return diff, pos.volume + neg.volume


def terminal_w(d: int, sign: VolumeSign) -> Fraction:
    """The last w value, from the binomial half-sum identities."""
    _check_dim(d, sign)
    if sign is VolumeSign.NEGATIVE:
        return Fraction(2 ** (d - 2) - 1, d // 2 + 1)
    if d % 2 == 0:
        return Fraction(2 ** (d - 1), d)
    return Fraction(2 ** (d - 2), (d + 1) // 2)
