"""Tables, plot records and the oracle verification suite."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, replace
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Callable, Iterable

from .closed_form import ClosedFormSolution, UnsupportedDimensionError, VolumeSign, extreme_volume
from .exact import render_rational
from .lp import check_complementary_slackness, dualize, solve
from .models import DUAL_REDUCED, FULL_LP, REDUCED_LP, SYMMETRIC_LP, build

LOG_DIGITS = 20


def log2_abs(value: Fraction, digits: int = LOG_DIGITS) -> Decimal:
    """``log2 |value|`` to ``digits`` significant digits, without float conversion."""
    p, q = abs(value.numerator), value.denominator
    if p == 0:
        raise ValueError("log of zero")
    # split |value| = m * 2^k with 1 <= m < 2 using bit lengths
    k = p.bit_length() - q.bit_length()
    num, den = (p, q << k) if k >= 0 else (p << -k, q)
    if num < den:
        k -= 1
        num <<= 1
    with localcontext() as ctx:
        ctx.prec = digits + 25
        frac = (Decimal(num) / Decimal(den)).ln() / Decimal(2).ln()
        total = Decimal(k) + frac
        ctx.prec = digits
        return +total


@dataclass(frozen=True)
class TableRow:
    d: int
    i0: int
    volume: Fraction
    volume_log2_abs: Decimal


def _closed_range(start: int, stop: int, sign: VolumeSign) -> None:
    low = 7 if sign is VolumeSign.NEGATIVE else 3
    bad = [d for d in range(start, stop + 1) if d < low]
    if bad:
        raise UnsupportedDimensionError(
            f"{sign.value} closed form needs d >= {low}; unsupported: {', '.join(map(str, bad))}"
        )


def table_rows(start: int, stop: int, sign: VolumeSign) -> list[TableRow]:
    if start > stop:
        raise ValueError(f"empty range {start}..{stop}")
    _closed_range(start, stop, sign)
    rows = []
    for d in range(start, stop + 1):
        sol = extreme_volume(d, sign)
        rows.append(TableRow(d, sol.i0, sol.volume, log2_abs(sol.volume)))
    return rows


def rows_csv(rows: Iterable[TableRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["d", "i0", "volume"])
    for r in rows:
        w.writerow([r.d, r.i0, render_rational(r.volume)])
    return buf.getvalue()


def rows_json(rows: Iterable[TableRow]) -> str:
    payload = [
        {"d": r.d, "i0": r.i0, "volume": render_rational(r.volume), "volume_log2_abs": str(r.volume_log2_abs)}
        for r in rows
    ]
    return json.dumps(payload, indent=2) + "\n"


def plot_records(start: int, stop: int) -> list[dict]:
    """Per-dimension i0 values, log2 volumes and ``i0_min - i0_max``."""
    if start > stop:
        return []
    _closed_range(start, stop, VolumeSign.NEGATIVE)
    out = []
    for d in range(start, stop + 1):
        neg = extreme_volume(d, VolumeSign.NEGATIVE)
        pos = extreme_volume(d, VolumeSign.POSITIVE)
        out.append({
            "d": d,
            "i0_min": neg.i0,
            "i0_max": pos.i0,
            "log2_abs_v_min": str(log2_abs(neg.volume)),
            "log2_abs_v_max": str(log2_abs(pos.volume)),
            "i0_diff": neg.i0 - pos.i0,
        })
    return out


PLOT_FIELDS = ["d", "i0_min", "i0_max", "log2_abs_v_min", "log2_abs_v_max", "i0_diff"]


def records_csv(records: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=PLOT_FIELDS, lineterminator="\n")
    w.writeheader()
    w.writerows(records)
    return buf.getvalue()


def solution_dict(sol: ClosedFormSolution) -> dict:
    return {
        "d": sol.d,
        "sign": sol.sign.value,
        "i0": sol.i0,
        "volume": render_rational(sol.volume),
        "box": {"a": render_rational(sol.box_edge_a), "b": render_rational(sol.box_edge_b)},
        "delta": [render_rational(x) for x in sol.delta],
        "q_levels": [render_rational(x) for x in sol.q_levels],
        "coeffs": list(sol.coeffs),
        "w_sequence": [render_rational(x) for x in sol.w_sequence],
    }


# -- verification -----------------------------------------------------------


@dataclass(frozen=True)
class Check:
    label: str
    d: int
    sign: VolumeSign
    ok: bool
    expected: Fraction | None
    got: Fraction | None

    def line(self) -> str:
        head = f"{'PASS' if self.ok else 'FAIL'} {self.label} d={self.d} {self.sign.value}"
        if self.ok:
            return f"{head} = {render_rational(self.got)}"
        exp = "-" if self.expected is None else render_rational(self.expected)
        got = "-" if self.got is None else render_rational(self.got)
        return f"{head}: expected {exp}, got {got}"


def run_verification(
    reduced_max: int,
    full_max: int,
    closed_form: Callable[[int, VolumeSign], ClosedFormSolution] = extreme_volume,
) -> list[Check]:
    """Closed form vs exact simplex, strong duality, and the symmetrization chain."""
    if full_max > 6:
        raise ValueError("full grid LP is limited to d <= 6")
    checks: list[Check] = []
    for sign in VolumeSign:
        for d in range(3, reduced_max + 1):
            primal = build(REDUCED_LP, d, sign)
            psol = solve(primal)
            expected = closed_form(d, sign).volume
            checks.append(Check("ReducedLp=closed-form", d, sign, psol.objective_value == expected,
                                expected, psol.objective_value))
            dual = build(DUAL_REDUCED, d, sign)
            dsol = solve(dual)
            same = dual == replace(dualize(primal), name=dual.name)
            ok = same and dsol.objective_value == psol.objective_value and check_complementary_slackness(primal, psol, dsol)
            checks.append(Check("DualReduced=ReducedLp+slackness", d, sign, ok, psol.objective_value, dsol.objective_value))
        for d in range(3, full_max + 1):
            full = solve(build(FULL_LP, d, sign)).objective_value
            sym = solve(build(SYMMETRIC_LP, d, sign)).objective_value
            red = solve(build(REDUCED_LP, d, sign)).objective_value
            checks.append(Check("FullLp=SymmetricLp", d, sign, full == sym, sym, full))
            checks.append(Check("SymmetricLp=ReducedLp", d, sign, sym == red, red, sym))
    return checks

