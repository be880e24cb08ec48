import csv
import random
from fractions import Fraction as F
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from qcvolume.closed_form import (
    AuxiliaryInstance,
    UnsupportedDimensionError,
    VolumeSign,
    coeffs,
    compare_min_max,
    dual_rhs,
    extreme_volume,
    find_i0,
    solve_auxiliary,
    terminal_w,
    w_sequence,
)
from qcvolume.exact import binomial, parse_rational
from qcvolume.lp import solve
from qcvolume.models import build_auxiliary_lp

NEG, POS = VolumeSign.NEGATIVE, VolumeSign.POSITIVE
GOLDEN = Path(__file__).parent / "golden"


def golden_rows(name):
    with open(GOLDEN / name, newline="") as fh:
        return [(int(r["d"]), int(r["i0"]), parse_rational(r["volume"])) for r in csv.DictReader(fh)]


@pytest.mark.parametrize("d,sign,expected", [
    (7, NEG, (6, 6, 20)),
    (8, NEG, (1, 7, 21, 35)),
    (9, NEG, (8, 8, 56, 56)),
    (8, POS, (7, 21, 35)),
    (9, POS, (1, 28, 28, 70)),
    (3, POS, (1,)),
])
def test_coeff_examples(d, sign, expected):
    assert coeffs(d, sign) == expected


@pytest.mark.parametrize("sign,low", [(NEG, 7), (POS, 3)])
def test_coeffs_are_the_sorted_positive_dual_rhs(sign, low):
    for d in range(low, 80):
        c = coeffs(d, sign)
        assert c == tuple(sorted(x for x in dual_rhs(d, sign) if x > 0))
        expected_len = d // 2 if sign is NEG else (d + 1) // 2 - 1
        assert len(c) == expected_len


@pytest.mark.parametrize("d,sign", [(2, NEG), (2, POS), (6, NEG), (0, POS)])
def test_unsupported_dims(d, sign):
    with pytest.raises(UnsupportedDimensionError):
        coeffs(d, sign)


def test_extreme_volume_rejects_d2_with_rule_text():
    with pytest.raises(UnsupportedDimensionError, match="d=2 unsupported"):
        extreme_volume(2, NEG)


def test_auxiliary_examples():
    sol = solve_auxiliary(AuxiliaryInstance(c=(6, 6, 20), alpha=1))
    assert (sol.i0, sol.w) == (1, F(19, 2))
    assert sol.y == (0, 0, F(21, 2))
    sol = solve_auxiliary(AuxiliaryInstance(c=(7, 21, 35), alpha=-1))
    assert (sol.i0, sol.w) == (2, F(19))


@pytest.mark.parametrize("bad", [
    dict(c=()),
    dict(c=(2, 1)),
    dict(c=(0, 1)),
    dict(c=(1, 2), e=(0,)),
    dict(c=(1, 2), alpha=3),
    dict(c=(1, 2), alpha=-2),
])
def test_auxiliary_instance_validation(bad):
    with pytest.raises(ValueError):
        AuxiliaryInstance(**bad)


def random_instance(rng: random.Random) -> AuxiliaryInstance:
    k = rng.randint(1, 7)
    r = rng.randint(0, 4)
    c = sorted(F(rng.randint(1, 60), rng.randint(1, 4)) for _ in range(k))
    e = [-F(rng.randint(1, 60), rng.randint(1, 4)) for _ in range(r)]
    top = c[-1]
    alpha = F(rng.randint(-(top.numerator * 8) + 1, top.numerator * 8), 8 * top.denominator)
    alpha = max(min(alpha, top), -top + F(1, 8 * top.denominator))
    return AuxiliaryInstance(tuple(c), tuple(e), alpha)


def scan_checks(inst: AuxiliaryInstance, i0: int) -> None:
    """i0 is the unique crossing: w_i < c_{k-i} before it, and w_i >= c_{k-i} from it on."""
    c, k = inst.c, inst.k
    w = w_sequence(c, inst.alpha)
    below = [w[i - 1] < (c[k - i - 1] if k - i >= 1 else 0) for i in range(1, k + 1)]
    assert below == [True] * (i0 - 1) + [False] * (k - i0 + 1)
    padded = (0,) + c
    assert [i for i in range(1, k + 1) if padded[k - i] <= w[i - 1] < padded[k - i + 1]] == [i0]
    # w_{i+1} - w_i has the sign of c_{k-i} - w_i
    for i in range(1, k):
        assert (w[i] > w[i - 1]) == (c[k - i - 1] > w[i - 1])
        assert (w[i] == w[i - 1]) == (c[k - i - 1] == w[i - 1])
    # so the sequence rises up to i0 and never rises after it
    assert w[i0 - 1] == max(w)


def test_auxiliary_random_instances_against_simplex():
    rng = random.Random(20240601)
    for _ in range(200):
        inst = random_instance(rng)
        sol = solve_auxiliary(inst)
        lp = solve(build_auxiliary_lp(inst))
        assert lp.optimal
        assert lp.objective_value == sol.w
        scan_checks(inst, sol.i0)
        # the closed-form point is feasible in the LP
        point = {"w": sol.w, **{f"y{i + 1}": v for i, v in enumerate(sol.y)}, **{f"z{i + 1}": v for i, v in enumerate(sol.z)}}
        assert build_auxiliary_lp(inst).is_feasible(point)


@settings(max_examples=150, deadline=None)
@given(
    st.lists(st.fractions(min_value=F(1, 10), max_value=100, max_denominator=12), min_size=1, max_size=9),
    st.fractions(min_value=-1, max_value=1, max_denominator=12),
)
def test_scan_properties(c, scale):
    c = tuple(sorted(c))
    alpha = scale * c[-1]
    if alpha == -c[-1]:
        alpha = c[-1]
    inst = AuxiliaryInstance(c, (), alpha)
    scan_checks(inst, find_i0(c, w_sequence(c, alpha)))


@pytest.mark.parametrize("name,sign,low", [("table1_negative.csv", NEG, 7), ("table2_positive.csv", POS, 3)])
def test_tables(name, sign, low):
    rows = golden_rows(name)
    assert [r[0] for r in rows] == list(range(low, 69))
    for d, i0, vol in rows:
        sol = extreme_volume(d, sign)
        assert (sol.i0, sol.volume) == (i0, vol), d


def test_worked_examples():
    sol = extreme_volume(7, NEG)
    half = F(1, 2)
    assert sol.box_edge_a == half
    assert sol.delta == (0, 0, 0, half, 0, 0, half)
    assert sol.q_levels == (0, 0, 0, 0, half, half, half, 1)
    sol = extreme_volume(8, POS)
    third = F(1, 3)
    assert sol.box_edge_a == F(2, 3)
    assert sol.delta == (0, 0, 0, third, 0, third, 0, third)
    assert sol.q_levels == (0, 0, 0, 0, third, third, 2 * third, 2 * third, 1)


def delta_oracle(d, sign):
    """Increments from the dual rows: rows with rhs above the cutoff get 1/(i0+1), plus j = d."""
    sol = extreme_volume(d, sign)
    c = coeffs(d, sign)
    k = len(c)
    cut = c[k - sol.i0 - 1] if k - sol.i0 >= 1 else 0
    rhs = dual_rhs(d, sign)
    step = F(1, sol.i0 + 1)
    return tuple(step if j == d or rhs[j - 1] > cut else F(0) for j in range(1, d + 1))


@pytest.mark.parametrize("sign,low", [(NEG, 7), (POS, 3)])
def test_delta_pattern_matches_rhs_oracle(sign, low):
    for d in range(low, 70):
        sol = extreme_volume(d, sign)
        assert sol.delta == delta_oracle(d, sign), d
        assert sol.q_levels[0] == 0 and sol.q_levels[-1] <= 1
        assert sum(sol.delta) == sol.q_levels[-1]


def test_small_negative_dims_delegate():
    sol = extreme_volume(3, NEG)
    assert sol.small_dim and sol.i0 is None
    assert (sol.volume, sol.box_edge_a, sol.box_edge_b) == (F(-4, 5), F(2, 5), F(4, 5))


def test_compare_min_max_sweep():
    for d in range(8, 201, 2):
        diff, gap = compare_min_max(d)
        assert diff in (0, 1), d
        if diff == 0:
            i0 = extreme_volume(d, POS).i0
            assert gap == F(2, i0 + 1), d
        else:
            assert gap is None


def test_compare_min_max_domain():
    with pytest.raises(UnsupportedDimensionError):
        compare_min_max(9)
    with pytest.raises(UnsupportedDimensionError):
        compare_min_max(6)


def test_terminal_w_identities():
    # oracle: w_k straight from the definition with explicit binomial sums
    for d in range(3, 201):
        c = coeffs(d, POS)
        assert terminal_w(d, POS) == F(sum(c) + 1, len(c) + 1)
        half = sum(binomial(d - 1, j) for j in range(0, d, 2))
        assert half == 2 ** (d - 2)
    for d in range(7, 201):
        c = coeffs(d, NEG)
        assert terminal_w(d, NEG) == F(sum(c) - 1, len(c) + 1)
        assert sum(c) == 2 ** (d - 2)
