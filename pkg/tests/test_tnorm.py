from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from smtop.tnorm import (
    DEFAULT_GRID, apply, check_axioms, minimum_tnorm, product_tnorm, table_tnorm,
)

unit = st.fractions(min_value=0, max_value=1)


def test_product_values():
    t = product_tnorm()
    assert apply(t, F(1, 2), F(1, 2)) == F(1, 4)
    assert apply(t, 1, 1) == 1
    assert t(F(1, 3), 1) == F(1, 3)


def test_minimum_values():
    t = minimum_tnorm()
    assert apply(t, F(1, 3), F(2, 3)) == F(1, 3)
    assert apply(t, 1, 1) == 1


def test_out_of_range_rejected():
    with pytest.raises(ValueError):
        apply(product_tnorm(), 2, 0)
    with pytest.raises(ValueError):
        apply(minimum_tnorm(), F(1, 2), "-1/2")


def test_default_grid_is_eighths():
    assert DEFAULT_GRID[0] == 0 and DEFAULT_GRID[-1] == 1
    assert len(DEFAULT_GRID) == 9


@pytest.mark.parametrize("t", [product_tnorm(), minimum_tnorm()])
def test_builtins_pass_all_axioms(t):
    report = check_axioms(t)
    assert report.ok, report.lines()
    report = check_axioms(t, grid=[0, F(1, 4), F(1, 2), F(3, 4), 1])
    assert report.ok


def test_grid_preconditions():
    with pytest.raises(ValueError):
        check_axioms(product_tnorm(), grid=[])
    with pytest.raises(ValueError):
        check_axioms(product_tnorm(), grid=[0, F(1, 2)])


def test_table_tnorm_interpolation():
    # table encoding the product on a coarse grid: bilinear interpolation of
    # a*b on cell corners reproduces a*b exactly
    grid = [0, F(1, 2), 1]
    values = [[a * b for b in map(F, grid)] for a in map(F, grid)]
    t = table_tnorm(grid, values)
    assert apply(t, F(1, 4), F(3, 4)) == F(3, 16)
    assert check_axioms(t).ok


def test_table_violating_t4():
    grid = [0, 1]
    t = table_tnorm(grid, [[0, 0], [0, 0]])
    report = check_axioms(t)
    res = report.result("T-IV")
    assert not res.passed
    assert res.witness[:2] == (1, 1)
    assert not report.result("T-V").passed


def test_table_violating_monotonicity():
    t = table_tnorm([0, F(1, 2), 1],
                    [[0, 1, 0], [0, 0, 0], [0, 0, 1]])
    report = check_axioms(t)
    res = report.result("T-II")
    assert not res.passed
    a, b, c, d, vab, vcd = res.witness
    assert c >= a and d >= b
    assert apply(t, c, d) < apply(t, a, b)


def test_bad_table_shapes():
    with pytest.raises(ValueError):
        table_tnorm([0, F(1, 2)], [[0, 0], [0, 0]])  # grid must end at 1
    with pytest.raises(ValueError):
        table_tnorm([0, 1], [[0, 0]])  # matrix not square


@given(unit, unit)
def test_product_min_commute(a, b):
    assert apply(product_tnorm(), a, b) == apply(product_tnorm(), b, a)
    assert apply(minimum_tnorm(), a, b) == apply(minimum_tnorm(), b, a)


@given(unit, unit, unit, unit)
def test_product_monotone(a, b, c, d):
    lo_a, hi_a = min(a, c), max(a, c)
    lo_b, hi_b = min(b, d), max(b, d)
    assert apply(product_tnorm(), hi_a, hi_b) >= apply(product_tnorm(), lo_a, lo_b)
    assert apply(minimum_tnorm(), hi_a, hi_b) >= apply(minimum_tnorm(), lo_a, lo_b)
