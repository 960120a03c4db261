import itertools

import pytest
from hypothesis import given

from conftest import formulas
from dynsat.model import Assignment, Formula, cost
from dynsat.oracle import (
    OracleRefused,
    brute_force_breakcount,
    brute_force_costs,
    brute_force_optimum,
)
from dynsat.wcnf import load


def test_examples(traffic_path):
    assert brute_force_optimum(Formula(0, (), 1)).optimal_cost == 0
    two = brute_force_optimum(Formula.build([(3, [1]), (5, [-1])]))
    assert (two.optimal_cost, two.assignment, two.evaluated_count) == (3, Assignment((False,)), 2)
    tl = brute_force_optimum(load(traffic_path))
    assert tl.optimal_cost == 0 and tl.evaluated_count == 256


def test_refuses_large():
    with pytest.raises(OracleRefused):
        brute_force_optimum(Formula(25, (), 1))
    with pytest.raises(OracleRefused):
        brute_force_costs(Formula(25, (), 1))


def test_breakcount_examples():
    f = Formula.build([(9, [2])], num_vars=3)
    m = Assignment((False, True, False))
    assert brute_force_breakcount(f, m, 2) == 9
    assert brute_force_breakcount(f, m, 3) == 0


@given(formulas(max_vars=7, max_clauses=14))
def test_optimum_is_minimum(f):
    res = brute_force_optimum(f)
    all_costs = [cost(f, Assignment(tuple(reversed(b))))
                 for b in itertools.product((False, True), repeat=f.num_vars)]
    assert res.optimal_cost == min(all_costs)
    assert cost(f, res.assignment) == res.optimal_cost


def test_block_boundary():
    # 17 variables spans two enumeration blocks; optimum sits in the upper block
    f = Formula.build([(5, [17])] + [(1, [-v]) for v in range(1, 17)])
    res = brute_force_optimum(f)
    assert res.optimal_cost == 0 and res.assignment[17]
