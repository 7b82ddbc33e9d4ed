import itertools
import random

import pytest
from hypothesis import given, settings

from fusedpath.errors import TooLarge
from fusedpath.fusing import lambda_max
from fusedpath.oracle import (LatticeViolation, brute_force_fixed, grid_minimize,
                              midpoint_check, optimal_set, sweep, verify_path)
from fusedpath.path import solve_full_path
from fusedpath.synthetic import abs_instance, constant_instance, random_instance

from conftest import instances


class TestBruteForce:
    def test_instance_a_lambda_2(self, inst_a):
        obj, x = brute_force_fixed(inst_a, 2, "full")
        assert obj == 4
        assert x == [3, 3]
        assert sorted(map(tuple, optimal_set(inst_a, 2))) == [(1, 1), (1, 3), (3, 3)]

    def test_instance_a_lambda_0(self, inst_a):
        assert brute_force_fixed(inst_a, 0, "full") == (0, [1, 3])

    @pytest.mark.parametrize("lam", [0, 1, 7])
    def test_single_node(self, lam):
        assert brute_force_fixed(abs_instance([1], [2]), lam, "full") == (0, [1])

    def test_too_large(self):
        inst = abs_instance(list(range(6)))
        with pytest.raises(TooLarge):
            brute_force_fixed(inst, 1, "full")
        brute_force_fixed(inst, 1, "maximal")

    def test_bad_mode(self, inst_a):
        with pytest.raises(ValueError):
            brute_force_fixed(inst_a, 1, "fast")

    @given(instances(max_n=4, max_bps=2))
    @settings(max_examples=40, deadline=None)
    def test_modes_agree(self, inst):
        for lam in (0, 1, 3, lambda_max(inst)):
            full = brute_force_fixed(inst, lam, "full")
            assert brute_force_fixed(inst, lam, "maximal") == full
            assert brute_force_fixed(inst, lam, "objective")[0] == full[0]

    @given(instances(max_n=3, max_bps=2))
    @settings(max_examples=30, deadline=None)
    def test_dp_below_every_candidate(self, inst):
        obj, _ = brute_force_fixed(inst, 2, "objective")
        for combo in itertools.product(inst.grid, repeat=inst.n):
            assert inst.objective(list(combo), 2) >= obj

    @pytest.mark.parametrize("seed", range(5))
    def test_midpoints_never_better(self, seed):
        inst = random_instance(random.Random(seed), n_range=(2, 3), q_range=(1, 2))
        for lam in range(lambda_max(inst) + 1):
            assert midpoint_check(inst, lam)

    def test_grid_minimize_non_pwl(self):
        grid = [-1, 0, 1]
        table = [[1, 0, 1], [4, 1, 0]]
        assert grid_minimize(table, grid, 0) == (0, [0, 1])
        assert grid_minimize(table, grid, 5) == (1, [1, 1])

    def test_lattice_violation_is_assertion(self):
        assert issubclass(LatticeViolation, AssertionError)


class TestSweep:
    def test_instance_a(self, inst_a):
        rep = sweep(inst_a, 5, "full")
        assert rep.fusing_events == [2]
        assert [e.solution for e in rep.entries] == [[1, 3], [1, 3]] + [[3, 3]] * 4
        assert [e.optimal_count for e in rep.entries][:3] == [1, 1, 3]

    def test_identical(self):
        rep = sweep(constant_instance(3, 1), 4)
        assert rep.fusing_events == []

    def test_single_node(self):
        rep = sweep(abs_instance([2]), 3)
        assert {tuple(e.solution) for e in rep.entries} == {(2,)}

    def test_negative(self, inst_a):
        with pytest.raises(ValueError):
            sweep(inst_a, -1)


class TestVerify:
    def test_clean(self, inst_a):
        rep = verify_path(solve_full_path(inst_a), sweep(inst_a, 8, "full"))
        assert rep.ok and rep.mismatches == []

    def test_fault_injection(self, inst_a):
        path = solve_full_path(inst_a)
        baseline = sweep(inst_a, 5)
        baseline.entries[3].solution = [1, 3]
        rep = verify_path(path, baseline)
        assert len(rep.mismatches) == 1
        assert rep.mismatches[0].lam == 3 and rep.mismatches[0].node == 0
        assert "lambda=3" in str(rep.mismatches[0])

    def test_objective_mode_large(self):
        inst = random_instance(random.Random(9), n_range=(50, 50), q_range=(1, 3))
        path = solve_full_path(inst)
        rep = verify_path(path, sweep(inst, 30, "objective"))
        assert rep.mismatches == []
