import pytest
from hypothesis import given, settings

from fusedpath.errors import OverlappingInsert, UncoveredLambda
from fusedpath.fusing import find_all_fusing_values, lambda_max
from fusedpath.instance import ProblemInstance
from fusedpath.oracle import brute_force_fixed, sweep
from fusedpath.path import (IntervalMap, LambdaInterval, ScanState, build_reduced_problem,
                            compute_lambda_breakpoint, eval_path, init_smt, inverse_query,
                            is_quasi_convex, provenance_violations, quasi_convexity_violations,
                            solve_full_path, solve_reduced_plfl, update_lambda_breakpoint)
from fusedpath.pwl import make_pwl
from fusedpath.synthetic import abs_instance, constant_instance

from conftest import instances, small_corpus


def _state(smt, sinks, unit=1):
    return ScanState(smt=list(smt), sink=list(sinks), trees=[IntervalMap() for _ in smt],
                     unit=unit)


class TestIntervalMap:
    def test_insert_and_locate(self):
        t = IntervalMap()
        t.insert(3, 5, "b")
        t.insert(0, 2, "a")
        t.insert(6, None, "c")
        assert t.locate(4) == (3, 5, "b")
        assert t.locate(10 ** 9) == (6, None, "c")
        assert t.covers(0, None)
        assert t.items()[0] == (0, 2, "a")

    def test_overlap(self):
        t = IntervalMap()
        t.insert(2, 4, 1)
        for lo, hi in [(4, 6), (0, 2), (3, 3), (0, None)]:
            with pytest.raises(OverlappingInsert):
                t.insert(lo, hi, 2)

    def test_gap(self):
        t = IntervalMap()
        t.insert(0, 1, 1)
        t.insert(3, 4, 1)
        assert t.locate(2) is None
        assert not t.covers(0, 4)
        assert t.covers(0, 1)

    def test_merged(self):
        t = IntervalMap()
        t.insert(0, 1, 5)
        t.insert(2, 3, 5)
        t.insert(4, 4, 6)
        assert t.merged() == [(0, 3, 5), (4, 4, 6)]

    def test_lambda_interval(self):
        assert LambdaInterval.empty_at(3).empty
        assert 7 in LambdaInterval(2, None)
        assert 1 not in LambdaInterval(2, 4)


class TestReduced:
    @pytest.mark.parametrize("group,tb", [
        ((1, 0), [0, 1]),
        ((1, 1), [0, 0]),
        ((1, 0, 0, 1, 0), [0, 1, 1, 2, 3]),
    ])
    def test_table(self, group, tb):
        inst = abs_instance([0] * len(group))
        r = build_reduced_problem(inst, (0, group), None)
        assert r.tb == tb
        assert r.n_super == tb[-1] + 1

    def test_init_smt(self, inst_a):
        assert init_smt(build_reduced_problem(inst_a, (0, (1, 0)), 2), inst_a) == [2, 2]
        assert init_smt(build_reduced_problem(inst_a, (2, (1, 1)), None), inst_a) == [4]

    def test_init_smt_prefix(self):
        inst = ProblemInstance([make_pwl([0], [w, 1]) for w in (-1, -3, -5)])
        assert init_smt(build_reduced_problem(inst, (0, (1, 0, 0)), None), inst) == [1, 8]


class TestComputeBreakpoint:
    def test_edge_negative(self):
        st = _state([-2, 5], [LambdaInterval.empty_at(0), LambdaInterval.empty_at(0)])
        compute_lambda_breakpoint(0, 2, 0, 1, st, 1, k=0)
        assert st.sink[0] == LambdaInterval(0, 1)
        assert st.trees[0].items() == [(0, 1, 1)]
        assert [(e.lo, e.hi) for e in st.events[0]] == [(0, 1)]

    def test_interior_positive_needs_sink_neighbours(self):
        empty = LambdaInterval.empty_at(0)
        st = _state([0, 3, 0], [LambdaInterval(0, 9), empty, empty])
        compute_lambda_breakpoint(1, 3, 0, 9, st, 4)
        assert st.sink[1].empty
        assert len(st.trees[1]) == 0

    def test_interior_positive(self):
        st = _state([0, 3, 0], [LambdaInterval(0, 9), LambdaInterval.empty_at(0),
                                LambdaInterval(0, 7)])
        compute_lambda_breakpoint(1, 3, 0, 9, st, 4)
        # 2 * lam > 3 from lam = 2 on, while both neighbours are sinks
        assert st.sink[1] == LambdaInterval(2, 7)

    def test_interior_negative_integer_half(self):
        empty = LambdaInterval.empty_at(0)
        st = _state([0, -4, 0], [empty, empty, empty])
        compute_lambda_breakpoint(1, 3, 0, 5, st, 4)
        # at lam = 2 the cut change is -4 + 2 * 2 = 0, so the node stays a source
        assert st.sink[1] == LambdaInterval(0, 1)

    def test_interior_negative_ceil_floor_variant(self):
        empty = LambdaInterval.empty_at(0)
        st = _state([0, -4, 0], [empty, empty, empty])
        compute_lambda_breakpoint(1, 3, 0, 5, st, 4, rounding="ceil_floor")
        assert st.sink[1] == LambdaInterval(0, 2)

    def test_interior_negative_odd(self):
        empty = LambdaInterval.empty_at(0)
        st = _state([0, -5, 0], [empty, empty, empty])
        compute_lambda_breakpoint(1, 3, 0, 5, st, 4)
        assert st.sink[1] == LambdaInterval(0, 2)

    def test_interior_negative_with_sink_neighbour(self):
        empty = LambdaInterval.empty_at(0)
        st = _state([0, -1, 0], [LambdaInterval(0, 4), empty, empty])
        compute_lambda_breakpoint(1, 3, 0, 9, st, 4)
        assert st.sink[1] == LambdaInterval(0, 4)

    def test_scaled_smt(self):
        # smt = -3/2 with unit 2 at an end: sink while lam < 3/2
        st = _state([-3, 0], [LambdaInterval.empty_at(0)] * 2, unit=2)
        compute_lambda_breakpoint(0, 2, 0, 9, st, 4)
        assert st.sink[0] == LambdaInterval(0, 1)

    def test_lone_supernode(self):
        st = _state([1], [LambdaInterval.empty_at(3)])
        compute_lambda_breakpoint(0, 1, 3, 8, st, 4)
        assert st.sink[0].empty
        st.smt[0] = -1
        compute_lambda_breakpoint(0, 1, 3, 8, st, 5)
        assert st.trees[0].items() == [(3, 8, 5)]


class TestUpdate:
    def test_first_insert(self):
        st = _state([0], [LambdaInterval.empty_at(0)])
        update_lambda_breakpoint(0, LambdaInterval(0, 4), 7, st, k=3)
        assert st.trees[0].items() == [(0, 4, 7)]
        assert st.sink[0] == LambdaInterval(0, 4)
        assert [(e.lo, e.hi, e.value) for e in st.events[3]] == [(0, 4, 7)]

    def test_both_extensions(self):
        st = _state([0], [LambdaInterval(2, 4)])
        update_lambda_breakpoint(0, LambdaInterval(0, 6), 9, st)
        assert st.trees[0].items() == [(0, 1, 9), (5, 6, 9)]
        assert st.sink[0] == LambdaInterval(0, 6)

    def test_contained(self):
        st = _state([0], [LambdaInterval(0, 4)])
        update_lambda_breakpoint(0, LambdaInterval(1, 3), 9, st)
        assert len(st.trees[0]) == 0
        assert st.sink[0] == LambdaInterval(0, 4)

    def test_empty_candidate(self):
        st = _state([0], [LambdaInterval.empty_at(0)])
        update_lambda_breakpoint(0, LambdaInterval(3, 2), 9, st)
        assert st.sink[0].empty


class TestSolveReduced:
    def test_instance_a_segments(self, inst_a):
        r0 = build_reduced_problem(inst_a, (0, (1, 0)), 2, 0)
        seg = solve_reduced_plfl(r0, inst_a)
        assert [t.items() for t in seg.trees] == [[(0, 1, 1)], [(0, 1, 3)]]
        r1 = build_reduced_problem(inst_a, (2, (1, 1)), None, 1)
        seg = solve_reduced_plfl(r1, inst_a)
        assert [t.items() for t in seg.trees] == [[(2, None, 3)]]

    def test_single_node(self):
        inst = abs_instance([1], [2])
        path = solve_full_path(inst)
        assert path.node_path(0) == [(0, None, 1)]

    def test_uncovered(self, inst_a, monkeypatch):
        import fusedpath.path as pm

        monkeypatch.setattr(pm, "compute_lambda_breakpoint", lambda *a, **k: None)
        with pytest.raises(UncoveredLambda):
            pm.solve_reduced_plfl(build_reduced_problem(inst_a, (0, (1, 0)), 2), inst_a)

    def test_bad_rounding(self, inst_a):
        with pytest.raises(ValueError):
            solve_reduced_plfl(build_reduced_problem(inst_a, (0, (1, 0)), 2), inst_a, "round")


class TestFullPath:
    def test_instance_a(self, inst_a):
        path = solve_full_path(inst_a)
        assert path.lambdas == [0, 2]
        assert path.node_path(0) == [(0, 1, 1), (2, None, 3)]
        assert path.node_path(1) == [(0, None, 3)]

    @pytest.mark.parametrize("lam,x", [(0, [1, 3]), (1, [1, 3]), (2, [3, 3]), (7, [3, 3]),
                                       (10 ** 12, [3, 3])])
    def test_eval_instance_a(self, inst_a, lam, x):
        assert eval_path(solve_full_path(inst_a), lam) == x

    def test_eval_rejects_bad_lambda(self, inst_a):
        path = solve_full_path(inst_a)
        for bad in (-1, 1.5):
            with pytest.raises(ValueError):
                eval_path(path, bad)

    def test_three_nodes(self, inst_three):
        # frozen from the full-enumeration sweep over lambda 0..10
        path = solve_full_path(inst_three)
        assert path.lambdas == [0, 2]
        assert path.node_path(0) == [(0, 1, 1), (2, None, 3)]
        assert path.node_path(1) == [(0, 1, 5), (2, None, 3)]
        assert path.node_path(2) == [(0, None, 3)]
        report = sweep(inst_three, lambda_max(inst_three), "full")
        for e in report.entries:
            assert eval_path(path, e.lam) == e.solution

    def test_identical_losses(self):
        path = solve_full_path(constant_instance(4, 2))
        assert len(path.segments) == 1
        assert all(path.node_path(i) == [(0, None, 2)] for i in range(4))

    def test_tie_instance(self, tie_instance):
        exact = solve_full_path(tie_instance)
        literal = solve_full_path(tie_instance, rounding="ceil_floor")
        assert eval_path(exact, 2) == [10, 1, 10]
        assert eval_path(literal, 2) == [10, 0, 10]
        # both are optimal; only the exact thresholds give the largest optimum
        assert brute_force_fixed(tie_instance, 2, "full")[1] == [10, 1, 10]
        assert tie_instance.objective([10, 0, 10], 2) == tie_instance.objective([10, 1, 10], 2)

    def test_reuses_schedule(self, inst_a):
        s = find_all_fusing_values(inst_a)
        assert solve_full_path(inst_a, schedule=s).schedule is s


class TestInverse:
    def test_instance_a(self, inst_a):
        path = solve_full_path(inst_a)
        k3 = 1  # breakpoint of node 1 at value 3
        k1 = 0
        assert inverse_query(path, 0, 1, k3) == [LambdaInterval(2, None)]
        assert inverse_query(path, 0, 1, k1) is None
        assert inverse_query(path, 0, 0, k1) == [LambdaInterval(0, 1)]
        assert inverse_query(path, 1, 1, k3) == [LambdaInterval(0, None)]

    def test_bad_indices(self, inst_a):
        path = solve_full_path(inst_a)
        with pytest.raises(IndexError):
            inverse_query(path, 1, 0, 0)
        with pytest.raises(IndexError):
            inverse_query(path, 0, 0, 2)


class TestStructure:
    def test_quasi_convex(self):
        assert is_quasi_convex([5, 3, 1])
        assert is_quasi_convex([1, 2])
        assert is_quasi_convex([4, 1, 2, 6])
        assert is_quasi_convex([])
        assert not is_quasi_convex([1, 3, 2])

    @given(instances(max_n=4))
    @settings(max_examples=60, deadline=None)
    def test_path_matches_oracle(self, inst):
        path = solve_full_path(inst)
        L = lambda_max(inst)
        for lam in range(L + 4):
            assert eval_path(path, lam) == brute_force_fixed(inst, lam, "maximal")[1]
        assert quasi_convexity_violations(path) == []
        assert provenance_violations(path) == []
        q, n = inst.q, inst.n
        assert all(c <= q for c in path.breakpoint_counts())
        assert path.total_breakpoints() <= q * n + n - 1
        assert path.node_breakpoints() <= q * n + n - 1

    @pytest.mark.parametrize("idx", range(20))
    def test_scan_monotonicity(self, idx):
        inst = small_corpus(20, seed=303)[idx]
        path = solve_full_path(inst)
        for seg in path.segments:
            last = {}
            for k, I, smt in seg.smt_history:
                assert smt <= last.get(I, smt)
                last[I] = smt
            for tree in seg.trees:
                assert tree.covers(seg.lo, seg.hi)
                assert set(v for _, _, v in tree) <= set(inst.grid)

    def test_provenance_detects_tampering(self, tie_instance):
        path = solve_full_path(tie_instance)
        assert provenance_violations(path) == []
        path.segments[0].boundaries.clear()
        assert provenance_violations(path)
