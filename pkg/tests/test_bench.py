"""
tests/test_bench.py
===================
Random instance generation, baselines, the γ binary search and the
experiment/CSV pipeline.
"""

import io
import itertools
import math

import pytest

from sinrgraph import bench
from sinrgraph.bench import (
    CONFLICT_GRAPH_MWIS, GREEDY_FEASIBILITY, WEIGHT_CLASS, ExperimentConfig, binary_search_gamma,
    gen_random_instance, greedy_feasibility_heuristic, run_experiment, weight_class_baseline,
    write_csv,
)
from sinrgraph.config import Config
from sinrgraph.conflict_graph import delta_for_epsilon
from sinrgraph.errors import InvariantViolation, ParameterRangeError
from sinrgraph.models import Instance, PowerAssignment, WeightedSolution
from sinrgraph.physical_model import is_instance_subset_feasible
from tests.conftest import make_link

SMALL = dict(n=15, l_max=(10.0, 50.0), trials=2, seed=1)


# ─────────────────────────────────────────────────────────────────────────────
# CONFIG
# ─────────────────────────────────────────────────────────────────────────────
class TestConfig:
    @pytest.mark.parametrize("kwargs", [
        {"n": 0}, {"trials": 0}, {"side": 0.0}, {"l_max": (1.0,)}, {"l_max": ()},
        {"beta": 0.5}, {"beta": 2.0, "beta_max": 1.5}, {"algorithms": ("bogus",)},
        {"epsilons": ()}, {"workers": 0},
    ])
    def test_rejects_bad_values(self, kwargs):
        with pytest.raises(ParameterRangeError):
            ExperimentConfig(**kwargs)

    def test_lists_become_tuples(self):
        cfg = ExperimentConfig(l_max=[10.0], epsilons=[0.5])
        assert cfg.l_max == (10.0,) and cfg.to_dict()["epsilons"] == [0.5]


# ─────────────────────────────────────────────────────────────────────────────
# INSTANCE GENERATION
# ─────────────────────────────────────────────────────────────────────────────
class TestGeneration:
    def test_deterministic_per_trial(self):
        cfg = ExperimentConfig(n=20, seed=5)
        assert gen_random_instance(cfg, 3).to_dict() == gen_random_instance(cfg, 3).to_dict()
        assert gen_random_instance(cfg, 3).to_dict() != gen_random_instance(cfg, 4).to_dict()

    def test_ranges(self):
        cfg = ExperimentConfig(n=200, l_max=(50.0,), beta=1.0, beta_max=4.0, seed=9)
        inst = gen_random_instance(cfg, 0)
        assert len(inst) == 200 and inst.alpha == cfg.alpha
        for link in inst.links:
            assert 0.0 <= link.sender.x <= cfg.side and 0.0 <= link.sender.y <= cfg.side
            assert 1.0 <= link.length <= 50.0 * (1 + 1e-12)
            assert Config.WEIGHT_RANGE[0] <= link.weight <= Config.WEIGHT_RANGE[1]
            assert 1.0 <= link.beta <= 4.0

    def test_explicit_l_max(self):
        cfg = ExperimentConfig(n=50, l_max=(10.0, 250.0))
        assert max(l.length for l in gen_random_instance(cfg, 0)) <= 10.0 * (1 + 1e-12)
        assert gen_random_instance(cfg, 0, 250.0).to_dict() != gen_random_instance(cfg, 0).to_dict()


# ─────────────────────────────────────────────────────────────────────────────
# BASELINES
# ─────────────────────────────────────────────────────────────────────────────
class TestBaselines:
    def test_greedy_prefers_short_heavy_links(self, crossing_links):
        sol = greedy_feasibility_heuristic(crossing_links, PowerAssignment.uniform())
        assert sol.selected == {0} and sol.total_weight == 10.0

    def test_greedy_result_feasible(self):
        inst = gen_random_instance(ExperimentConfig(n=60, side=300.0, seed=2), 0)
        p = PowerAssignment.uniform()
        sol = greedy_feasibility_heuristic(inst, p)
        assert sol.selected
        assert is_instance_subset_feasible(inst, sorted(sol.selected), p).feasible

    def test_zero_weight_links_scanned_last(self):
        inst = Instance(2.8, (make_link(0, 0, 0, 10, 0, weight=0.0), make_link(1, 11, 0, 1, 0, weight=1.0)))
        sol = greedy_feasibility_heuristic(inst, PowerAssignment.oblivious(0.8))
        assert sol.selected == {1} and sol.total_weight == 1.0

    def test_zero_weight_links_kept_when_free(self):
        inst = Instance(2.8, (make_link(0, 0, 0, 1, 0, weight=0.0), make_link(1, 500, 0, 502, 0, weight=2.0)))
        sol = greedy_feasibility_heuristic(inst, PowerAssignment.oblivious(0.8))
        assert sol.selected == {0, 1} and sol.total_weight == 2.0

    def test_weight_class_ignores_zero_weight(self):
        inst = Instance(2.8, (make_link(0, 0, 0, 10, 0, weight=0.0), make_link(1, 11, 0, 1, 0, weight=1.0)))
        sol = weight_class_baseline(inst, PowerAssignment.uniform())
        assert sol.selected == {1}
        assert sol.diagnostics == {"weight_class": 0, "num_classes": 1}

    def test_weight_class_picks_best_class(self, crossing_links):
        sol = weight_class_baseline(crossing_links, PowerAssignment.uniform())
        assert sol.selected == {0}
        assert sol.diagnostics == {"weight_class": 3, "num_classes": 2}


# ─────────────────────────────────────────────────────────────────────────────
# γ BINARY SEARCH
# ─────────────────────────────────────────────────────────────────────────────
class TestBinarySearch:
    delta = delta_for_epsilon(0.5, 2.8)

    def test_far_links_both_selected(self, two_far_links):
        found = binary_search_gamma(two_far_links, self.delta)
        assert found.feasible and found.objective == 2.0
        assert found.evaluations == 1 + Config.GAMMA_SEARCH_STEPS
        assert 1.0 <= found.gamma <= Config.GAMMA_SEARCH_HI

    def test_crossing_links_heavier_one(self, crossing_links):
        found = binary_search_gamma(crossing_links, self.delta)
        assert found.feasible and found.solution == (frozenset({0}),)

    def test_tdma_objective_counts_classes(self, two_far_links):
        found = binary_search_gamma(two_far_links, self.delta, algorithm="tdma")
        assert found.objective == -1.0

    @pytest.mark.parametrize("kwargs", [{"lo": 0.5}, {"hi": 2.0 ** 21}, {"lo": 8.0, "hi": 4.0},
                                        {"algorithm": "ilp"}])
    def test_bad_arguments(self, two_far_links, kwargs):
        with pytest.raises(ParameterRangeError):
            binary_search_gamma(two_far_links, self.delta, **kwargs)


# ─────────────────────────────────────────────────────────────────────────────
# EXPERIMENT
# ─────────────────────────────────────────────────────────────────────────────
class TestExperiment:
    @pytest.fixture(scope="class")
    def result(self):
        return run_experiment(ExperimentConfig(**SMALL))

    def test_rows_per_cell(self, result):
        assert not result.failures
        assert len(result.rows) == 2 * 4
        keys = {(r.l_max, r.algorithm, r.epsilon) for r in result.rows}
        assert (10.0, CONFLICT_GRAPH_MWIS, 0.1) in keys
        assert (50.0, WEIGHT_CLASS, None) in keys
        assert all(r.trials == 2 and r.seed == 1 for r in result.rows)
        assert result.complete and result.incomplete == []

    def test_frame_columns(self, result):
        assert list(result.to_frame().columns) == list(Config.CSV_COLUMNS)

    def test_csv_reproducible(self, result):
        first, second = io.StringIO(), io.StringIO()
        write_csv(result.rows, first)
        write_csv(run_experiment(ExperimentConfig(**SMALL)).rows, second)
        assert first.getvalue() == second.getvalue()
        assert first.getvalue().splitlines()[0] == ",".join(Config.CSV_COLUMNS)

    def test_worker_count_does_not_change_results(self, result):
        parallel = run_experiment(ExperimentConfig(**SMALL, workers=3))
        assert [r.to_dict() for r in parallel.rows] == [r.to_dict() for r in result.rows]

    def test_lost_trial_marks_cell_incomplete(self, monkeypatch):
        calls = itertools.count()
        real = bench.weight_class_baseline

        def crashes_once(inst, p):
            if next(calls) == 0:
                raise RuntimeError("solver crashed")
            return real(inst, p)

        monkeypatch.setattr(bench, "weight_class_baseline", crashes_once)
        result = run_experiment(ExperimentConfig(**SMALL, workers=1))
        assert len(result.failures) == 1 and result.failures[0]["trial"] == 0
        assert not result.complete
        assert result.incomplete == [{"l_max": 10.0, "algorithm": WEIGHT_CLASS, "epsilon": None,
                                      "trials": 1, "expected": 2}]
        row = next(r for r in result.rows if r.l_max == 10.0 and r.algorithm == WEIGHT_CLASS)
        assert row.trials == 1

    def test_cells_without_rows_are_incomplete(self, monkeypatch):
        def crashes(inst, p):
            raise RuntimeError("solver crashed")

        monkeypatch.setattr(bench, "weight_class_baseline", crashes)
        result = run_experiment(ExperimentConfig(**SMALL, algorithms=(WEIGHT_CLASS,)))
        assert result.rows == [] and len(result.failures) == 4
        assert [(c["l_max"], c["trials"]) for c in result.incomplete] == [(10.0, 0), (50.0, 0)]

    def test_infeasible_report_is_fatal(self, monkeypatch):
        monkeypatch.setattr(bench, "greedy_feasibility_heuristic",
                            lambda inst, p: WeightedSolution(frozenset(inst.ids), 1.0))
        cfg = ExperimentConfig(n=15, side=20.0, l_max=(10.0,), trials=1, algorithms=(GREEDY_FEASIBILITY,))
        with pytest.raises(InvariantViolation):
            run_experiment(cfg)

    @pytest.mark.slow
    def test_algorithm_ordering_at_full_scale(self):
        cfg = ExperimentConfig(epsilons=(0.1, 0.9))
        result = run_experiment(cfg)
        means = {(r.l_max, r.algorithm, r.epsilon): r.mean_weight for r in result.rows}
        for l_max in cfg.l_max:
            greedy = means[l_max, GREEDY_FEASIBILITY, None]
            fine = means[l_max, CONFLICT_GRAPH_MWIS, 0.1]
            coarse = means[l_max, CONFLICT_GRAPH_MWIS, 0.9]
            baseline = means[l_max, WEIGHT_CLASS, None]
            assert greedy >= fine >= coarse >= baseline, (l_max, greedy, fine, coarse, baseline)
        assert math.isfinite(sum(means.values()))
