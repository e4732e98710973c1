"""
tests/test_scheduling.py
========================
First-fit coloring, feasible-set partition, local-ratio MWIS, multi-channel
selection and inductive independence measurement.
"""

import numpy as np
import pytest

from sinrgraph.bench import binary_search_gamma
from sinrgraph.conflict_graph import build_conflict_graph, delta_for_epsilon, is_independent_set
from sinrgraph.errors import ConflictGraphError, ParameterRangeError
from sinrgraph.models import ConflictFn, ConflictGraph
from sinrgraph.scheduling import (
    first_fit_coloring, greedy_multichannel, independence_number, inductive_order,
    local_ratio_mwis, measure_inductive_independence, partition_feasible,
)
from tests.conftest import brute_force_mwis, random_instance


def complete(n):
    return ConflictGraph.from_edges(list(range(n)), [(a, b) for a in range(n) for b in range(a + 1, n)])


def edgeless(n):
    return ConflictGraph.from_edges(list(range(n)), [])


def star(leaves):
    return ConflictGraph.from_edges(list(range(leaves + 1)), [(0, k) for k in range(1, leaves + 1)])


@pytest.fixture
def path4():
    return ConflictGraph.from_edges([0, 1, 2, 3], [(0, 1), (1, 2), (2, 3)])


@pytest.fixture
def instance_graph():
    inst = random_instance(8, n=40, side=300.0, beta_max=4.0)
    return build_conflict_graph(inst, ConflictFn(2.0, 0.8))


# ─────────────────────────────────────────────────────────────────────────────
# FIRST-FIT COLORING
# ─────────────────────────────────────────────────────────────────────────────
class TestFirstFit:
    def test_edgeless_one_class(self):
        assert first_fit_coloring(edgeless(5)).num_classes == 1

    def test_complete_n_classes(self):
        assert first_fit_coloring(complete(6)).num_classes == 6

    def test_path(self, path4):
        coloring = first_fit_coloring(path4, [0, 1, 2, 3])
        assert coloring.classes == (frozenset({0, 2}), frozenset({1, 3}))

    def test_bad_order_rejected(self, path4):
        with pytest.raises(ConflictGraphError):
            first_fit_coloring(path4, [0, 1, 2])

    def test_classes_independent_and_bounded(self, instance_graph):
        g = instance_graph
        coloring = first_fit_coloring(g)
        assert sorted(v for c in coloring.classes for v in c) == sorted(g.vertex_ids)
        for cls in coloring.classes:
            assert is_independent_set(g, cls)
        earlier = max((len(g.neighbors(v)) - len(g.later_neighbors(v)) for v in g.vertex_ids), default=0)
        assert coloring.num_classes <= 1 + earlier

    def test_inductive_order_is_graph_order(self, instance_graph):
        assert inductive_order(instance_graph) == list(instance_graph.order)

    def test_deterministic(self, instance_graph):
        assert first_fit_coloring(instance_graph).to_dict() == first_fit_coloring(instance_graph).to_dict()


# ─────────────────────────────────────────────────────────────────────────────
# FEASIBLE-SET PARTITION
# ─────────────────────────────────────────────────────────────────────────────
class TestPartition:
    def test_independent_set_one_class(self, path4):
        assert partition_feasible(path4, {0, 2}).num_classes == 1

    def test_edge_two_classes(self, path4):
        assert partition_feasible(path4, {1, 2}).num_classes == 2

    def test_empty_set(self, path4):
        assert partition_feasible(path4, set()).num_classes == 0

    def test_unknown_id_rejected(self, path4):
        with pytest.raises(ConflictGraphError):
            partition_feasible(path4, {0, 9})

    def test_diagnostics_on_instance_graph(self, instance_graph):
        members = list(instance_graph.vertex_ids)[:15]
        coloring = partition_feasible(instance_graph, members)
        assert coloring.diagnostics["num_classes"] == coloring.num_classes
        assert coloring.diagnostics["f_star"] >= 1
        assert sorted(coloring.assignment) == sorted(members)

    def test_two_stage_covers_and_is_independent(self, instance_graph):
        members = list(instance_graph.vertex_ids)
        coloring = partition_feasible(instance_graph, members, two_stage=True)
        assert sorted(coloring.assignment) == sorted(members)
        assert coloring.diagnostics["rho_classes"] >= 1
        for cls in coloring.classes:
            assert is_independent_set(instance_graph, cls)

    def test_two_stage_needs_instance(self, path4):
        with pytest.raises(ConflictGraphError):
            partition_feasible(path4, {0, 1}, two_stage=True)

    def test_tightness_on_searched_feasible_sets(self):
        delta = delta_for_epsilon(0.5, 2.8)
        for seed in range(5):
            inst = random_instance(seed, n=40, beta_max=4.0)
            found = binary_search_gamma(inst, delta, algorithm="tdma")
            g = build_conflict_graph(inst, ConflictFn(1.0, delta))
            for s in found.solution:
                coloring = partition_feasible(g, s)
                assert sorted(coloring.assignment) == sorted(s)
                for cls in coloring.classes:
                    assert is_independent_set(g, cls)
                if not coloring.diagnostics["within_bound"]:
                    print(f"tightness counterexample: seed={seed} set={sorted(s)} {coloring.diagnostics}")


# ─────────────────────────────────────────────────────────────────────────────
# LOCAL-RATIO MWIS
# ─────────────────────────────────────────────────────────────────────────────
class TestLocalRatio:
    def test_single_vertex(self):
        sol = local_ratio_mwis(edgeless(1), {0: 4.5})
        assert sol.selected == {0} and sol.total_weight == 4.5

    @pytest.mark.parametrize("order", [(0, 1), (1, 0)])
    def test_adjacent_pair_takes_heavier(self, order):
        g = ConflictGraph.from_edges([0, 1], [(0, 1)], order=order)
        sol = local_ratio_mwis(g, {0: 3.0, 1: 5.0})
        assert sol.selected == {1} and sol.total_weight == 5.0

    def test_negative_weight_rejected(self, path4):
        with pytest.raises(ParameterRangeError):
            local_ratio_mwis(path4, {0: -1.0})

    def test_unknown_vertex_rejected(self, path4):
        with pytest.raises(ConflictGraphError):
            local_ratio_mwis(path4, {42: 1.0})

    def test_missing_weights_count_as_zero(self, path4):
        sol = local_ratio_mwis(path4, {3: 2.0})
        assert sol.total_weight == 2.0 and 3 in sol.selected

    def test_defaults_to_link_weights(self, instance_graph):
        sol = local_ratio_mwis(instance_graph)
        inst = instance_graph.instance
        assert sol.total_weight == pytest.approx(sum(inst.link(v).weight for v in sol.selected))
        assert is_independent_set(instance_graph, sol.selected)

    def test_approximation_against_brute_force(self):
        rng = np.random.default_rng(17)
        for trial in range(200):
            n = int(rng.integers(2, 17))
            inst = random_instance(1000 + trial, n=n, l_max=20.0, side=80.0, beta_max=3.0)
            fn = ConflictFn(float(rng.uniform(1.0, 6.0)), float(rng.uniform(0.0, 0.95)))
            g = build_conflict_graph(inst, fn)
            weights = {l.id: l.weight for l in inst.links}
            sol = local_ratio_mwis(g, weights)
            assert is_independent_set(g, sol.selected)
            k = max(measure_inductive_independence(g).k, 1)
            assert sol.total_weight >= brute_force_mwis(g, weights) / k * (1 - 1e-9)


# ─────────────────────────────────────────────────────────────────────────────
# MULTI-CHANNEL SELECTION
# ─────────────────────────────────────────────────────────────────────────────
class TestMultichannel:
    def test_edgeless_single_channel(self):
        assert greedy_multichannel(edgeless(4), 1).num_assigned == 4

    def test_complete_two_channels(self):
        result = greedy_multichannel(complete(5), 2)
        assert result.num_assigned == 2 and len(result.unassigned) == 3

    def test_enough_channels_assign_everything(self, instance_graph):
        colors = first_fit_coloring(instance_graph).num_classes
        result = greedy_multichannel(instance_graph, colors)
        assert result.num_assigned == len(instance_graph) and not result.unassigned

    def test_channels_disjoint_and_independent(self, instance_graph):
        result = greedy_multichannel(instance_graph, 3)
        seen = set()
        for ch in result.channels:
            assert not (seen & ch)
            seen |= ch
            assert is_independent_set(instance_graph, ch)

    def test_zero_channels_rejected(self, path4):
        with pytest.raises(ParameterRangeError):
            greedy_multichannel(path4, 0)


# ─────────────────────────────────────────────────────────────────────────────
# INDUCTIVE INDEPENDENCE
# ─────────────────────────────────────────────────────────────────────────────
class TestInductiveIndependence:
    def test_edgeless(self):
        assert measure_inductive_independence(edgeless(5)).k == 0

    def test_complete(self):
        assert measure_inductive_independence(complete(6)).k == 1

    def test_star_center_first(self):
        result = measure_inductive_independence(star(4))
        assert result.k == 4 and result.witness == 0 and not result.truncated

    def test_truncated_neighborhood(self):
        result = measure_inductive_independence(star(30), cap=25)
        assert result.truncated and result.k == 25

    def test_guarantee_flag_follows_gamma(self):
        inst = random_instance(2, n=10)
        assert measure_inductive_independence(build_conflict_graph(inst, ConflictFn(40.0, 0.5))).guaranteed_constant
        assert not measure_inductive_independence(build_conflict_graph(inst, ConflictFn(2.0, 0.5))).guaranteed_constant

    def test_independence_number_of_path(self, path4):
        assert independence_number(path4.to_networkx()) == 2
