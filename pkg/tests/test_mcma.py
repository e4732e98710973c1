"""
tests/test_mcma.py
==================
Virtual-link expansion, the multi-channel multi-antenna conflict graph and
its feasibility and inductive-independence guarantees.
"""

import itertools
from collections import defaultdict

import numpy as np
import pytest

from sinrgraph.bench import binary_search_gamma
from sinrgraph.conflict_graph import build_conflict_graph, choose_tau, delta_for_epsilon, is_independent_set
from sinrgraph.errors import McmaError
from sinrgraph.mcma import (
    NodeCaps, VirtualLink, build_mcma_graph, expand_virtual, inductive_bound_check,
    instance_nodes, mcma_feasible_check, mcma_mwis, random_node_caps, uniform_caps,
)
from sinrgraph.models import ConflictFn, Instance, Point, PowerAssignment
from sinrgraph.physical_model import is_instance_subset_feasible
from sinrgraph.scheduling import first_fit_coloring
from tests.conftest import make_link, random_instance

UNIT = ConflictFn(1.0, 0.0)


def vlinks_by_key(vlinks):
    return {(v.link_id, v.a_s, v.a_r, v.c): v for v in vlinks}


# ─────────────────────────────────────────────────────────────────────────────
# CAPABILITIES AND EXPANSION
# ─────────────────────────────────────────────────────────────────────────────
class TestExpansion:
    def test_caps_validation(self):
        with pytest.raises(McmaError):
            NodeCaps(0, {0})
        with pytest.raises(McmaError):
            NodeCaps(1, set())

    def test_counts(self, two_far_links):
        vlinks = expand_virtual(two_far_links, uniform_caps(two_far_links, antennas=2, channels=(0, 1)))
        assert len(vlinks) == 2 * (2 * 2 * 2)
        assert [v.id for v in vlinks] == list(range(16))

    def test_only_shared_channels(self):
        inst = Instance(2.8, (make_link(0, 0, 0, 1, 0),))
        caps = {Point(0, 0): NodeCaps(2, {0, 1}), Point(1, 0): NodeCaps(3, {1, 2})}
        vlinks = expand_virtual(inst, caps)
        assert len(vlinks) == 6
        assert {v.c for v in vlinks} == {1}
        assert (vlinks[0].a_s, vlinks[0].a_r) == (1, 1)

    def test_missing_caps_rejected(self, two_far_links):
        with pytest.raises(McmaError):
            expand_virtual(two_far_links, {})

    def test_random_caps_in_range(self):
        inst = random_instance(3, n=10)
        caps = random_node_caps(inst, np.random.default_rng(0), max_antennas=2, max_channels=2)
        assert set(caps) == set(instance_nodes(inst))
        for node_caps in caps.values():
            assert 1 <= node_caps.antennas <= 2
            assert node_caps.channels and node_caps.channels <= {0, 1}


# ─────────────────────────────────────────────────────────────────────────────
# MC-MA GRAPH
# ─────────────────────────────────────────────────────────────────────────────
class TestGraph:
    def test_adjacency_rules_far_links(self, two_far_links):
        vlinks = expand_virtual(two_far_links, uniform_caps(two_far_links, antennas=2, channels=(0, 1)))
        g = build_mcma_graph(vlinks, build_conflict_graph(two_far_links, UNIT))
        v = vlinks_by_key(vlinks)
        assert g.adjacent(v[0, 1, 1, 0].id, v[0, 1, 2, 1].id)       # shared sender antenna
        assert g.adjacent(v[0, 1, 1, 0].id, v[0, 2, 2, 0].id)       # same original, same channel
        assert not g.adjacent(v[0, 1, 1, 0].id, v[0, 2, 2, 1].id)
        assert not g.adjacent(v[0, 1, 1, 0].id, v[1, 1, 1, 0].id)   # originals not adjacent

    def test_adjacent_originals_conflict_on_shared_channel(self, crossing_links):
        vlinks = expand_virtual(crossing_links, uniform_caps(crossing_links, channels=(0, 1)))
        g = build_mcma_graph(vlinks, build_conflict_graph(crossing_links, UNIT))
        v = vlinks_by_key(vlinks)
        assert g.adjacent(v[0, 1, 1, 0].id, v[1, 1, 1, 0].id)
        assert not g.adjacent(v[0, 1, 1, 0].id, v[1, 1, 1, 1].id)

    def test_shared_node_antenna_conflict(self):
        inst = Instance(2.8, (make_link(0, 0, 0, 50, 0), make_link(1, 0, 0, 0, 50)))
        caps = {Point(0, 0): NodeCaps(1, {0, 1}), Point(50, 0): NodeCaps(1, {0}),
                Point(0, 50): NodeCaps(1, {1})}
        vlinks = expand_virtual(inst, caps)
        assert [v.c for v in vlinks] == [0, 1]
        g = build_mcma_graph(vlinks, build_conflict_graph(inst, UNIT))
        assert g.adjacent(0, 1)

    def test_dangling_virtual_link_rejected(self, two_far_links):
        stray = VirtualLink(0, 99, 1, 1, 0, Point(0, 0), Point(1, 0))
        with pytest.raises(McmaError):
            build_mcma_graph([stray], build_conflict_graph(two_far_links, UNIT))

    def test_antenna_users_form_cliques(self):
        inst = random_instance(6, n=8)
        caps = random_node_caps(inst, np.random.default_rng(6))
        vlinks = expand_virtual(inst, caps)
        g = build_mcma_graph(vlinks, build_conflict_graph(inst, ConflictFn(2.0, 0.5)))
        users = defaultdict(list)
        for v in vlinks:
            users[v.sender_antenna].append(v.id)
            users[v.receiver_antenna].append(v.id)
        for group in users.values():
            for a, b in itertools.combinations(group, 2):
                assert g.adjacent(a, b)

    def test_order_follows_base_rank(self):
        inst = Instance(2.8, (make_link(0, 0, 0, 9, 0), make_link(1, 500, 0, 502, 0)))
        vlinks = expand_virtual(inst, uniform_caps(inst, antennas=2))
        g = build_mcma_graph(vlinks, build_conflict_graph(inst, UNIT))
        originals = [vlinks[v].link_id for v in g.order]
        assert originals == [1] * 4 + [0] * 4

    def test_empty_expansion(self, two_far_links):
        caps = {}
        for link in two_far_links.links:
            caps[link.sender] = NodeCaps(1, {0})
            caps[link.receiver] = NodeCaps(1, {1})
        sol = mcma_mwis(two_far_links, caps, build_conflict_graph(two_far_links, UNIT))
        assert sol.num_virtual == 0 and sol.selected == () and sol.total_weight == 0.0


# ─────────────────────────────────────────────────────────────────────────────
# FEASIBILITY
# ─────────────────────────────────────────────────────────────────────────────
class TestFeasibility:
    def test_shared_antenna_infeasible(self, two_far_links):
        vlinks = expand_virtual(two_far_links, uniform_caps(two_far_links, channels=(0, 1)))
        same_link = [v for v in vlinks if v.link_id == 0]
        assert not mcma_feasible_check(same_link, PowerAssignment.uniform(), two_far_links)

    def test_channels_separate_interference(self, crossing_links):
        vlinks = vlinks_by_key(expand_virtual(crossing_links, uniform_caps(crossing_links, channels=(0, 1))))
        p = PowerAssignment.uniform()
        assert not mcma_feasible_check([vlinks[0, 1, 1, 0], vlinks[1, 1, 1, 0]], p, crossing_links)
        assert mcma_feasible_check([vlinks[0, 1, 1, 0], vlinks[1, 1, 1, 1]], p, crossing_links)

    def test_independent_sets_reduce_to_per_channel_feasibility(self):
        delta = delta_for_epsilon(0.5, 2.8)
        for seed in range(5):
            inst = random_instance(40 + seed, n=12, side=300.0)
            caps = random_node_caps(inst, np.random.default_rng(seed), max_antennas=2, max_channels=2)
            base = build_conflict_graph(inst, ConflictFn(2.0, delta))
            vlinks = expand_virtual(inst, caps)
            graph = build_mcma_graph(vlinks, base)
            sol = mcma_mwis(inst, caps, base)
            assert is_independent_set(graph, [v.id for v in sol.selected])

            p = PowerAssignment.oblivious(choose_tau(delta, inst.alpha))
            per_channel = defaultdict(list)
            for v in sol.selected:
                per_channel[v.c].append(v.link_id)
            expected = all(is_instance_subset_feasible(inst, ids, p).feasible for ids in per_channel.values())
            assert mcma_feasible_check(sol.selected, p, inst) == expected

    def test_independent_sets_feasible_at_searched_gamma(self):
        delta = delta_for_epsilon(0.5, 2.8)
        for seed in range(20):
            inst = random_instance(60 + seed, n=15)
            caps = random_node_caps(inst, np.random.default_rng(seed))
            vlinks = expand_virtual(inst, caps)

            def mcma_sets(base):
                groups = [mcma_mwis(inst, caps, base).selected]
                groups += [[vlinks[v] for v in cls]
                           for cls in first_fit_coloring(build_mcma_graph(vlinks, base)).classes]
                return [frozenset(v.link_id for v in group if v.c == c)
                        for group in groups for c in {v.c for v in group}], 0.0

            found = binary_search_gamma(inst, delta, algorithm=mcma_sets, seed=seed)
            assert found.feasible
            base = build_conflict_graph(inst, ConflictFn(found.gamma, delta))
            p = PowerAssignment.oblivious(found.tau)

            sol = mcma_mwis(inst, caps, base)
            assert sol.selected
            assert mcma_feasible_check(sol.selected, p, inst)
            assert sol.total_weight == pytest.approx(sum(inst.link(v.link_id).weight for v in sol.selected))
            for cls in first_fit_coloring(build_mcma_graph(vlinks, base)).classes:
                assert mcma_feasible_check([vlinks[v] for v in sorted(cls)], p, inst)


# ─────────────────────────────────────────────────────────────────────────────
# INDUCTIVE INDEPENDENCE
# ─────────────────────────────────────────────────────────────────────────────
class TestInductiveBound:
    def test_edgeless_base_single_channel(self, two_far_links):
        base = build_conflict_graph(two_far_links, UNIT)
        graph = build_mcma_graph(expand_virtual(two_far_links, uniform_caps(two_far_links, antennas=2)), base)
        report = inductive_bound_check(base, graph)
        assert report["k_base"] == 0 and report["k_mcma"] == 1
        assert report["bound"] == 3 and report["holds"]

    def test_bound_on_small_instances(self):
        for seed in range(8):
            inst = random_instance(80 + seed, n=5, l_max=50.0, side=200.0)
            caps = random_node_caps(inst, np.random.default_rng(seed), max_antennas=2, max_channels=2)
            base = build_conflict_graph(inst, ConflictFn(2.0, 0.5))
            graph = build_mcma_graph(expand_virtual(inst, caps), base)
            report = inductive_bound_check(base, graph)
            assert report["holds"], report
