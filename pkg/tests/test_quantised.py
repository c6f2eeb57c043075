"""Predecessor classes, the stabilised system, its graph, and dynamics-side
predicates."""

import itertools

import pytest

from conftest import W, corpus_sample, ideal, system_of
from monoshift import (
    BoundRequiredError,
    ForbiddenWordError,
    check_auto_continuity,
    digraph_to_dot,
    forbidden_via_dynamics,
    graph_of_ideal,
    omega_level,
    predecessor_set,
    q_projection_supports,
    quantised_system,
)
from monoshift.ideals import allowable_up_to


class TestPredecessorSet:
    def test_flip_flop_letter(self, flip_flop):
        assert predecessor_set(flip_flop, W("1"), 1) == {(), W("2")}

    def test_empty_word_has_full_set(self):
        for sample in corpus_sample(20, seed=3):
            bound = None if sample.is_finite_type else 6
            horizon = 2
            full = set(allowable_up_to(sample, horizon))
            assert predecessor_set(sample, (), horizon) == full

    def test_frozen_pair_letter(self, frozen_pair):
        assert predecessor_set(frozen_pair, W("1"), 1) == {(), W("1")}

    def test_forbidden_word_rejected(self, frozen_pair):
        with pytest.raises(ForbiddenWordError):
            predecessor_set(frozen_pair, W("12"), 1)


class TestOmegaLevel:
    def test_flip_flop_three_classes(self, flip_flop):
        classes = omega_level(flip_flop, 1)
        assert [c.representative for c in classes] == [(), W("1"), W("2")]

    def test_star_ideal_stabilised_classes(self, star_ideal):
        classes = omega_level(star_ideal, 2, bound=8)
        assert [c.representative for c in classes] == [(), W("1"), W("21")]

    def test_zero_ideal_single_class(self, zero2):
        for l in (0, 1, 3):
            assert len(omega_level(zero2, l)) == 1

    def test_pattern_needs_bound(self, star_ideal):
        with pytest.raises(BoundRequiredError):
            omega_level(star_ideal, 2)


class TestQuantisedSystem:
    def test_flip_flop_structure(self, flip_flop):
        system = quantised_system(flip_flop)
        assert system.level == 1 and system.certified
        assert system.representatives == ((), W("1"), W("2"))
        assert system.domains == (frozenset({0, 2}), frozenset({0, 1}))
        assert system.maps[0] == {0: 1, 2: 1}  # phi_1 constant at class 1
        assert system.maps[1] == {0: 2, 1: 2}
        assert system.infinite_flags == (False, True, True)

    def test_frozen_pair_structure(self, frozen_pair):
        system = quantised_system(frozen_pair)
        assert system.domains == (frozenset({0, 1}), frozenset({0, 2}))
        assert system.maps[0] == {0: 1, 1: 1}
        assert system.maps[1] == {0: 2, 2: 2}

    def test_parity_ideal_duplicated_maps(self, parity_ideal):
        system = quantised_system(parity_ideal)
        assert system.class_count == 3
        assert system.domains[0] == system.domains[2] == frozenset({0, 2})
        assert system.domains[1] == system.domains[3] == frozenset({0, 1})
        assert system.maps[0] == system.maps[2]
        assert system.maps[1] == system.maps[3]

    def test_star_ideal_flagged_bounded(self, star_ideal):
        system = quantised_system(star_ideal, bound=8)
        assert system.level == 2 and not system.certified and system.bound == 8
        assert system.representatives == ((), W("1"), W("21"))

    def test_stabilisation_at_type(self):
        # The level-k and level-(k+1) partitions of the representative pool
        # coincide for every finite-type sample.
        for sample in corpus_sample(120, seed=59):
            if not sample.is_finite_type:
                continue
            k = sample.type_k
            shallow = {
                frozenset(c.signature) for c in omega_level(sample, k)
            }
            pool = allowable_up_to(sample, k)
            part_k = {}
            part_k1 = {}
            for w in pool:
                part_k.setdefault(
                    frozenset(
                        v for v in allowable_up_to(sample, k)
                        if not sample.is_forbidden(v + w)
                    ),
                    set(),
                ).add(w)
                part_k1.setdefault(
                    frozenset(
                        v for v in allowable_up_to(sample, k + 1)
                        if not sample.is_forbidden(v + w)
                    ),
                    set(),
                ).add(w)
            assert {frozenset(g) for g in part_k.values()} == {
                frozenset(g) for g in part_k1.values()
            }

    def test_phi_well_defined_on_members(self):
        # Any two members of a class map into the same class under prepend.
        for sample in corpus_sample(60, seed=61):
            if not sample.is_finite_type:
                continue
            system = system_of(sample)
            members = allowable_up_to(sample, sample.type_k + 2)
            by_class = {}
            for w in members:
                by_class.setdefault(system.class_of_word(w), []).append(w)
            for c, group in by_class.items():
                for i in range(1, sample.d + 1):
                    images = {
                        system.class_of_word((i,) + w)
                        for w in group
                        if not sample.is_forbidden((i,) + w)
                    }
                    assert len(images) <= 1
                    if images:
                        assert c in system.domains[i - 1]
                        assert system.maps[i - 1][c] == images.pop()

    def test_domain_law(self):
        for sample in corpus_sample(80, seed=67):
            system = system_of(sample) if sample.is_finite_type else None
            if system is None:
                continue
            for c, rep in enumerate(system.representatives):
                for i in range(1, sample.d + 1):
                    allowed = not sample.is_forbidden((i,) + rep)
                    assert (c in system.domains[i - 1]) == allowed


class TestGraph:
    def test_flip_flop_graph(self, flip_flop):
        graph = graph_of_ideal(quantised_system(flip_flop))
        assert graph.edges == ((0, 1, 1), (0, 2, 2), (1, 2, 2), (2, 1, 1))

    def test_frozen_pair_graph_loops(self, frozen_pair):
        graph = graph_of_ideal(quantised_system(frozen_pair))
        assert graph.edges == ((0, 1, 1), (0, 2, 2), (1, 1, 1), (2, 2, 2))

    def test_zero_ideal_d1_loop(self):
        graph = graph_of_ideal(quantised_system(ideal(1)))
        assert graph.node_labels == ("∅",)
        assert graph.edges == ((0, 0, 1),)

    def test_out_labels_distinct(self):
        for sample in corpus_sample(60, seed=71):
            if not sample.is_finite_type:
                continue
            graph = graph_of_ideal(system_of(sample))
            for v in range(len(graph.node_labels)):
                labels = [e[2] for e in graph.out_edges(v)]
                assert len(labels) == len(set(labels))

    def test_dot_output_stable_and_wellformed(self, flip_flop):
        system = quantised_system(flip_flop)
        first = digraph_to_dot(graph_of_ideal(system))
        second = digraph_to_dot(graph_of_ideal(quantised_system(flip_flop)))
        assert first == second
        lines = first.strip().splitlines()
        assert lines[0].startswith("digraph ") and lines[-1] == "}"
        for line in lines[1:-1]:
            assert line.startswith("  ")
            assert line.rstrip().endswith(";")


class TestForbiddenViaDynamics:
    def test_frozen_pair_examples(self, frozen_pair):
        system = quantised_system(frozen_pair)
        assert forbidden_via_dynamics(system, W("12"))
        assert not forbidden_via_dynamics(system, W("11"))
        assert not forbidden_via_dynamics(system, ())

    def test_reconstruction_matches_language(self):
        # The dynamics reconstruct the forbidden words exactly.
        for sample in corpus_sample(60, seed=73):
            if not sample.is_finite_type:
                continue
            system = system_of(sample)
            horizon = sample.type_k + 3
            for word in itertools.chain.from_iterable(
                itertools.product(range(1, sample.d + 1), repeat=n)
                for n in range(horizon + 1)
            ):
                assert forbidden_via_dynamics(system, word) == sample.is_forbidden(word)


class TestAutoContinuity:
    def test_frozen_pair_holds(self, frozen_pair):
        ok, witnesses = check_auto_continuity(quantised_system(frozen_pair))
        assert ok
        for c, (w, z) in witnesses.items():
            rep = quantised_system(frozen_pair).representatives[c]
            for n in range(1, 4):
                assert not frozen_pair.is_forbidden(w * n + z + rep)

    def test_all_pairs_blocked_fails(self):
        # Every length-2 word forbidden: both letter-classes coincide and
        # have no out-edges, so no class reaches a cycle.
        blocked = ideal(2, "11", "12", "21", "22")
        system = quantised_system(blocked)
        assert system.class_count == 2  # the letter words share one class
        ok, counterexample = check_auto_continuity(system)
        assert not ok and counterexample in range(system.class_count)

    def test_zero_ideal_holds(self, zero2):
        ok, witnesses = check_auto_continuity(quantised_system(zero2))
        assert ok and set(witnesses) == {0}


class TestQProjections:
    def test_flip_flop_supports(self, flip_flop):
        supports = q_projection_supports(quantised_system(flip_flop))
        assert supports[(1, 1)] == {0}
        assert supports[(1, 0)] == {2}
        assert supports[(0, 1)] == {1}
        assert supports[(0, 0)] == frozenset()

    def test_left_sinks_populate_zero_pattern(self):
        blocked = ideal(2, "11", "12", "21", "22")
        system = quantised_system(blocked)
        supports = q_projection_supports(system)
        assert supports[(0, 0)]  # the merged letter class is a left sink
        assert supports[(1, 1)] == {0}

    def test_zero_ideal_full_pattern_only(self, zero2):
        supports = q_projection_supports(quantised_system(zero2))
        assert supports[(1, 1)] == {0}
        assert all(not v for bits, v in supports.items() if bits != (1, 1))

    def test_patterns_partition_classes(self):
        for sample in corpus_sample(80, seed=79):
            if not sample.is_finite_type:
                continue
            system = system_of(sample)
            supports = q_projection_supports(system)
            union = sorted(c for group in supports.values() for c in group)
            assert union == list(range(system.class_count))
