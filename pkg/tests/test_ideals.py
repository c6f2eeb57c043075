"""Ideal construction, minimal bases, sinks, subshift classes, zero sets."""

import itertools
import math
import random

import pytest

from conftest import W, corpus_sample, ideal
from monoshift import (
    DegenerateGeneratorError,
    GeneratorPattern,
    InvalidLetterError,
    Side,
    SubshiftClass,
    UnboundedSearchError,
    classify_subshift,
    find_sink,
    from_generators,
    reverse,
    sink_search,
    subshift_class,
    zero_set_member,
)
from monoshift.ideals import allowable_up_to


def brute_forbidden(basis, word):
    """Independent substring oracle used to pin derived values."""
    return any(
        word[i : i + len(b)] == b
        for b in basis
        for i in range(len(word) - len(b) + 1)
    )


class TestFromGenerators:
    def test_two_generator_basis(self):
        got = ideal(2, "11", "12")
        assert got.basis == {W("11"), W("12")}
        assert got.type_k == 1

    def test_zero_ideal(self):
        got = ideal(2)
        assert got.basis == frozenset() and got.patterns == frozenset()
        assert got.type_k == 0

    def test_factor_containment_scan(self):
        # Brute scan: 212 and 2122 both contain 12.
        assert brute_forbidden([W("12")], W("212"))
        assert brute_forbidden([W("12")], W("2122"))
        got = ideal(2, "12", "212", "2122")
        assert got.basis == {W("12")}
        assert got.type_k == 1

    def test_letter_out_of_range(self):
        with pytest.raises(InvalidLetterError):
            from_generators(2, [W("13")])

    def test_single_letter_generator_rejected(self):
        with pytest.raises(DegenerateGeneratorError):
            from_generators(2, [(1,)])
        with pytest.raises(DegenerateGeneratorError):
            from_generators(2, [], [GeneratorPattern((), (1,), ())])

    def test_basis_minimality_and_idempotence(self):
        for sample in corpus_sample(120, seed=5):
            for a, b in itertools.permutations(sample.basis, 2):
                assert not brute_forbidden([a], b)
            again = from_generators(sample.d, sample.basis, sample.patterns)
            assert again.basis == sample.basis
            assert again.type_k == sample.type_k

    def test_pattern_ideal_is_infinite_type(self):
        star = from_generators(2, [], [GeneratorPattern(W("1"), W("2"), W("1"))])
        assert not star.is_finite_type and star.type_k is None

    def test_pattern_collapsing_to_plain(self):
        # {(11)^n} generates the same ideal as the single word 11.
        got = from_generators(2, [], [GeneratorPattern((), W("11"), ())])
        assert got.basis == {W("11")} and not got.patterns
        assert got.type_k == 1

    def test_pattern_redundant_against_word(self):
        # Every instance 1 2^n 1 contains 12, so the family adds nothing.
        got = from_generators(2, [W("12")], [GeneratorPattern(W("1"), W("2"), W("1"))])
        assert got.basis == {W("12")} and not got.patterns

    def test_plain_word_swallowed_by_pattern(self):
        got = from_generators(2, [W("2121")], [GeneratorPattern(W("1"), W("2"), W("1"))])
        assert got.basis == frozenset()
        assert len(got.patterns) == 1

    def test_equal_pattern_families_merge(self):
        # 1 (22)^n 21 and 12 (22)^n 1 both spell out 1 2^(2n+1) 1.
        p = GeneratorPattern(W("1"), W("22"), W("21"))
        q = GeneratorPattern(W("12"), W("22"), W("1"))
        assert p.instance(1) == q.instance(1) == W("12221")
        got = from_generators(2, [], [p, q])
        assert len(got.patterns) == 1 and not got.basis

    def test_empty_tail_pattern_collapses(self):
        # With w empty, u v^(n+1) always contains u v^n, so the family is
        # the ideal of its first instance.
        got = from_generators(2, [], [GeneratorPattern(W("1"), W("21"), ())])
        assert got.basis == {W("121")} and not got.patterns


class TestMembership:
    def test_oracle_agreement(self):
        for sample in corpus_sample(80, seed=7):
            horizon = (sample.type_k or 0) + 3
            for word in itertools.chain.from_iterable(
                itertools.product(range(1, sample.d + 1), repeat=n)
                for n in range(horizon + 1)
            ):
                assert sample.is_forbidden(word) == brute_forbidden(sample.basis, word)

    def test_pattern_membership(self):
        star = from_generators(2, [], [GeneratorPattern(W("1"), W("2"), W("1"))])
        assert star.is_forbidden(W("121"))
        assert star.is_forbidden(W("12221"))
        assert star.is_forbidden(W("212212"))  # occurrence in the middle
        assert star.is_forbidden(W("2121"))
        assert not star.is_forbidden(W("221"))
        assert not star.is_forbidden(W("122"))
        assert not star.is_forbidden(W("11"))

    def test_prefix_dependence(self):
        # One-letter extendability only sees the k-prefix: the backbone of
        # the bounded sink search and class enumeration.
        for sample in corpus_sample(60, seed=11):
            if not sample.is_finite_type:
                continue
            k = sample.type_k
            for word in allowable_up_to(sample, k + 3):
                prefix = word[:k]
                for i in range(1, sample.d + 1):
                    assert sample.is_forbidden((i,) + word) == sample.is_forbidden(
                        (i,) + prefix
                    )


class TestReverse:
    def test_single_word(self):
        assert reverse(ideal(2, "12")).basis == {W("21")}

    def test_palindromic_basis(self):
        assert reverse(ideal(2, "11", "22")).basis == {W("11"), W("22")}

    def test_palindromic_pattern(self):
        star = from_generators(2, [], [GeneratorPattern(W("1"), W("2"), W("1"))])
        assert reverse(star).patterns == star.patterns

    def test_involution(self):
        for sample in corpus_sample(100, seed=13):
            assert reverse(reverse(sample)) == sample

    def test_swaps_sink_sides(self):
        for sample in corpus_sample(100, seed=17):
            left = find_sink(sample, Side.LEFT)
            right_of_reverse = find_sink(reverse(sample), Side.RIGHT)
            assert (left is None) == (right_of_reverse is None)


class TestSinks:
    def test_frozen_pair_has_no_sinks(self, frozen_pair):
        assert find_sink(frozen_pair, Side.LEFT) is None
        assert find_sink(frozen_pair, Side.RIGHT) is None

    def test_right_sink(self, compact_corner):
        assert find_sink(compact_corner, Side.RIGHT) == W("1")
        assert find_sink(compact_corner, Side.LEFT) is None

    def test_zero_ideal_has_none(self, zero2):
        assert find_sink(zero2, Side.LEFT) is None

    def test_sink_soundness(self):
        for sample in corpus_sample(150, seed=19):
            for side in Side:
                word = find_sink(sample, side)
                if word is None:
                    continue
                assert not sample.is_forbidden(word)
                for i in range(1, sample.d + 1):
                    extended = (i,) + word if side is Side.LEFT else word + (i,)
                    assert sample.is_forbidden(extended)

    def test_bounded_search_is_complete(self):
        # Brute search three letters past the certified horizon agrees.
        for sample in corpus_sample(60, seed=23):
            if not sample.is_finite_type:
                continue
            k = sample.type_k
            for side in Side:
                found = find_sink(sample, side) is not None
                brute = any(
                    all(
                        sample.is_forbidden(
                            (i,) + w if side is Side.LEFT else w + (i,)
                        )
                        for i in range(1, sample.d + 1)
                    )
                    for w in allowable_up_to(sample, k + 3)
                )
                assert found == brute

    def test_pattern_requires_bound(self, star_ideal):
        with pytest.raises(UnboundedSearchError):
            find_sink(star_ideal, Side.LEFT)
        search = sink_search(star_ideal, Side.LEFT, bound=8)
        assert search.word is None and not search.certified and search.bound == 8


class TestSubshiftClass:
    def test_two_sided(self, frozen_pair):
        assert subshift_class(frozen_pair) is SubshiftClass.TWO_SIDED

    def test_left_only(self, compact_corner):
        assert subshift_class(compact_corner) is SubshiftClass.LEFT_ONLY

    def test_zero_ideal(self, zero2):
        assert subshift_class(zero2) is SubshiftClass.TWO_SIDED

    def test_not_subshift(self):
        blocked = ideal(1, "11")
        assert subshift_class(blocked) is SubshiftClass.NOT_SUBSHIFT

    def test_right_only_via_reverse(self, compact_corner):
        got, certified = classify_subshift(reverse(compact_corner))
        assert got is SubshiftClass.RIGHT_ONLY and certified

    def test_pattern_verdict_flagged(self, star_ideal):
        got, certified = classify_subshift(star_ideal, bound=8)
        assert got is SubshiftClass.TWO_SIDED and not certified


class TestZeroSet:
    def test_coordinate_kill(self, frozen_pair):
        assert zero_set_member(frozen_pair, (1.0, 0.0))

    def test_interior_point_fails_product(self, frozen_pair):
        r = 1 / math.sqrt(2)
        assert not zero_set_member(frozen_pair, (r, r))

    def test_zero_ideal_is_whole_ball(self, zero2):
        rng = random.Random(3)
        for _ in range(20):
            x, y = rng.uniform(-0.7, 0.7), rng.uniform(-0.7, 0.7)
            assert zero_set_member(zero2, (x, y))

    def test_outside_ball(self, zero2):
        assert not zero_set_member(zero2, (1.0, 1.0))

    def test_pattern_zero_set(self, star_ideal):
        assert zero_set_member(star_ideal, (0.0, 1.0))
        assert zero_set_member(star_ideal, (1.0, 0.0))
        assert not zero_set_member(star_ideal, (0.5, 0.5))

    def test_dimension_mismatch(self, zero2):
        with pytest.raises(InvalidLetterError):
            zero_set_member(zero2, (0.0,))
