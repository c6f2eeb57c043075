"""Shared fixtures: canonical example ideals and the enumerated small-ideal
corpus used by the oracle suites."""

from __future__ import annotations

import itertools
import random
from functools import lru_cache

import pytest

from monoshift import GeneratorPattern, MonomialIdeal, from_generators, quantised_system
from monoshift.words import Word


def W(text: str) -> Word:
    """Digit-string shorthand for words."""
    return tuple(int(ch) for ch in text)


def ideal(d: int, *gens: str, patterns=()) -> MonomialIdeal:
    return from_generators(d, [W(g) for g in gens], patterns)


# Canonical examples used across modules.
@pytest.fixture(scope="session")
def flip_flop():
    """<11, 22>: the two-point two-sided shift."""
    return ideal(2, "11", "22")


@pytest.fixture(scope="session")
def frozen_pair():
    """<12, 21>: two fixed points."""
    return ideal(2, "12", "21")


@pytest.fixture(scope="session")
def compact_corner():
    """<11, 12>: the ideal with a compact letter shift."""
    return ideal(2, "11", "12")


@pytest.fixture(scope="session")
def zero2():
    return ideal(2)


@pytest.fixture(scope="session")
def star_ideal():
    """<1 2^n 1 : n >= 1>: the infinite-type ideal with finite class space."""
    return from_generators(2, [], [GeneratorPattern(W("1"), W("2"), W("1"))])


@pytest.fixture(scope="session")
def parity_ideal():
    """Four symbols, no two consecutive symbols of equal parity."""
    return ideal(4, "11", "13", "31", "33", "22", "24", "42", "44")


@pytest.fixture(scope="session")
def edge_pair():
    """The two four-symbol ideals whose class graphs agree except for one
    edge label."""
    a = ideal(4, "11", "12", "13", "21", "22", "24", "31", "32", "33", "41", "42", "44")
    b = ideal(4, "11", "12", "13", "14", "21", "22", "31", "32", "33", "41", "42", "44")
    return a, b


# ---------------------------------------------------------------------------
# corpus
# ---------------------------------------------------------------------------


def _antichains_d2() -> list[tuple[Word, ...]]:
    letters = (1, 2)
    length2 = [p for p in itertools.product(letters, repeat=2)]
    length3 = [p for p in itertools.product(letters, repeat=3)]
    out = []
    for r in range(len(length2) + 1):
        for s2 in itertools.combinations(length2, r):
            avail = [
                w
                for w in length3
                if not any(w[i : i + 2] in s2 for i in range(2))
            ]
            for r3 in range(len(avail) + 1):
                for s3 in itertools.combinations(avail, r3):
                    out.append(s2 + s3)
    return out


def _corpus_d3() -> list[tuple[Word, ...]]:
    letters = (1, 2, 3)
    length2 = [p for p in itertools.product(letters, repeat=2)]
    length3 = [p for p in itertools.product(letters, repeat=3)]
    out = []
    for r in range(len(length2) + 1):
        for s2 in itertools.combinations(length2, r):
            out.append(s2)
            avail = [
                w
                for w in length3
                if not any(w[i : i + 2] in s2 for i in range(2))
            ]
            for w in avail:
                out.append(s2 + (w,))
    return out


@lru_cache(maxsize=1)
def corpus_ideals() -> tuple[MonomialIdeal, ...]:
    """Every ideal with d <= 2 and basis words of length <= 3, all d = 3
    ideals over length-2 words, and all d = 3 ideals adding one length-3
    word.  Several thousand ideals in total."""
    ideals = [
        from_generators(1, gens)
        for gens in ([], [(1, 1)], [(1, 1, 1)])
    ]
    ideals += [from_generators(2, gens) for gens in _antichains_d2()]
    ideals += [from_generators(3, gens) for gens in _corpus_d3()]
    return tuple(ideals)


@lru_cache(maxsize=None)
def system_of(ideal_obj: MonomialIdeal):
    return quantised_system(ideal_obj)


def corpus_sample(size: int, seed: int = 2024) -> list[MonomialIdeal]:
    pool = corpus_ideals()
    if size >= len(pool):
        return list(pool)
    rng = random.Random(seed)
    return rng.sample(list(pool), size)


def permuted_copy(ideal_obj: MonomialIdeal, rng: random.Random) -> MonomialIdeal:
    letters = list(range(1, ideal_obj.d + 1))
    rng.shuffle(letters)
    sigma = {i + 1: letters[i] for i in range(ideal_obj.d)}
    gens = [tuple(sigma[x] for x in w) for w in ideal_obj.basis]
    pats = [
        GeneratorPattern(
            tuple(sigma[x] for x in p.u),
            tuple(sigma[x] for x in p.v),
            tuple(sigma[x] for x in p.w),
        )
        for p in ideal_obj.patterns
    ]
    return from_generators(ideal_obj.d, gens, pats)
