"""Monomial ideals in noncommuting variables.

A monomial ideal over the alphabet {1, ..., d} is described by its basis: the
unique minimal set of forbidden words (no basis element is a factor of
another).  A word is forbidden exactly when it contains a basis element as a
factor, so the allowable words form a factorial language.

Two kinds of generators are supported: plain words, and one-starred families
``u v+ w`` denoting {u v^n w : n >= 1} (the only infinite-type shape needed
here).  Ideals carrying an irredundant starred family have infinite type,
recorded as ``type_k = None``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .errors import (
    DegenerateGeneratorError,
    InvalidLetterError,
    UnboundedSearchError,
)
from .words import (
    EMPTY_WORD,
    Word,
    check_letters,
    is_factor,
    reverse_word,
    word_key,
)


@dataclass(frozen=True)
class GeneratorPattern:
    """The family {u v^n w : n >= 1}; ``v`` must be nonempty."""

    u: Word
    v: Word
    w: Word

    def instance(self, n: int) -> Word:
        return self.u + self.v * n + self.w

    def min_length(self) -> int:
        return len(self.u) + len(self.v) + len(self.w)

    def occurs_in(self, word: Word) -> bool:
        """True iff some instance u v^n w (n >= 1) is a factor of `word`."""
        lu, lv, lw = len(self.u), len(self.v), len(self.w)
        m = len(word)
        for start in range(m - self.min_length() + 1):
            if word[start : start + lu] != self.u:
                continue
            pos = start + lu
            reps = 0
            while word[pos : pos + lv] == self.v:
                pos += lv
                reps += 1
                tail = start + lu + reps * lv
                if word[tail : tail + lw] == self.w:
                    return True
        return False

    def reversed(self) -> "GeneratorPattern":
        return GeneratorPattern(
            reverse_word(self.w), reverse_word(self.v), reverse_word(self.u)
        )


def _same_family(p: GeneratorPattern, q: GeneratorPattern) -> bool:
    # Instances form arithmetic length progressions; equal period plus the
    # first four instances pins the whole family.
    if len(p.v) != len(q.v) or p.min_length() != q.min_length():
        return False
    return all(p.instance(n) == q.instance(n) for n in (1, 2, 3, 4))


class Side(Enum):
    LEFT = "left"
    RIGHT = "right"


class SubshiftClass(Enum):
    TWO_SIDED = "two_sided"
    LEFT_ONLY = "left_only"
    RIGHT_ONLY = "right_only"
    NOT_SUBSHIFT = "not_subshift"


@dataclass(frozen=True)
class SinkSearch:
    """Outcome of a sink search; `certified` is False when the absence verdict
    only covers words up to the exploration bound."""

    word: Optional[Word]
    certified: bool
    bound: Optional[int] = None


@dataclass(frozen=True)
class MonomialIdeal:
    """A monomial ideal, held in minimal-basis form.

    `basis` contains the plain basis words, `patterns` the irredundant starred
    families.  `type_k` is (longest basis word) - 1 for finite type, 0 for the
    zero ideal, and None when a pattern makes the type infinite.
    """

    d: int
    basis: frozenset[Word]
    patterns: frozenset[GeneratorPattern]
    type_k: Optional[int]

    @property
    def is_finite_type(self) -> bool:
        return self.type_k is not None

    @property
    def is_zero(self) -> bool:
        return not self.basis and not self.patterns

    def sorted_basis(self) -> list[Word]:
        return sorted(self.basis, key=word_key)

    def sorted_patterns(self) -> list[GeneratorPattern]:
        return sorted(self.patterns, key=lambda p: (word_key(p.u), word_key(p.v), word_key(p.w)))

    @cached_property
    def _basis_by_length(self) -> tuple[tuple[int, frozenset[Word]], ...]:
        groups: dict[int, set[Word]] = {}
        for b in self.basis:
            groups.setdefault(len(b), set()).add(b)
        return tuple((length, frozenset(g)) for length, g in sorted(groups.items()))

    def is_forbidden(self, word: Word) -> bool:
        """Exact membership test: does `word` contain a basis factor?

        Exact for starred families too (occurrence scanning does not need a
        bound), so this is the reference oracle for every other module.
        """
        m = len(word)
        for length, group in self._basis_by_length:
            if length > m:
                continue
            for i in range(m - length + 1):
                if word[i : i + length] in group:
                    return True
        return any(p.occurs_in(word) for p in self.patterns)

    def _extension_forbidden(self, extended: Word) -> bool:
        """Membership test for `extended` assuming its longest proper prefix
        is allowable: only factors touching the last letter need checking."""
        m = len(extended)
        for length, group in self._basis_by_length:
            if length <= m and extended[m - length :] in group:
                return True
        return any(p.occurs_in(extended) for p in self.patterns)

    def is_allowable(self, word: Word) -> bool:
        return not self.is_forbidden(word)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        parts = ["".join(map(str, w)) for w in self.sorted_basis()]
        parts += [
            "".join(map(str, p.u)) + "(" + "".join(map(str, p.v)) + ")+" + "".join(map(str, p.w))
            for p in self.sorted_patterns()
        ]
        return f"MonomialIdeal(d={self.d}, <{', '.join(parts)}>)"


def _minimal_words(words: Iterable[Word]) -> list[Word]:
    keep: list[Word] = []
    for w in sorted(set(words), key=word_key):
        if not any(is_factor(b, w) for b in keep):
            keep.append(w)
    return keep


def _pattern_redundant(
    p: GeneratorPattern,
    plain: Sequence[Word],
    others: Sequence[GeneratorPattern],
) -> bool:
    """True iff every instance of `p` contains another basis element.

    Occurrences of a fixed factor in u v^n w stabilise once n is large enough
    that the factor fits in the u-side prefix, the periodic middle, or the
    w-side suffix; testing n up to that margin is therefore conclusive.
    """
    if not plain and not others:
        return False
    widest = max(
        [len(w) for w in plain] + [q.min_length() + len(q.v) for q in others],
        default=0,
    )
    n_max = 3 + (widest + len(p.u) + len(p.w)) // len(p.v)
    for n in range(1, n_max + 1):
        inst = p.instance(n)
        if any(is_factor(b, inst) for b in plain):
            continue
        if any(q.occurs_in(inst) for q in others):
            continue
        return False
    return True


def _collapses_to_plain(p: GeneratorPattern) -> bool:
    # {u v^n w} generates the same ideal as its first instance when that
    # instance is a factor of every later one (e.g. u='', v=11, w='').
    first = p.instance(1)
    n_max = 3 + (len(first) + len(p.u) + len(p.w)) // len(p.v)
    return all(is_factor(first, p.instance(n)) for n in range(2, n_max + 1))


def from_generators(
    d: int,
    generators: Iterable[Sequence[int]] = (),
    patterns: Iterable[GeneratorPattern] = (),
) -> MonomialIdeal:
    """Build an ideal from generators, deriving the minimal basis and type.

    Raises InvalidLetterError for out-of-alphabet letters and
    DegenerateGeneratorError for generators of length < 2 (callers must
    pre-strip single letters by shrinking the alphabet).
    """
    if d < 1:
        raise InvalidLetterError(f"alphabet size must be >= 1, got {d}")

    plain_input: set[Word] = set()
    for g in generators:
        w = check_letters(g, d)
        if len(w) < 2:
            raise DegenerateGeneratorError(
                f"generator {w!r} has length {len(w)} < 2; shrink the alphabet instead"
            )
        plain_input.add(w)

    pattern_input: list[GeneratorPattern] = []
    for p in patterns:
        u = check_letters(p.u, d)
        v = check_letters(p.v, d)
        w = check_letters(p.w, d)
        if not v:
            raise DegenerateGeneratorError("pattern block v must be nonempty")
        q = GeneratorPattern(u, v, w)
        if q.min_length() < 2:
            raise DegenerateGeneratorError(
                f"pattern {q!r} has instances of length < 2; shrink the alphabet instead"
            )
        if _collapses_to_plain(q):
            plain_input.add(q.instance(1))
        elif not any(_same_family(q, seen) for seen in pattern_input):
            pattern_input.append(q)

    plain = _minimal_words(plain_input)

    # A pattern is dropped when its whole family is covered by the plain words
    # together with the patterns still in play (kept or not yet examined);
    # this keeps exactly one of a mutually redundant pair.
    kept_patterns: list[GeneratorPattern] = []
    order = sorted(pattern_input, key=lambda p: (word_key(p.u), word_key(p.v), word_key(p.w)))
    for pos, p in enumerate(order):
        rest = kept_patterns + order[pos + 1 :]
        if not _pattern_redundant(p, plain, rest):
            kept_patterns.append(p)

    basis = [w for w in plain if not any(p.occurs_in(w) for p in kept_patterns)]

    if kept_patterns:
        type_k: Optional[int] = None
    elif basis:
        type_k = max(len(w) for w in basis) - 1
    else:
        type_k = 0

    return MonomialIdeal(
        d=d,
        basis=frozenset(basis),
        patterns=frozenset(kept_patterns),
        type_k=type_k,
    )


def reverse(ideal: MonomialIdeal) -> MonomialIdeal:
    """Mirror the ideal: every basis word reversed.  An involution."""
    return from_generators(
        ideal.d,
        [reverse_word(w) for w in ideal.basis],
        [p.reversed() for p in ideal.patterns],
    )


def allowable_up_to(ideal: MonomialIdeal, max_len: int) -> list[Word]:
    """All allowable words of length <= max_len, length-then-lex ordered.

    The language is factorial, so breadth-first extension with pruning is
    exhaustive.  Exact for starred families as well.
    """
    out: list[Word] = [EMPTY_WORD]
    frontier: list[Word] = [EMPTY_WORD]
    for _ in range(max_len):
        nxt: list[Word] = []
        for w in frontier:
            for letter in range(1, ideal.d + 1):
                cand = w + (letter,)
                if not ideal._extension_forbidden(cand):
                    nxt.append(cand)
        out.extend(nxt)
        frontier = nxt
        if not frontier:
            break
    return out


def _is_sink(ideal: MonomialIdeal, word: Word, side: Side) -> bool:
    if side is Side.LEFT:
        return all(ideal.is_forbidden((i,) + word) for i in range(1, ideal.d + 1))
    return all(ideal.is_forbidden(word + (i,)) for i in range(1, ideal.d + 1))


def sink_search(
    ideal: MonomialIdeal, side: Side, bound: Optional[int] = None
) -> SinkSearch:
    """Search for a sink (an allowable word every one-letter extension of
    which, on the given side, is forbidden).

    For finite type k the search over words of length <= k is complete:
    whether a one-letter extension of `word` stays allowable depends only on
    the k-letter prefix (left side) resp. suffix (right side) of `word`,
    because a forbidden factor crossing the new letter has length <= k + 1.
    For starred families the search is bounded and a negative answer is
    flagged uncertified.
    """
    if ideal.is_finite_type:
        horizon, certified = ideal.type_k, True
    else:
        if bound is None:
            raise UnboundedSearchError(
                "infinite-type ideal: sink search needs an exploration bound"
            )
        horizon, certified = bound, False
    for word in allowable_up_to(ideal, horizon):
        if _is_sink(ideal, word, side):
            return SinkSearch(word=word, certified=True, bound=None)
    return SinkSearch(word=None, certified=certified, bound=None if certified else bound)


def find_sink(
    ideal: MonomialIdeal, side: Side, bound: Optional[int] = None
) -> Optional[Word]:
    """The length-lex least sink on the given side, or None.

    Found sinks are always certified; for infinite-type ideals a None answer
    is only sound up to the exploration bound (use `sink_search` to see the
    flag).
    """
    return sink_search(ideal, side, bound).word


def classify_subshift(
    ideal: MonomialIdeal, bound: Optional[int] = None
) -> tuple[SubshiftClass, bool]:
    """Which subshifts the forbidden words cut out, plus a certified flag.

    The ideal presents a left (resp. right) subshift exactly when it has no
    sinks on the left (resp. right); sinks on both sides leave no subshift.
    """
    left = sink_search(ideal, Side.LEFT, bound)
    right = sink_search(ideal, Side.RIGHT, bound)
    certified = left.certified and right.certified
    if left.word is None and right.word is None:
        return SubshiftClass.TWO_SIDED, certified
    if left.word is None:
        return SubshiftClass.LEFT_ONLY, certified
    if right.word is None:
        return SubshiftClass.RIGHT_ONLY, certified
    return SubshiftClass.NOT_SUBSHIFT, True


def subshift_class(ideal: MonomialIdeal, bound: Optional[int] = None) -> SubshiftClass:
    return classify_subshift(ideal, bound)[0]


def zero_set_member(ideal: MonomialIdeal, z: Sequence[complex]) -> bool:
    """Scalar zero-set membership: ||z||_2 <= 1 and every basis monomial
    evaluates to zero at z.

    A coordinate product vanishes iff some factor coordinate is zero, which
    also settles starred families for all n >= 1 at once.
    """
    if len(z) != ideal.d:
        raise InvalidLetterError(f"point has {len(z)} coordinates, alphabet has {ideal.d}")
    if sum(abs(c) ** 2 for c in z) > 1.0 + 1e-9:
        return False
    for word in ideal.basis:
        if all(z[letter - 1] != 0 for letter in word):
            return False
    for p in ideal.patterns:
        letters = itertools.chain(p.u, p.v, p.w)
        if all(z[letter - 1] != 0 for letter in letters):
            return False
    return True
