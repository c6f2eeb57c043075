"""Words over the alphabet {1, ..., d}, represented as tuples of letters.

The empty tuple is the empty word.  Sorting is always length-then-lexicographic
(`word_key`), which every module uses to make outputs deterministic.
"""

from __future__ import annotations

from typing import Iterable, Sequence, Union

from .errors import InvalidLetterError

Word = tuple[int, ...]

EMPTY_WORD: Word = ()


def word_key(word: Word) -> tuple[int, Word]:
    """Sort key: shorter first, then lexicographic."""
    return (len(word), word)


def check_letters(word: Sequence[int], d: int) -> Word:
    w = tuple(word)
    for letter in w:
        if not isinstance(letter, int) or not 1 <= letter <= d:
            raise InvalidLetterError(f"letter {letter!r} outside alphabet 1..{d}")
    return w


def is_factor(factor: Word, word: Word) -> bool:
    """True iff `factor` occurs as a contiguous subword of `word`."""
    n, m = len(factor), len(word)
    if n > m:
        return False
    return any(word[i : i + n] == factor for i in range(m - n + 1))


def reverse_word(word: Word) -> Word:
    return word[::-1]


def parse_word(data: Union[str, Iterable[int]], d: int) -> Word:
    """Parse the wire format: digit strings for d <= 9, else integer lists.

    Comma-separated strings are accepted for any d.  The empty string is the
    empty word.
    """
    if isinstance(data, str):
        if data == "":
            return EMPTY_WORD
        if "," in data:
            letters = [int(part) for part in data.split(",")]
        elif d <= 9:
            letters = [int(ch) for ch in data]
        else:
            raise InvalidLetterError(
                f"word {data!r} is ambiguous for d={d}; use comma-separated letters"
            )
        return check_letters(letters, d)
    return check_letters(list(data), d)


def format_word(word: Word, d: int) -> str:
    """Inverse of `parse_word`: digit string for d <= 9, else comma-separated."""
    if d <= 9:
        return "".join(str(letter) for letter in word)
    return ",".join(str(letter) for letter in word)
