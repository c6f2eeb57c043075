"""Deterministic recognizer and enumerator for the allowable-word language.

The recognizer keys its live states by the last `window` letters read (the
longest allowable suffix of bounded length); a forbidden factor created by a
new letter fits inside that window whenever the window is at least the ideal's
type, so for finite type the automaton is exact.  Starred families get a
user-supplied window instead and the automaton is only sound on words that fit
in it; membership queries fall back to exact occurrence scanning in that case.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional

from .errors import BoundRequiredError, ForbiddenWordError, InvalidLetterError
from .ideals import MonomialIdeal, allowable_up_to
from .words import EMPTY_WORD, Word, check_letters

DEAD = -1


@dataclass(frozen=True, eq=False)
class FactorAutomaton:
    """Deterministic factor-avoidance automaton.

    `transitions[state][letter - 1]` is the next live state or DEAD.  State 0
    is the initial state (empty word).  `reaches_cycle[s]` says whether some
    directed cycle of live states is reachable from s, i.e. whether the words
    leading to s extend to arbitrarily long allowable words.
    """

    ideal: MonomialIdeal
    window: int
    exact: bool
    keys: tuple[Word, ...]
    transitions: tuple[tuple[int, ...], ...]
    reaches_cycle: tuple[bool, ...]
    index: dict[Word, int] = field(repr=False)

    @property
    def initial(self) -> int:
        return 0

    def step(self, state: int, letter: int) -> int:
        if state == DEAD:
            return DEAD
        return self.transitions[state][letter - 1]

    def walk(self, word: Word) -> int:
        state = 0
        for letter in word:
            state = self.step(state, letter)
            if state == DEAD:
                return DEAD
        return state


def _cycle_reachability(transitions: list[list[int]]) -> list[bool]:
    n = len(transitions)
    succ = [sorted({t for t in row if t != DEAD}) for row in transitions]

    # Tarjan SCC, iterative.
    index_of = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comp_of = [-1] * n
    comp_sizes: list[int] = []
    counter = 0

    for root in range(n):
        if index_of[root] != -1:
            continue
        work: list[tuple[int, int]] = [(root, 0)]
        while work:
            node, pos = work.pop()
            if pos == 0:
                index_of[node] = low[node] = counter
                counter += 1
                stack.append(node)
                on_stack[node] = True
            recurse = False
            for k in range(pos, len(succ[node])):
                nxt = succ[node][k]
                if index_of[nxt] == -1:
                    work.append((node, k + 1))
                    work.append((nxt, 0))
                    recurse = True
                    break
                if on_stack[nxt]:
                    low[node] = min(low[node], index_of[nxt])
            if recurse:
                continue
            if low[node] == index_of[node]:
                size = 0
                while True:
                    member = stack.pop()
                    on_stack[member] = False
                    comp_of[member] = len(comp_sizes)
                    size += 1
                    if member == node:
                        break
                comp_sizes.append(size)
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])

    cyclic = [False] * n
    for node in range(n):
        if comp_sizes[comp_of[node]] > 1 or node in succ[node]:
            cyclic[node] = True

    # Backward closure: a state reaches a cycle iff it is cyclic or some
    # successor does.  Propagate over reversed edges.
    pred: list[list[int]] = [[] for _ in range(n)]
    for s, row in enumerate(succ):
        for t in row:
            pred[t].append(s)
    reach = cyclic[:]
    todo = [s for s in range(n) if reach[s]]
    while todo:
        t = todo.pop()
        for s in pred[t]:
            if not reach[s]:
                reach[s] = True
                todo.append(s)
    return reach


def build_automaton(ideal: MonomialIdeal, bound: Optional[int] = None) -> FactorAutomaton:
    """Construct the factor-avoidance automaton for the ideal.

    Finite type: exact, window = type.  Starred families: requires `bound`,
    window = bound, flagged inexact (sound on words of length <= bound).
    """
    if ideal.is_finite_type:
        window, exact = ideal.type_k, True
    else:
        if bound is None:
            raise BoundRequiredError(
                "infinite-type ideal: building the automaton needs an exploration bound"
            )
        window, exact = bound, False

    keys: list[Word] = [EMPTY_WORD]
    index: dict[Word, int] = {EMPTY_WORD: 0}
    rows: list[list[int]] = []
    state = 0
    while state < len(keys):
        key = keys[state]
        row = [DEAD] * ideal.d
        for letter in range(1, ideal.d + 1):
            extended = key + (letter,)
            if ideal.is_forbidden(extended):
                continue
            new_key = extended if len(extended) <= window else extended[1:]
            if new_key not in index:
                index[new_key] = len(keys)
                keys.append(new_key)
            row[letter - 1] = index[new_key]
        rows.append(row)
        state += 1
    reaches = _cycle_reachability(rows)
    return FactorAutomaton(
        ideal=ideal,
        window=window,
        exact=exact,
        keys=tuple(keys),
        transitions=tuple(tuple(row) for row in rows),
        reaches_cycle=tuple(reaches),
        index=index,
    )


def is_allowable(automaton: FactorAutomaton, word: Word) -> bool:
    """True iff no basis word (or starred-family instance) occurs in `word`.

    Exact in both modes: finite type walks the automaton, starred families
    fall back to the exact occurrence scan.
    """
    word = check_letters(word, automaton.ideal.d)
    if automaton.exact:
        return automaton.walk(word) != DEAD
    return not automaton.ideal.is_forbidden(word)


def enumerate_allowable(automaton: FactorAutomaton, max_len: int) -> list[Word]:
    """The allowable words of length <= max_len, length-then-lex ordered."""
    if max_len < 0:
        return []
    if automaton.exact:
        out: list[Word] = [EMPTY_WORD]
        frontier: list[tuple[Word, int]] = [(EMPTY_WORD, 0)]
        for _ in range(max_len):
            nxt: list[tuple[Word, int]] = []
            for word, state in frontier:
                for letter in range(1, automaton.ideal.d + 1):
                    target = automaton.transitions[state][letter - 1]
                    if target != DEAD:
                        nxt.append((word + (letter,), target))
            out.extend(w for w, _ in nxt)
            frontier = nxt
            if not frontier:
                break
        return out
    return allowable_up_to(automaton.ideal, max_len)


def count_allowable(automaton: FactorAutomaton, n: int) -> int:
    """Number of allowable words of length exactly n (transfer-matrix count)."""
    if n < 0:
        raise ValueError("length must be nonnegative")
    if not automaton.exact:
        words = allowable_up_to(automaton.ideal, n)
        return sum(1 for w in words if len(w) == n)
    counts = [0] * len(automaton.keys)
    counts[0] = 1
    for _ in range(n):
        nxt = [0] * len(automaton.keys)
        for state, c in enumerate(counts):
            if c == 0:
                continue
            for target in automaton.transitions[state]:
                if target != DEAD:
                    nxt[target] += c
        counts = nxt
    return sum(counts)


def has_infinite_extensions(automaton: FactorAutomaton, word: Word) -> bool:
    """True iff infinitely many allowable words extend `word` on the right.

    Exact for finite type (cycle reachability).  For starred families the
    probe walks `window` extra letters: death inside the window certifies a
    finite answer, survival is reported as True but is only sound up to the
    exploration bound.
    """
    word = check_letters(word, automaton.ideal.d)
    ideal = automaton.ideal
    if ideal.is_forbidden(word):
        raise ForbiddenWordError(f"word {word!r} is forbidden")
    if automaton.exact:
        return automaton.reaches_cycle[automaton.walk(word)]
    depth = automaton.window
    frontier = [word]
    for _ in range(depth):
        nxt = []
        for w in frontier:
            for letter in range(1, ideal.d + 1):
                cand = w + (letter,)
                if not ideal._extension_forbidden(cand):
                    nxt.append(cand)
        if not nxt:
            return False
        frontier = nxt
    return True


def iter_words(d: int, max_len: int) -> Iterator[Word]:
    """All words (allowable or not) of length <= max_len, length-then-lex."""
    if d < 1:
        raise InvalidLetterError(f"alphabet size must be >= 1, got {d}")
    frontier: list[Word] = [EMPTY_WORD]
    yield EMPTY_WORD
    for _ in range(max_len):
        nxt = []
        for w in frontier:
            for letter in range(1, d + 1):
                cand = w + (letter,)
                nxt.append(cand)
                yield cand
        frontier = nxt
