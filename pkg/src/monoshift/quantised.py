"""The quantised dynamics of a monomial ideal.

Allowable words are grouped by their predecessor sets: two words are
equivalent at level l when the same words of length <= l can be prepended to
them without creating a forbidden factor.  For an ideal of finite type k the
partition stabilises at level k and the quotient is a finite set Omega.  Each
letter i acts partially on Omega by prepending: the class of v lies in the
domain Omega^i exactly when i.v is allowable, and then phi_i sends it to the
class of i.v.  The resulting labeled digraph determines the forbidden words
completely.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import (
    BoundRequiredError,
    ForbiddenWordError,
    InternalInvariantError,
    UnsupportedError,
)
from .ideals import MonomialIdeal, allowable_up_to
from .language import build_automaton, has_infinite_extensions
from .words import Word, check_letters, format_word, word_key


@dataclass(frozen=True)
class OmegaClass:
    """One predecessor class: canonical representative plus its signature
    (the predecessor set restricted to words of length <= level)."""

    representative: Word
    signature: frozenset[Word]


@dataclass(frozen=True, eq=False)
class QuantisedSystem:
    """The stabilised quotient space with its partial prepend maps.

    Classes are indexed 0..n-1 in length-then-lex order of their canonical
    representatives (shortest, then lexicographically least member).
    `domains[i-1]` is Omega^i as a set of class indices and `maps[i-1]` the
    partial map phi_i.  `infinite_flags[c]` says whether class c contains
    infinitely many allowable words.  `certified` is False when the system was
    produced under an exploration bound (starred families).
    """

    ideal: MonomialIdeal
    level: int
    certified: bool
    bound: Optional[int]
    representatives: tuple[Word, ...]
    signatures: tuple[frozenset[Word], ...]
    infinite_flags: tuple[bool, ...]
    domains: tuple[frozenset[int], ...]
    maps: tuple[dict[int, int], ...]
    context_words: tuple[Word, ...] = field(repr=False)

    @property
    def d(self) -> int:
        return self.ideal.d

    @property
    def class_count(self) -> int:
        return len(self.representatives)

    def supp(self, c: int) -> tuple[int, ...]:
        """Letters i with c in Omega^i."""
        return tuple(i for i in range(1, self.d + 1) if c in self.domains[i - 1])

    def class_of_word(self, word: Word) -> int:
        """Class index of an allowable word (signature lookup)."""
        word = check_letters(word, self.d)
        if self.ideal.is_forbidden(word):
            raise ForbiddenWordError(f"word {word!r} is forbidden")
        sig = frozenset(
            w for w in self.context_words if not self.ideal.is_forbidden(w + word)
        )
        try:
            return self.signatures.index(sig)
        except ValueError:
            raise UnsupportedError(
                f"word {word!r} matches no stabilised class; raise the bound"
            ) from None

    def class_label(self, c: int) -> str:
        rep = self.representatives[c]
        return format_word(rep, self.d) if rep else "∅"


@dataclass(frozen=True)
class LabeledDigraph:
    """Graph of the ideal: one vertex per class, an edge c -> phi_i(c) with
    label i for every letter defined at c.  Out-labels at a vertex are
    pairwise distinct by construction."""

    node_labels: tuple[str, ...]
    edges: tuple[tuple[int, int, int], ...]  # (source, target, letter)

    def out_edges(self, v: int) -> list[tuple[int, int, int]]:
        return [e for e in self.edges if e[0] == v]


def predecessor_set(ideal: MonomialIdeal, word: Word, l: int) -> frozenset[Word]:
    """{w allowable, |w| <= l : w.word allowable}; exact for any ideal."""
    word = check_letters(word, ideal.d)
    if ideal.is_forbidden(word):
        raise ForbiddenWordError(f"word {word!r} is forbidden")
    return frozenset(
        w for w in allowable_up_to(ideal, l) if not ideal.is_forbidden(w + word)
    )


def _partition(
    ideal: MonomialIdeal, pool: list[Word], context: list[Word]
) -> dict[frozenset[Word], list[Word]]:
    groups: dict[frozenset[Word], list[Word]] = {}
    for word in pool:
        sig = frozenset(w for w in context if not ideal.is_forbidden(w + word))
        groups.setdefault(sig, []).append(word)
    return groups


def omega_level(
    ideal: MonomialIdeal, l: int, bound: Optional[int] = None
) -> list[OmegaClass]:
    """The classes of the level-l relation, one per distinct signature.

    For finite type k the representative pool of words of length <= k is
    complete: whether w.v is allowable depends only on the k-letter prefix of
    v, so every word is equivalent to its own k-prefix at every level.
    Starred families use a bounded pool instead (BoundRequiredError without a
    bound).
    """
    if ideal.is_finite_type:
        horizon = ideal.type_k
    else:
        if bound is None:
            raise BoundRequiredError(
                "infinite-type ideal: class enumeration needs an exploration bound"
            )
        horizon = bound
    pool = allowable_up_to(ideal, horizon)
    context = allowable_up_to(ideal, l)
    groups = _partition(ideal, pool, context)
    classes = [
        OmegaClass(representative=min(members, key=word_key), signature=sig)
        for sig, members in groups.items()
    ]
    classes.sort(key=lambda c: word_key(c.representative))
    return classes


def _stabilisation_level(ideal: MonomialIdeal, bound: int) -> int:
    """Smallest l whose partition of the bounded word pool agrees with every
    deeper level up to the bound; UnsupportedError when none exists."""
    pool = allowable_up_to(ideal, bound)
    shapes = []
    for l in range(0, bound):
        context = allowable_up_to(ideal, l)
        groups = _partition(ideal, pool, context)
        shapes.append(frozenset(frozenset(members) for members in groups.values()))
    for l, shape in enumerate(shapes):
        if all(later == shape for later in shapes[l + 1 :]) and l + 1 < len(shapes):
            return l
    raise UnsupportedError(
        f"class partition not stabilised within bound {bound}; raise the bound"
    )


def quantised_system(ideal: MonomialIdeal, bound: Optional[int] = None) -> QuantisedSystem:
    """Build the stabilised system (Omega, phi_1, ..., phi_d).

    Finite type k: the level is pinned at k (the partition provably
    stabilises there); a cross-check against level k+1 is asserted.  Starred
    families: the level is detected empirically within the bound and the
    result is flagged uncertified.
    """
    if ideal.is_finite_type:
        level, certified = ideal.type_k, True
    else:
        if bound is None:
            raise BoundRequiredError(
                "infinite-type ideal: the quantised system needs an exploration bound"
            )
        level, certified = _stabilisation_level(ideal, bound), False

    horizon = ideal.type_k if ideal.is_finite_type else bound
    pool = allowable_up_to(ideal, horizon)
    context = allowable_up_to(ideal, level)
    groups = _partition(ideal, pool, context)

    if ideal.is_finite_type:
        deeper = _partition(ideal, pool, allowable_up_to(ideal, level + 1))
        shape = frozenset(frozenset(m) for m in groups.values())
        deeper_shape = frozenset(frozenset(m) for m in deeper.values())
        if shape != deeper_shape:
            raise InternalInvariantError(
                "level-k partition differs from level-(k+1); stabilisation failed"
            )

    ordered = sorted(groups.items(), key=lambda kv: word_key(min(kv[1], key=word_key)))
    signatures = tuple(sig for sig, _ in ordered)
    representatives = tuple(min(members, key=word_key) for _, members in ordered)
    sig_index = {sig: idx for idx, sig in enumerate(signatures)}

    def class_of(word: Word) -> int:
        sig = frozenset(w for w in context if not ideal.is_forbidden(w + word))
        if sig not in sig_index:
            if certified:
                raise InternalInvariantError(
                    f"class of {word!r} missing from the stabilised partition"
                )
            raise UnsupportedError(
                f"class of {word!r} not seen within bound {bound}; raise the bound"
            )
        return sig_index[sig]

    domains: list[frozenset[int]] = []
    maps: list[dict[int, int]] = []
    for letter in range(1, ideal.d + 1):
        dom = set()
        phi: dict[int, int] = {}
        for c, rep in enumerate(representatives):
            extended = (letter,) + rep
            if not ideal.is_forbidden(extended):
                dom.add(c)
                phi[c] = class_of(extended)
        domains.append(frozenset(dom))
        maps.append(phi)

    # A class is infinite iff one of its members of length == level has
    # infinitely many right extensions: every longer word shares the
    # signature of its length-level prefix, so these members carry the count.
    automaton = build_automaton(ideal, bound=None if ideal.is_finite_type else bound)
    infinite = [False] * len(representatives)
    for sig, members in ordered:
        for m in members:
            if len(m) == level and has_infinite_extensions(automaton, m):
                infinite[sig_index[sig]] = True
                break

    return QuantisedSystem(
        ideal=ideal,
        level=level,
        certified=certified,
        bound=None if certified else bound,
        representatives=representatives,
        signatures=signatures,
        infinite_flags=tuple(infinite),
        domains=tuple(domains),
        maps=tuple(maps),
        context_words=tuple(context),
    )


def graph_of_ideal(system: QuantisedSystem) -> LabeledDigraph:
    """The labeled digraph of the system, deterministically ordered."""
    edges = []
    for c in range(system.class_count):
        for letter in range(1, system.d + 1):
            if c in system.domains[letter - 1]:
                edges.append((c, system.maps[letter - 1][c], letter))
    edges.sort()
    labels = tuple(system.class_label(c) for c in range(system.class_count))
    return LabeledDigraph(node_labels=labels, edges=tuple(edges))


def digraph_to_dot(graph: LabeledDigraph, name: str = "quantised_dynamics") -> str:
    """Byte-stable DOT rendering; nodes by class index, edges by letter."""
    lines = [f"digraph {name} {{", "  rankdir=LR;", "  node [shape=circle];"]
    for idx, label in enumerate(graph.node_labels):
        lines.append(f'  q{idx} [label="{label}"];')
    for source, target, letter in graph.edges:
        lines.append(f'  q{source} -> q{target} [label="{letter}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def forbidden_via_dynamics(system: QuantisedSystem, word: Word) -> bool:
    """Decide forbiddenness from the dynamics alone.

    Scanning the word left to right, keep the set of classes on which the
    composite of prepend maps (rightmost letter applied first) is defined;
    after consuming the prefix p the set holds exactly the classes of words v
    with p.v allowable.  The word is forbidden iff the set empties.
    """
    word = check_letters(word, system.d)
    alive = set(range(system.class_count))
    for letter in word:
        dom = system.domains[letter - 1]
        phi = system.maps[letter - 1]
        alive = {c for c in dom if phi[c] in alive}
        if not alive:
            return True
    return False


def check_auto_continuity(system: QuantisedSystem):
    """Does every class reach a cycle in the graph of the ideal?

    Returns (True, witnesses) with witnesses[c] = (w, z) such that w^n z v is
    allowable for every member v of class c and every n, or
    (False, counterexample_class).
    """
    n = system.class_count
    adjacency: list[list[tuple[int, int]]] = [[] for _ in range(n)]  # (target, letter)
    for letter in range(1, system.d + 1):
        for c in system.domains[letter - 1]:
            adjacency[c].append((system.maps[letter - 1][c], letter))

    def cycle_labels_from(v: int) -> Optional[list[int]]:
        # Shortest directed cycle through v, as the list of edge labels.
        frontier = [(v, [])]
        seen = {v}
        while frontier:
            nxt = []
            for node, labels in frontier:
                for target, letter in sorted(adjacency[node]):
                    if target == v:
                        return labels + [letter]
                    if target not in seen:
                        seen.add(target)
                        nxt.append((target, labels + [letter]))
            frontier = nxt
        return None

    on_cycle = {v for v in range(n) if cycle_labels_from(v) is not None}

    witnesses: dict[int, tuple[Word, Word]] = {}
    for c in range(n):
        frontier = [(c, [])]
        seen = {c}
        path_labels: Optional[list[int]] = None
        target_vertex = None
        while frontier and path_labels is None:
            nxt = []
            for node, labels in frontier:
                if node in on_cycle:
                    path_labels, target_vertex = labels, node
                    break
                for target, letter in sorted(adjacency[node]):
                    if target not in seen:
                        seen.add(target)
                        nxt.append((target, labels + [letter]))
            frontier = nxt
        if path_labels is None:
            return False, c
        cyc = cycle_labels_from(target_vertex)
        # A path with successive labels a1..am lands on the class of
        # am...a1.v, so witness words read the labels in reverse.
        z = tuple(reversed(path_labels))
        w = tuple(reversed(cyc))
        witnesses[c] = (w, z)
    return True, witnesses


def q_projection_supports(system: QuantisedSystem) -> dict[tuple[int, ...], frozenset[int]]:
    """Partition of the classes by their letter-support bit patterns.

    The pattern of class c has a 1 in slot i exactly when c lies in Omega^i;
    the all-zero pattern is nonempty iff the ideal has a left sink.
    """
    supports: dict[tuple[int, ...], set[int]] = {}
    if system.d <= 12:
        for m in range(2 ** system.d):
            bits = tuple((m >> (system.d - 1 - j)) & 1 for j in range(system.d))
            supports[bits] = set()
    for c in range(system.class_count):
        bits = tuple(1 if c in system.domains[i] else 0 for i in range(system.d))
        supports.setdefault(bits, set()).add(c)
    return {bits: frozenset(classes) for bits, classes in supports.items()}
