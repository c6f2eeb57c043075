"""Deciders for the three equivalence relations, with verifiable witnesses.

* permutation equality: a relabeling of the alphabet carrying one basis onto
  the other (the strongest relation);
* conjugacy of the quantised systems: a vertex bijection plus one global
  letter permutation intertwining every prepend map (equivalent to
  permutation equality, which the test suite cross-checks);
* local conjugacy: an isomorphism of the unlabeled directed multigraphs,
  carrying a per-vertex letter bijection (the weakest relation; equivalent to
  unitary equivalence of the associated modules, see `correspondence`).

All searches are small-scale backtracking with color refinement; the returned
witnesses are re-validated by independent checkers.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Optional

from .ideals import GeneratorPattern, MonomialIdeal
from .quantised import QuantisedSystem
from .words import Word, word_key

Permutation = tuple[int, ...]  # sigma[i-1] is the image of letter i


@dataclass(frozen=True)
class ConjugacyWitness:
    """Conjugacy data: `vertex_map[c]` is the image in the first system of
    class c of the second, and `label_permutation` renames the letters of the
    second system into the first."""

    label_permutation: Permutation
    vertex_map: tuple[int, ...]


@dataclass(frozen=True)
class LocalWitness:
    """Multigraph isomorphism data: `vertex_map` as above, and for each class
    c of the second system a bijection from its defined letters onto the
    defined letters of the image class, stored as sorted pairs."""

    vertex_map: tuple[int, ...]
    letter_bijections: tuple[tuple[tuple[int, int], ...], ...]

    def bijection_at(self, c: int) -> dict[int, int]:
        return dict(self.letter_bijections[c])


# ---------------------------------------------------------------------------
# permutation equality
# ---------------------------------------------------------------------------


def _permute_word(sigma: Permutation, word: Word) -> Word:
    return tuple(sigma[letter - 1] for letter in word)


def _permute_pattern(sigma: Permutation, p: GeneratorPattern) -> GeneratorPattern:
    return GeneratorPattern(
        _permute_word(sigma, p.u), _permute_word(sigma, p.v), _permute_word(sigma, p.w)
    )


def _letter_profile(ideal: MonomialIdeal, letter: int) -> tuple:
    # Invariants of a letter under relabeling: occurrence counts by position.
    words = sorted(ideal.basis, key=word_key)
    starts = sum(1 for w in words if w and w[0] == letter)
    ends = sum(1 for w in words if w and w[-1] == letter)
    occurrences = sum(w.count(letter) for w in words)
    pat = sum(
        p.u.count(letter) + p.v.count(letter) + p.w.count(letter)
        for p in ideal.patterns
    )
    return (starts, ends, occurrences, pat)


def permutation_equal(
    a: MonomialIdeal, b: MonomialIdeal
) -> Optional[Permutation]:
    """A permutation sigma with sigma(basis(a)) = basis(b), or None.

    Returns the lexicographically least such permutation; absent whenever the
    alphabet sizes differ.
    """
    if a.d != b.d:
        return None
    d = a.d
    if len(a.basis) != len(b.basis) or len(a.patterns) != len(b.patterns):
        return None
    profiles_a = {i: _letter_profile(a, i) for i in range(1, d + 1)}
    profiles_b = {i: _letter_profile(b, i) for i in range(1, d + 1)}
    if sorted(profiles_a.values()) != sorted(profiles_b.values()):
        return None
    candidates = {
        i: [j for j in range(1, d + 1) if profiles_a[i] == profiles_b[j]]
        for i in range(1, d + 1)
    }
    basis_b = set(b.basis)
    patterns_b = set(b.patterns)
    for images in itertools.product(*(candidates[i] for i in range(1, d + 1))):
        if len(set(images)) != d:
            continue
        sigma = tuple(images)
        if {_permute_word(sigma, w) for w in a.basis} != basis_b:
            continue
        if {_permute_pattern(sigma, p) for p in a.patterns} != patterns_b:
            continue
        return sigma
    return None


# ---------------------------------------------------------------------------
# color refinement helpers
# ---------------------------------------------------------------------------


def _refine(colors_a: list, colors_b: list, step_a, step_b) -> tuple[list[int], list[int]]:
    """Joint Weisfeiler-style refinement of the two vertex colorings; the
    step callbacks report each vertex's colored neighborhood."""
    while True:
        sig_a = [(colors_a[v], step_a(v, colors_a, colors_b)) for v in range(len(colors_a))]
        sig_b = [(colors_b[v], step_b(v, colors_a, colors_b)) for v in range(len(colors_b))]
        palette = {sig: idx for idx, sig in enumerate(sorted(set(sig_a) | set(sig_b)))}
        new_a = [palette[s] for s in sig_a]
        new_b = [palette[s] for s in sig_b]
        if new_a == colors_a and new_b == colors_b:
            return colors_a, colors_b
        colors_a, colors_b = new_a, new_b


def _initial_palette(tags_a: list, tags_b: list) -> tuple[list[int], list[int]]:
    palette = {t: idx for idx, t in enumerate(sorted(set(tags_a) | set(tags_b)))}
    return [palette[t] for t in tags_a], [palette[t] for t in tags_b]


def _backtrack_bijection(
    n: int,
    candidates: list[list[int]],
    consistent,
) -> Optional[list[int]]:
    """Find a bijection g with g[v] in candidates[v] and `consistent` holding
    after each assignment; vertices are tried sparsest-first."""
    order = sorted(range(n), key=lambda v: (len(candidates[v]), v))
    assignment: dict[int, int] = {}
    used: set[int] = set()

    def place(k: int) -> bool:
        if k == n:
            return True
        v = order[k]
        for image in candidates[v]:
            if image in used:
                continue
            assignment[v] = image
            if consistent(assignment, v):
                used.add(image)
                if place(k + 1):
                    return True
                used.discard(image)
            del assignment[v]
        return False

    if place(0):
        return [assignment[v] for v in range(n)]
    return None


# ---------------------------------------------------------------------------
# conjugacy
# ---------------------------------------------------------------------------


def conjugate(
    sys_a: QuantisedSystem, sys_b: QuantisedSystem
) -> Optional[ConjugacyWitness]:
    """Search for a conjugacy from the second system onto the first.

    A witness consists of a letter permutation sigma and a class bijection g
    with g(Omega_b^i) = Omega_a^{sigma(i)} and g(phi_{b,i}(c)) =
    phi_{a,sigma(i)}(g(c)).  Absent whenever the alphabet sizes differ.
    """
    if sys_a.d != sys_b.d or sys_a.class_count != sys_b.class_count:
        return None
    d, n = sys_a.d, sys_b.class_count

    size_a = [len(sys_a.domains[i]) for i in range(d)]
    size_b = [len(sys_b.domains[i]) for i in range(d)]
    for sigma in itertools.permutations(range(1, d + 1)):
        if any(size_b[i - 1] != size_a[sigma[i - 1] - 1] for i in range(1, d + 1)):
            continue
        gamma = _conjugacy_vertex_map(sys_a, sys_b, sigma)
        if gamma is not None:
            witness = ConjugacyWitness(label_permutation=sigma, vertex_map=tuple(gamma))
            if verify_conjugacy(sys_a, sys_b, witness):
                return witness
    return None


def _conjugacy_vertex_map(
    sys_a: QuantisedSystem, sys_b: QuantisedSystem, sigma: Permutation
) -> Optional[list[int]]:
    d, n = sys_a.d, sys_b.class_count

    def tag_b(c: int):
        return tuple(sorted(sigma[i - 1] for i in sys_b.supp(c)))

    def tag_a(x: int):
        return tuple(sorted(sys_a.supp(x)))

    colors_a, colors_b = _initial_palette([tag_a(x) for x in range(n)], [tag_b(c) for c in range(n)])

    def step_a(x, ca, cb):
        return tuple(sorted((j, ca[sys_a.maps[j - 1][x]]) for j in sys_a.supp(x)))

    def step_b(c, ca, cb):
        return tuple(sorted((sigma[i - 1], cb[sys_b.maps[i - 1][c]]) for i in sys_b.supp(c)))

    colors_a, colors_b = _refine(colors_a, colors_b, step_a, step_b)
    if sorted(colors_a) != sorted(colors_b):
        return None
    candidates = [
        [x for x in range(n) if colors_a[x] == colors_b[c]] for c in range(n)
    ]

    def consistent(assignment: dict[int, int], c: int) -> bool:
        x = assignment[c]
        for i in sys_b.supp(c):
            j = sigma[i - 1]
            if x not in sys_a.domains[j - 1]:
                return False
            target_b = sys_b.maps[i - 1][c]
            if target_b in assignment and assignment[target_b] != sys_a.maps[j - 1][x]:
                return False
        # Also honor constraints from already assigned predecessors.
        for c2, x2 in assignment.items():
            if c2 == c:
                continue
            for i in sys_b.supp(c2):
                if sys_b.maps[i - 1][c2] == c:
                    if sys_a.maps[sigma[i - 1] - 1][x2] != x:
                        return False
        return True

    return _backtrack_bijection(n, candidates, consistent)


def verify_conjugacy(
    sys_a: QuantisedSystem, sys_b: QuantisedSystem, witness: ConjugacyWitness
) -> bool:
    """Independent point-by-point validation of a conjugacy witness."""
    d, n = sys_a.d, sys_b.class_count
    sigma, gamma = witness.label_permutation, witness.vertex_map
    if sys_a.d != sys_b.d or sys_a.class_count != n or len(gamma) != n:
        return False
    if sorted(sigma) != list(range(1, d + 1)) or sorted(gamma) != list(range(n)):
        return False
    for i in range(1, d + 1):
        j = sigma[i - 1]
        if {gamma[c] for c in sys_b.domains[i - 1]} != set(sys_a.domains[j - 1]):
            return False
        for c in sys_b.domains[i - 1]:
            if gamma[sys_b.maps[i - 1][c]] != sys_a.maps[j - 1][gamma[c]]:
                return False
    return True


# ---------------------------------------------------------------------------
# local conjugacy (unlabeled multigraph isomorphism)
# ---------------------------------------------------------------------------


def _adjacency(system: QuantisedSystem) -> list[Counter]:
    adj: list[Counter] = [Counter() for _ in range(system.class_count)]
    for letter in range(1, system.d + 1):
        for c in system.domains[letter - 1]:
            adj[c][system.maps[letter - 1][c]] += 1
    return adj


def locally_conjugate(
    sys_a: QuantisedSystem, sys_b: QuantisedSystem
) -> Optional[LocalWitness]:
    """Isomorphism of the unlabeled directed multigraphs, with per-vertex
    letter bijections; absent when none exists or the alphabet sizes differ.
    """
    if sys_a.d != sys_b.d or sys_a.class_count != sys_b.class_count:
        return None
    n = sys_b.class_count
    adj_a, adj_b = _adjacency(sys_a), _adjacency(sys_b)
    in_a, in_b = [Counter() for _ in range(n)], [Counter() for _ in range(n)]
    for src, counter in enumerate(adj_a):
        for dst, mult in counter.items():
            in_a[dst][src] += mult
    for src, counter in enumerate(adj_b):
        for dst, mult in counter.items():
            in_b[dst][src] += mult

    def degree_tag(adj, inc, v):
        return (
            tuple(sorted(adj[v].values())),
            tuple(sorted(inc[v].values())),
            adj[v].get(v, 0),
        )

    colors_a, colors_b = _initial_palette(
        [degree_tag(adj_a, in_a, v) for v in range(n)],
        [degree_tag(adj_b, in_b, v) for v in range(n)],
    )

    def step(adj, inc):
        def inner(v, ca, cb, colors):
            out = tuple(sorted((mult, colors[t]) for t, mult in adj[v].items()))
            inn = tuple(sorted((mult, colors[s]) for s, mult in inc[v].items()))
            return (out, inn)

        return inner

    step_a_raw, step_b_raw = step(adj_a, in_a), step(adj_b, in_b)
    colors_a, colors_b = _refine(
        colors_a,
        colors_b,
        lambda v, ca, cb: step_a_raw(v, ca, cb, ca),
        lambda v, ca, cb: step_b_raw(v, ca, cb, cb),
    )
    if sorted(colors_a) != sorted(colors_b):
        return None
    candidates = [[x for x in range(n) if colors_a[x] == colors_b[c]] for c in range(n)]

    def consistent(assignment: dict[int, int], c: int) -> bool:
        x = assignment[c]
        for target, mult in adj_b[c].items():
            if target in assignment and adj_a[x].get(assignment[target], 0) != mult:
                return False
        for c2, x2 in assignment.items():
            if c2 == c:
                continue
            for target, mult in adj_b[c2].items():
                if target == c and adj_a[x2].get(x, 0) != mult:
                    return False
        return True

    gamma = _backtrack_bijection(n, candidates, consistent)
    if gamma is None:
        return None
    # Full multiplicity check (the backtracker only enforced assigned pairs).
    for c in range(n):
        image = Counter({gamma[t]: mult for t, mult in adj_b[c].items()})
        if image != adj_a[gamma[c]]:
            return None

    bijections = []
    for c in range(n):
        pairs: list[tuple[int, int]] = []
        targets_b: dict[int, list[int]] = {}
        for i in sys_b.supp(c):
            targets_b.setdefault(sys_b.maps[i - 1][c], []).append(i)
        targets_a: dict[int, list[int]] = {}
        for j in sys_a.supp(gamma[c]):
            targets_a.setdefault(sys_a.maps[j - 1][gamma[c]], []).append(j)
        for target, letters in sorted(targets_b.items()):
            partners = targets_a[gamma[target]]
            pairs.extend(zip(sorted(letters), sorted(partners)))
        bijections.append(tuple(sorted(pairs)))

    witness = LocalWitness(vertex_map=tuple(gamma), letter_bijections=tuple(bijections))
    return witness if verify_local(sys_a, sys_b, witness) else None


def verify_local(
    sys_a: QuantisedSystem, sys_b: QuantisedSystem, witness: LocalWitness
) -> bool:
    """Independent point-by-point validation of a local-conjugacy witness."""
    n = sys_b.class_count
    gamma = witness.vertex_map
    if sys_a.d != sys_b.d or sys_a.class_count != n or len(gamma) != n:
        return False
    if sorted(gamma) != list(range(n)):
        return False
    if len(witness.letter_bijections) != n:
        return False
    for c in range(n):
        pi = witness.bijection_at(c)
        supp_b = set(sys_b.supp(c))
        supp_a = set(sys_a.supp(gamma[c]))
        if len(supp_b) != len(supp_a):
            return False
        if set(pi.keys()) != supp_b or set(pi.values()) != supp_a:
            return False
        if len(set(pi.values())) != len(pi):
            return False
        for i, j in pi.items():
            if gamma[sys_b.maps[i - 1][c]] != sys_a.maps[j - 1][gamma[c]]:
                return False
    return True


def conjugacy_to_local(
    sys_b: QuantisedSystem, witness: ConjugacyWitness
) -> LocalWitness:
    """A conjugacy witness restricts to a local one (same vertex map, the
    global permutation restricted to each support)."""
    sigma = witness.label_permutation
    bijections = tuple(
        tuple(sorted((i, sigma[i - 1]) for i in sys_b.supp(c)))
        for c in range(sys_b.class_count)
    )
    return LocalWitness(vertex_map=witness.vertex_map, letter_bijections=bijections)


def invert_conjugacy(witness: ConjugacyWitness) -> ConjugacyWitness:
    """The inverse witness, certifying the symmetric statement."""
    n = len(witness.vertex_map)
    d = len(witness.label_permutation)
    inv_gamma = [0] * n
    for c, x in enumerate(witness.vertex_map):
        inv_gamma[x] = c
    inv_sigma = [0] * d
    for i, j in enumerate(witness.label_permutation, start=1):
        inv_sigma[j - 1] = i
    return ConjugacyWitness(tuple(inv_sigma), tuple(inv_gamma))


def invert_local(
    sys_a: QuantisedSystem, sys_b: QuantisedSystem, witness: LocalWitness
) -> LocalWitness:
    """The inverse witness for the symmetric statement."""
    n = len(witness.vertex_map)
    inv_gamma = [0] * n
    for c, x in enumerate(witness.vertex_map):
        inv_gamma[x] = c
    bijections = []
    for x in range(n):
        c = inv_gamma[x]
        pi = witness.bijection_at(c)
        bijections.append(tuple(sorted((j, i) for i, j in pi.items())))
    return LocalWitness(vertex_map=tuple(inv_gamma), letter_bijections=tuple(bijections))
