"""Finite model of the bimodule attached to the ideal, and its verdicts.

Everything here reduces to the finite class space: the coefficient algebra is
the functions on the classes, the module is a sum of d corners, and the left
action is encoded by the prepend maps.  The module-level facts that survive
to operator algebras are rendered as small decidable verdicts:

* kernel of the left action: zero, or the span of the vacuum projection
  (witnessed by words mu_i with mu_i i forbidden);
* the covariance ideal: the whole algebra, or the complement of the vacuum;
* the Cuntz--Pimsner dichotomy: the quotient algebra is either the Fock
  algebra itself or its quotient by the compacts, according to injectivity;
* the envelope verdict for the shift algebra (Toeplitz or Cuntz side);
* unitary equivalence of two modules, decided through local conjugacy and
  certified by a block-matrix witness that an independent checker validates.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .errors import InfiniteTypeError, InternalInvariantError
from .fock import build_fock, gram, kernel_witnesses, vacuum_projection
from .ideals import MonomialIdeal, Side, sink_search
from .quantised import QuantisedSystem, quantised_system
from .equivalence import LocalWitness, locally_conjugate
from .words import Word, word_key


class KernelKind(Enum):
    ZERO = "zero"
    SPAN_OF_VACUUM = "span_of_vacuum"


class KatsuraKind(Enum):
    FULL_ALGEBRA = "full_algebra"
    COMPLEMENT_OF_VACUUM = "complement_of_vacuum"


class EnvelopeVerdict(Enum):
    TOEPLITZ_ENVELOPE = "toeplitz"
    CUNTZ_ENVELOPE = "cuntz"
    INCONCLUSIVE = "inconclusive"


class DichotomyBranch(Enum):
    OE_EQUALS_FOCK_ALGEBRA = "fock_algebra"
    OE_EQUALS_QUOTIENT_BY_COMPACTS = "quotient_by_compacts"


@dataclass(frozen=True)
class DichotomyVerdict:
    branch: DichotomyBranch
    fock_algebra_is_free_toeplitz: bool  # the undeformed case (zero ideal)


@dataclass(frozen=True, eq=False)
class CorrespondenceModel:
    system: QuantisedSystem
    kernel: KernelKind
    vacuum_witnesses: Optional[tuple[Word, ...]]
    katsura: KatsuraKind
    full: bool
    full_certified: bool
    # Distinct generators 1 - T_mu^* T_mu of the covariance ideal, as
    # (shortest word, classes where the complement indicator is 1).
    relative_j_generators: tuple[tuple[Word, frozenset[int]], ...]


def correspondence_model(
    ideal: MonomialIdeal,
    bound: Optional[int] = None,
    verify_depth: int = 4,
) -> CorrespondenceModel:
    """Build the finite model and verify the kernel identification.

    The kernel is nonzero exactly when every letter ends a basis word; the
    witness words then realise the vacuum projection as the product of their
    grams, which is re-checked on a Fock truncation.
    """
    system = quantised_system(ideal, bound=bound)
    witnesses = kernel_witnesses(ideal)
    if witnesses is None:
        kernel = KernelKind.ZERO
        katsura = KatsuraKind.FULL_ALGEBRA
    else:
        kernel = KernelKind.SPAN_OF_VACUUM
        katsura = KatsuraKind.COMPLEMENT_OF_VACUUM
        _verify_vacuum_product(ideal, witnesses, verify_depth)

    left = sink_search(ideal, Side.LEFT, bound)
    full = left.word is None

    generators: dict[frozenset[int], Word] = {}
    for word in _prefix_action_words(system):
        support = frozenset(
            c
            for c in range(system.class_count)
            if not ideal.is_forbidden(word + system.representatives[c])
        )
        complement = frozenset(range(system.class_count)) - support
        if not complement:
            continue  # the zero generator contributes nothing
        if complement not in generators or word_key(word) < word_key(generators[complement]):
            generators[complement] = word
    rel = tuple(
        sorted(((w, comp) for comp, w in generators.items()), key=lambda t: word_key(t[0]))
    )

    return CorrespondenceModel(
        system=system,
        kernel=kernel,
        vacuum_witnesses=witnesses,
        katsura=katsura,
        full=full,
        full_certified=left.certified,
        relative_j_generators=rel,
    )


def _prefix_action_words(system: QuantisedSystem) -> list[Word]:
    # The support of a gram depends only on the trailing `level` letters of
    # the word, so words up to level + 1 exhaust the distinct generators.
    from .ideals import allowable_up_to

    return [w for w in allowable_up_to(system.ideal, system.level + 1) if w]


def _verify_vacuum_product(
    ideal: MonomialIdeal, witnesses: tuple[Word, ...], extra_depth: int
) -> None:
    depth = max(len(w) for w in witnesses) + extra_depth
    fock = build_fock(ideal, depth)
    product = gram(fock, witnesses[0])
    for w in witnesses[1:]:
        product = product @ gram(fock, w)
    margin = max(len(w) for w in witnesses)
    inner = fock.interior_dim(margin)
    if product.compress(inner) != vacuum_projection(fock).compress(inner):
        raise InternalInvariantError(
            "kernel witnesses do not realise the vacuum projection"
        )


def dichotomy_verdict(model: CorrespondenceModel) -> DichotomyVerdict:
    """Which canonical quotient of the Fock algebra the Pimsner quotient is.

    Injective left action (zero kernel) lands on the quotient by the
    compacts; a nonzero kernel collapses the quotient onto the Fock algebra
    itself.  Exactly one branch holds.  The Fock algebra is the free Toeplitz
    algebra exactly for the zero ideal.
    """
    if model.kernel is KernelKind.ZERO:
        branch = DichotomyBranch.OE_EQUALS_QUOTIENT_BY_COMPACTS
    else:
        branch = DichotomyBranch.OE_EQUALS_FOCK_ALGEBRA
    return DichotomyVerdict(
        branch=branch,
        fock_algebra_is_free_toeplitz=model.system.ideal.is_zero,
    )


def cenv_verdict(ideal: MonomialIdeal) -> EnvelopeVerdict:
    """Envelope of the shift algebra (finite type only).

    Some letter appendable to every allowable word (no basis word ends with
    it) puts the envelope on the quotient side; otherwise every letter has a
    right-forbidding witness, and if those witnesses can be taken of one
    length (always possible without left sinks, by padding on the left) the
    envelope is the Fock algebra itself.  The remaining corner is reported
    inconclusive rather than guessed.
    """
    if not ideal.is_finite_type:
        raise InfiniteTypeError("envelope verdict requires finite type")
    witnesses = kernel_witnesses(ideal)
    if witnesses is None:
        return EnvelopeVerdict.CUNTZ_ENVELOPE
    if len({len(w) for w in witnesses}) == 1:
        return EnvelopeVerdict.TOEPLITZ_ENVELOPE
    if sink_search(ideal, Side.LEFT).word is None:
        return EnvelopeVerdict.TOEPLITZ_ENVELOPE
    return EnvelopeVerdict.INCONCLUSIVE


@dataclass(frozen=True)
class BlockMatrixWitness:
    """Unitary-equivalence certificate built over a vertex bijection.

    `vertex_map[c]` is the image class; `blocks[i-1][j-1]` is the set of
    classes of the second system where the (i, j) indicator is 1.  At each
    class the restricted block is a permutation matrix between the defined
    letters, which is exactly unitarity of the module map there.
    """

    vertex_map: tuple[int, ...]
    blocks: tuple[tuple[frozenset[int], ...], ...]


def witness_from_local(witness: LocalWitness, d: int) -> BlockMatrixWitness:
    """Indicator blocks straight from the per-class letter bijections."""
    cells: list[list[set[int]]] = [[set() for _ in range(d)] for _ in range(d)]
    for c, pairs in enumerate(witness.letter_bijections):
        for i, j in pairs:
            cells[i - 1][j - 1].add(c)
    return BlockMatrixWitness(
        vertex_map=witness.vertex_map,
        blocks=tuple(tuple(frozenset(cell) for cell in row) for row in cells),
    )


def verify_block_witness(
    sys_a: QuantisedSystem, sys_b: QuantisedSystem, witness: BlockMatrixWitness
) -> bool:
    """Independent validation of all block-matrix invariants.

    Checks calibration (supports inside the domain corners), per-class
    unitarity (restricted blocks are permutation matrices), and the
    intertwining of the two actions evaluated on every class indicator.
    """
    d = sys_b.d
    n = sys_b.class_count
    gamma = witness.vertex_map
    if sys_a.d != d or sys_a.class_count != n or len(gamma) != n:
        return False
    if sorted(gamma) != list(range(n)):
        return False
    if len(witness.blocks) != d or any(len(row) != d for row in witness.blocks):
        return False

    def b(i: int, j: int, c: int) -> int:
        return 1 if c in witness.blocks[i - 1][j - 1] else 0

    # Calibration: the (i, j) indicator lives inside Omega_b^i intersected
    # with the pullback of Omega_a^j.
    for i in range(1, d + 1):
        for j in range(1, d + 1):
            for c in witness.blocks[i - 1][j - 1]:
                if c not in sys_b.domains[i - 1]:
                    return False
                if gamma[c] not in sys_a.domains[j - 1]:
                    return False

    # Unitarity: at each class the block restricted to the defined letters is
    # a permutation matrix (and support sizes agree).
    for c in range(n):
        rows = sys_b.supp(c)
        cols = sys_a.supp(gamma[c])
        if len(rows) != len(cols):
            return False
        for i in rows:
            if sum(b(i, j, c) for j in cols) != 1:
                return False
        for j in cols:
            if sum(b(i, j, c) for i in rows) != 1:
                return False
        outside = sum(
            b(i, j, c)
            for i in range(1, d + 1)
            for j in range(1, d + 1)
            if i not in rows or j not in cols
        )
        if outside != 0:
            return False

    # Intertwining on class indicators: for every target class w of the first
    # system, beta_i(gamma^* chi_w) b_ij = b_ij gamma^*(alpha_j chi_w)
    # pointwise over the classes of the second system.
    for w in range(sys_a.class_count):
        for i in range(1, d + 1):
            for j in range(1, d + 1):
                for c in range(n):
                    bij = b(i, j, c)
                    lhs = bij * (
                        1
                        if c in sys_b.domains[i - 1]
                        and gamma[sys_b.maps[i - 1][c]] == w
                        else 0
                    )
                    rhs = bij * (
                        1
                        if gamma[c] in sys_a.domains[j - 1]
                        and sys_a.maps[j - 1][gamma[c]] == w
                        else 0
                    )
                    if lhs != rhs:
                        return False
    return True


def unitary_equivalence(
    ideal_a: MonomialIdeal,
    ideal_b: MonomialIdeal,
    bound: Optional[int] = None,
) -> Optional[BlockMatrixWitness]:
    """Block-matrix witness of unitary equivalence, or None.

    Exists exactly when the systems are locally conjugate; the returned
    witness always passes `verify_block_witness`.
    """
    sys_a = quantised_system(ideal_a, bound=bound)
    sys_b = quantised_system(ideal_b, bound=bound)
    return unitary_equivalence_of_systems(sys_a, sys_b)


def unitary_equivalence_of_systems(
    sys_a: QuantisedSystem, sys_b: QuantisedSystem
) -> Optional[BlockMatrixWitness]:
    local = locally_conjugate(sys_a, sys_b)
    if local is None:
        return None
    witness = witness_from_local(local, sys_b.d)
    if not verify_block_witness(sys_a, sys_b, witness):
        raise InternalInvariantError("constructed block witness failed validation")
    return witness
