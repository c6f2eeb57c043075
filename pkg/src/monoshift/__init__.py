"""Invariants of monomial ideals in noncommuting variables.

The package computes, for an ideal generated by forbidden words over
{1, ..., d} (equivalently a forbidden-word subshift):

* the minimal basis, type, sinks, and subshift classification;
* the factor-avoidance automaton of the allowable language;
* the quantised dynamics: the finite space of predecessor classes with its
  partial prepend maps, as data and as a labeled digraph;
* the three equivalence relations (permutation equality, conjugacy, local
  conjugacy) with machine-checkable witnesses;
* truncated Fock-space shift matrices with exact verification of the
  operator identities, norms, and essential norms;
* the module-theoretic verdicts: kernel, covariance ideal, Cuntz--Pimsner
  dichotomy, envelope, and unitary equivalence with block-matrix witnesses.
"""

from .errors import (
    BoundRequiredError,
    DegenerateGeneratorError,
    ForbiddenWordError,
    InfiniteTypeError,
    InternalInvariantError,
    InvalidLetterError,
    MonoshiftError,
    NoConvergenceError,
    NotClassConstantError,
    PreconditionViolationError,
    TruncationTooShallowError,
    UnboundedSearchError,
    UnsupportedError,
)
from .ideals import (
    GeneratorPattern,
    MonomialIdeal,
    Side,
    SubshiftClass,
    classify_subshift,
    find_sink,
    from_generators,
    reverse,
    sink_search,
    subshift_class,
    zero_set_member,
)
from .language import (
    FactorAutomaton,
    build_automaton,
    count_allowable,
    enumerate_allowable,
    has_infinite_extensions,
    is_allowable,
)
from .quantised import (
    LabeledDigraph,
    QuantisedSystem,
    check_auto_continuity,
    digraph_to_dot,
    forbidden_via_dynamics,
    graph_of_ideal,
    omega_level,
    predecessor_set,
    q_projection_supports,
    quantised_system,
)
from .equivalence import (
    ConjugacyWitness,
    LocalWitness,
    conjugacy_to_local,
    conjugate,
    locally_conjugate,
    permutation_equal,
    verify_conjugacy,
    verify_local,
)
from .fock import (
    FockTruncation,
    SparseOp,
    build_fock,
    cenv_gap_check,
    class_diagonal_values,
    essential_norm_diagonal,
    operator_norm,
    verify_covariance_relations,
    verify_generator_relations,
    word_operator,
)
from .correspondence import (
    BlockMatrixWitness,
    CorrespondenceModel,
    DichotomyBranch,
    EnvelopeVerdict,
    KatsuraKind,
    KernelKind,
    cenv_verdict,
    correspondence_model,
    dichotomy_verdict,
    unitary_equivalence,
    verify_block_witness,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
