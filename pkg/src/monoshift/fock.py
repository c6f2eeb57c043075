"""Truncated Fock representation: sparse shift matrices and exact checks.

The truncation at length L spans the allowable words of length <= L.  The
shift T_mu maps e_nu to e_{mu nu} when the concatenation is allowable and
still fits, and to 0 otherwise; all matrices here have integer entries and
every identity is checked with exact integer arithmetic.  Operators send the
top level to 0, so relation checks restrict to the interior compression
(basis vectors short enough that nothing in the identity overflows), where
the identities provably hold without truncation artifacts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

import numpy as np
from scipy import sparse

from .errors import (
    InternalInvariantError,
    NoConvergenceError,
    NotClassConstantError,
    PreconditionViolationError,
    TruncationTooShallowError,
)
from .ideals import MonomialIdeal, allowable_up_to
from .quantised import QuantisedSystem
from .words import Word, check_letters


class SparseOp:
    """Immutable sparse integer matrix.

    Entries are exact int64; shifts and projections are 0/1 and their sums
    and products stay well inside the integer range at these dimensions, so
    equality checks are exact.
    """

    __slots__ = ("dim", "_m")

    def __init__(self, dim: int, matrix: sparse.spmatrix):
        m = sparse.csr_matrix(matrix, shape=(dim, dim), dtype=np.int64, copy=True)
        m.sum_duplicates()
        m.eliminate_zeros()
        self.dim = dim
        self._m = m

    @classmethod
    def from_entries(cls, dim: int, entries: Mapping[tuple[int, int], int]) -> "SparseOp":
        if entries:
            rows, cols, vals = zip(*(((r, c, v)) for (r, c), v in entries.items()))
            m = sparse.coo_matrix((vals, (rows, cols)), shape=(dim, dim), dtype=np.int64)
        else:
            m = sparse.coo_matrix((dim, dim), dtype=np.int64)
        return cls(dim, m.tocsr())

    @classmethod
    def zero(cls, dim: int) -> "SparseOp":
        return cls(dim, sparse.csr_matrix((dim, dim), dtype=np.int64))

    @classmethod
    def identity(cls, dim: int) -> "SparseOp":
        return cls(dim, sparse.identity(dim, dtype=np.int64, format="csr"))

    @property
    def nnz(self) -> int:
        return int(self._m.nnz)

    def __matmul__(self, other: "SparseOp") -> "SparseOp":
        return SparseOp(self.dim, self._m @ other._m)

    def __add__(self, other: "SparseOp") -> "SparseOp":
        return SparseOp(self.dim, self._m + other._m)

    def __sub__(self, other: "SparseOp") -> "SparseOp":
        return SparseOp(self.dim, self._m - other._m)

    def __rmul__(self, scalar: int) -> "SparseOp":
        return SparseOp(self.dim, scalar * self._m)

    def adjoint(self) -> "SparseOp":
        return SparseOp(self.dim, self._m.transpose())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseOp):
            return NotImplemented
        return self.dim == other.dim and (self._m - other._m).nnz == 0

    def __hash__(self):  # pragma: no cover - identity hashing only
        return id(self)

    def is_zero(self) -> bool:
        return self._m.nnz == 0

    def is_diagonal(self) -> bool:
        coo = self._m.tocoo()
        return bool(np.all(coo.row == coo.col))

    def diagonal(self) -> np.ndarray:
        return self._m.diagonal()

    def commutes_with(self, other: "SparseOp") -> bool:
        return (self._m @ other._m - other._m @ self._m).nnz == 0

    def entries(self):
        coo = self._m.tocoo()
        return sorted(zip(coo.row.tolist(), coo.col.tolist(), coo.data.tolist()))

    def compress(self, n: int) -> "SparseOp":
        """Top-left n x n block (the interior compression)."""
        return SparseOp(n, self._m[:n, :n])

    def rank_exact(self) -> int:
        """Exact rank over the rationals.

        Partial 0/1 permutations and diagonals short-circuit; the general
        path runs rational Gaussian elimination on the nonzero submatrix.
        """
        coo = self._m.tocoo()
        if coo.nnz == 0:
            return 0
        if self.is_diagonal():
            return int(np.count_nonzero(coo.data))
        rows = coo.row.tolist()
        cols = coo.col.tolist()
        if len(set(rows)) == len(rows) and len(set(cols)) == len(cols):
            return coo.nnz
        row_ids = sorted(set(rows))
        col_ids = sorted(set(cols))
        rpos = {r: k for k, r in enumerate(row_ids)}
        cpos = {c: k for k, c in enumerate(col_ids)}
        dense = [[Fraction(0)] * len(col_ids) for _ in row_ids]
        for r, c, v in zip(rows, cols, coo.data.tolist()):
            dense[rpos[r]][cpos[c]] += int(v)
        rank = 0
        nrows, ncols = len(row_ids), len(col_ids)
        for pivot_col in range(ncols):
            pivot = next((r for r in range(rank, nrows) if dense[r][pivot_col] != 0), None)
            if pivot is None:
                continue
            dense[rank], dense[pivot] = dense[pivot], dense[rank]
            inv = dense[rank][pivot_col]
            for r in range(nrows):
                if r != rank and dense[r][pivot_col] != 0:
                    factor = dense[r][pivot_col] / inv
                    dense[r] = [x - factor * y for x, y in zip(dense[r], dense[rank])]
            rank += 1
            if rank == nrows:
                break
        return rank

    def coordinate_dump(self) -> str:
        """'row col value' text lines for external inspection."""
        return "\n".join(f"{r} {c} {v}" for r, c, v in self.entries()) + "\n"


@dataclass(frozen=True, eq=False)
class FockTruncation:
    """Basis of allowable words of length <= L, grouped by length."""

    ideal: MonomialIdeal
    L: int
    basis: tuple[Word, ...]
    index: dict[Word, int]
    level_sizes: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def interior_dim(self, margin: int) -> int:
        """Number of basis vectors of length <= L - margin."""
        keep = self.L - margin
        if keep < 0:
            return 0
        return sum(self.level_sizes[: keep + 1])

    def levels_below(self, k: int) -> int:
        """Dimension of the span of words of length < k."""
        return sum(self.level_sizes[: max(k, 0)])


def build_fock(ideal: MonomialIdeal, L: int) -> FockTruncation:
    """Enumerate the truncation basis (exact for starred families too)."""
    if L < 1:
        raise ValueError("truncation length must be >= 1")
    basis = allowable_up_to(ideal, L)
    sizes = [0] * (L + 1)
    for w in basis:
        sizes[len(w)] += 1
    return FockTruncation(
        ideal=ideal,
        L=L,
        basis=tuple(basis),
        index={w: i for i, w in enumerate(basis)},
        level_sizes=tuple(sizes),
    )


def word_operator(fock: FockTruncation, word: Word) -> SparseOp:
    """T_word on the truncation: e_nu -> e_{word nu} when allowable and
    within length, else 0.  The empty word gives the identity; forbidden
    words give the zero matrix."""
    word = check_letters(word, fock.ideal.d)
    if word == ():
        return SparseOp.identity(fock.dim)
    if fock.ideal.is_forbidden(word):
        return SparseOp.zero(fock.dim)
    entries: dict[tuple[int, int], int] = {}
    for col, nu in enumerate(fock.basis):
        if len(word) + len(nu) > fock.L:
            continue
        target = word + nu
        if target in fock.index:
            entries[(fock.index[target], col)] = 1
    return SparseOp.from_entries(fock.dim, entries)


def vacuum_projection(fock: FockTruncation) -> SparseOp:
    return SparseOp.from_entries(fock.dim, {(0, 0): 1})


def gram(fock: FockTruncation, word: Word) -> SparseOp:
    """T_word^* T_word (diagonal projection on the extendable vectors)."""
    t = word_operator(fock, word)
    return t.adjoint() @ t


def range_projection(fock: FockTruncation, word: Word) -> SparseOp:
    t = word_operator(fock, word)
    return t @ t.adjoint()


def q_projection(fock: FockTruncation, bits: Sequence[int]) -> SparseOp:
    """Product of the letter grams and their complements per the bit pattern."""
    if len(bits) != fock.ideal.d:
        raise ValueError("bit pattern length must equal the alphabet size")
    out = SparseOp.identity(fock.dim)
    eye = SparseOp.identity(fock.dim)
    for letter, bit in enumerate(bits, start=1):
        g = gram(fock, (letter,))
        out = out @ (g if bit else eye - g)
    return out


# ---------------------------------------------------------------------------
# relation reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RelationCheck:
    name: str
    passed: bool
    cases: int
    margin: int
    detail: str = ""


@dataclass(frozen=True)
class RelationReport:
    checks: tuple[RelationCheck, ...]

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def as_dict(self) -> dict:
        return {
            c.name: {
                "passed": c.passed,
                "cases": c.cases,
                "interior_margin": c.margin,
                **({"detail": c.detail} if c.detail else {}),
            }
            for c in self.checks
        }


def _default_word_cap(ideal: MonomialIdeal, L: int) -> int:
    if ideal.is_finite_type and ideal.type_k >= 1:
        cap = min(ideal.type_k + 1, 3)
    else:
        cap = 2
    return min(cap, L - 1)


def verify_generator_relations(
    fock: FockTruncation, max_word_len: Optional[int] = None
) -> RelationReport:
    """Exact verification of the shift-operator identities on the interior.

    Words range over the allowable words of length <= max_word_len.  Raises
    TruncationTooShallowError when even the deepest identity has no interior.
    """
    ideal, L = fock.ideal, fock.L
    m = max_word_len if max_word_len is not None else _default_word_cap(ideal, L)
    if m < 1 or L - (m + 1) < 0:
        raise TruncationTooShallowError(
            f"no interior at word length {m} inside truncation L={L}"
        )
    words = [w for w in allowable_up_to(ideal, m)]
    nonempty = [w for w in words if w]
    ops = {w: word_operator(fock, w) for w in words}
    grams = {w: ops[w].adjoint() @ ops[w] for w in words}
    ranges = {w: ops[w] @ ops[w].adjoint() for w in words}
    p_vac = vacuum_projection(fock)
    eye = SparseOp.identity(fock.dim)
    checks: list[RelationCheck] = []

    # (1) T_mu^* T_mu is the diagonal projection on {nu : mu nu allowable}.
    ok, cases = True, 0
    for w in nonempty:
        g = grams[w]
        inner = fock.interior_dim(len(w))
        ok &= g.is_diagonal() and (g @ g == g)
        diag = g.diagonal()
        for col in range(inner):
            expected = 0 if ideal.is_forbidden(w + fock.basis[col]) else 1
            ok &= int(diag[col]) == expected
        cases += 1
    checks.append(RelationCheck("gram_projection", ok, cases, max(len(w) for w in words)))

    # (2) T_nu T_nu^* is the diagonal projection on {nu mu : mu allowable}.
    ok, cases = True, 0
    for w in nonempty:
        r = ranges[w]
        ok &= r.is_diagonal() and (r @ r == r)
        diag = r.diagonal()
        for col, x in enumerate(fock.basis):
            expected = 1 if x[: len(w)] == w else 0
            ok &= int(diag[col]) == expected
        cases += 1
    checks.append(RelationCheck("range_projection", ok, cases, 0))

    # (3) Same length, different words: orthogonal ranges.
    ok, cases = True, 0
    for w1 in nonempty:
        for w2 in nonempty:
            if len(w1) != len(w2):
                continue
            product = ops[w1].adjoint() @ ops[w2]
            if w1 == w2:
                ok &= product == grams[w1] and not product.is_zero()
            else:
                ok &= product.is_zero()
            cases += 1
    checks.append(RelationCheck("orthogonal_ranges", ok, cases, 0))

    # (4) Grams commute with each other and with range projections.
    ok, cases = True, 0
    for w1 in nonempty:
        for w2 in nonempty:
            ok &= grams[w1].commutes_with(grams[w2])
            ok &= grams[w1].commutes_with(ranges[w2])
            cases += 2
    checks.append(RelationCheck("gram_commutation", ok, cases, 0))

    # (5) T_mu^* T_mu . T_i = T_i . T_{mu i}^* T_{mu i}, including the
    # degenerate case where mu i is forbidden.
    ok, cases = True, 0
    for w in words:
        for i in range(1, ideal.d + 1):
            lhs = grams[w] @ ops[(i,)]
            extended = w + (i,)
            t_ext = word_operator(fock, extended)
            rhs = ops[(i,)] @ (t_ext.adjoint() @ t_ext)
            inner = fock.interior_dim(len(w) + 1)
            ok &= lhs.compress(inner) == rhs.compress(inner)
            cases += 1
    checks.append(
        RelationCheck("letter_covariance", ok, cases, max(len(w) for w in words) + 1)
    )

    # (6) sum_i T_i T_i^* + P_vac = I (exact at the full truncation).
    total = p_vac
    for i in range(1, ideal.d + 1):
        total = total + ranges[(i,)]
    checks.append(RelationCheck("identity_decomposition", total == eye, 1, 0))

    # (7) T_mu P_vac T_nu^* is the matrix unit e_nu -> e_mu.
    ok, cases = True, 0
    produced: set[tuple[int, int]] = set()
    for w1 in words:
        for w2 in words:
            unit = ops[w1] @ p_vac @ ops[w2].adjoint()
            expected = SparseOp.from_entries(
                fock.dim, {(fock.index[w1], fock.index[w2]): 1}
            )
            ok &= unit == expected
            produced.add((fock.index[w1], fock.index[w2]))
            cases += 1
    checks.append(RelationCheck("rank_one_generation", ok, cases, max(len(w) for w in words)))

    # (8) The rank-one operators above exhaust all matrix units between the
    # enumerated basis words: the compacts at this scale are generated.
    span_ok = len(produced) == len(words) ** 2
    checks.append(
        RelationCheck(
            "compacts_generated",
            span_ok and ok,
            len(produced),
            max(len(w) for w in words),
        )
    )

    return RelationReport(tuple(checks))


def e_set(ideal: MonomialIdeal, letter: int, k: int) -> list[Word]:
    """Allowable words of length exactly k that stay allowable with `letter`
    prepended (the defect decomposition index set)."""
    return [
        w
        for w in allowable_up_to(ideal, k)
        if len(w) == k and not ideal.is_forbidden((letter,) + w)
    ]


def verify_covariance_relations(ideal: MonomialIdeal, L: int) -> RelationReport:
    """Exact verification of the partial-isometry covariance relations and
    the finite-rank defect of the quotient decomposition.

    Requires finite type k and L >= 2k + 2.
    """
    if not ideal.is_finite_type:
        raise TruncationTooShallowError("covariance checks need finite type")
    k = ideal.type_k
    if L < 2 * k + 2:
        raise TruncationTooShallowError(f"need L >= {2 * k + 2} for type {k}, got {L}")
    fock = build_fock(ideal, L)
    eye = SparseOp.identity(fock.dim)
    p_vac = vacuum_projection(fock)
    letters = [word_operator(fock, (i,)) for i in range(1, ideal.d + 1)]
    checks: list[RelationCheck] = []

    # (ii) T_j^* T_i = delta_ij T_i^* T_i, exact at the full truncation.
    ok, cases = True, 0
    for i, ti in enumerate(letters, start=1):
        for j, tj in enumerate(letters, start=1):
            product = tj.adjoint() @ ti
            ok &= product == (ti.adjoint() @ ti) if i == j else product.is_zero()
            cases += 1
    checks.append(RelationCheck("diagonal_gram", ok, cases, 0))

    # (iii) Grams commute with range projections, on the interior.
    ok, cases = True, 0
    for w in allowable_up_to(ideal, k + 1):
        g = gram(fock, w)
        for t in letters:
            r = t @ t.adjoint()
            inner = fock.interior_dim(len(w) + 1)
            lhs = (g @ r).compress(inner)
            rhs = (r @ g).compress(inner)
            ok &= lhs == rhs
            cases += 1
    checks.append(RelationCheck("gram_range_commutation", ok, cases, k + 2))

    # (iv) The kernel product realises the vacuum defect.
    witnesses = kernel_witnesses(ideal)
    total_range = letters[0] @ letters[0].adjoint()
    for t in letters[1:]:
        total_range = total_range + (t @ t.adjoint())
    if witnesses is not None:
        product = SparseOp.identity(fock.dim)
        for w in witnesses:
            product = product @ gram(fock, w)
        margin = max(len(w) for w in witnesses)
        inner = fock.interior_dim(margin)
        lhs = (eye - product).compress(inner)
        rhs = total_range.compress(inner)
        checks.append(RelationCheck("identity_vs_kernel_product", lhs == rhs, 1, margin))
    else:
        checks.append(
            RelationCheck(
                "identity_vs_kernel_product",
                total_range + p_vac == eye,
                1,
                0,
                detail="no kernel witnesses; defect is exactly the vacuum projection",
            )
        )

    # Quotient decomposition: T_i^* T_i - sum_{mu in E_i^k} T_mu T_mu^* is
    # the diagonal projection on the short extendable words, so its rank is
    # bounded by the dimension of the levels below k.
    ok, cases = True, 0
    margin = k + 1
    inner = fock.interior_dim(margin)
    if inner <= 0:
        raise TruncationTooShallowError("no interior for the defect check")
    bound = fock.levels_below(k)
    for i in range(1, ideal.d + 1):
        defect = gram(fock, (i,))
        for mu in e_set(ideal, i, k):
            defect = defect - range_projection(fock, mu)
        block = defect.compress(inner)
        ok &= block.is_diagonal()
        diag = block.diagonal()
        for col in range(inner):
            nu = fock.basis[col]
            expected = 1 if len(nu) < k and not ideal.is_forbidden((i,) + nu) else 0
            ok &= int(diag[col]) == expected
        ok &= block.rank_exact() <= bound
        cases += 1
    checks.append(RelationCheck("finite_rank_defect", ok, cases, margin))

    return RelationReport(tuple(checks))


def kernel_witnesses(ideal: MonomialIdeal) -> Optional[tuple[Word, ...]]:
    """For each letter i, the least allowable word mu_i with mu_i i
    forbidden, when all letters admit one; None otherwise.

    A minimal forbidden extension mu i has a basis word as suffix ending in
    i, so letter i admits a witness iff some basis word (or starred-family
    instance) ends with i; the witness is that word with its last letter
    dropped.
    """
    enders: dict[int, list[Word]] = {i: [] for i in range(1, ideal.d + 1)}
    for w in sorted(ideal.basis, key=lambda w: (len(w), w)):
        enders[w[-1]].append(w[:-1])
    for p in sorted(
        ideal.patterns, key=lambda p: (len(p.instance(1)), p.instance(1))
    ):
        inst = p.instance(1)
        enders[inst[-1]].append(inst[:-1])
    out = []
    for i in range(1, ideal.d + 1):
        if not enders[i]:
            return None
        out.append(min(enders[i], key=lambda w: (len(w), w)))
    return tuple(out)


# ---------------------------------------------------------------------------
# norms
# ---------------------------------------------------------------------------


def norm_squared_exact(op: SparseOp) -> Optional[int]:
    """Exact ||op||^2 when op^* op is diagonal (max diagonal entry); None
    otherwise."""
    g = op.adjoint() @ op
    if not g.is_diagonal():
        return None
    diag = g.diagonal()
    return int(diag.max()) if len(diag) else 0


def operator_norm(
    op: SparseOp, tol: float = 1e-9, max_iter: int = 10_000
) -> float:
    """Operator norm: exact square root when the gram is diagonal, power
    iteration on op^* op otherwise (raises NoConvergenceError at the cap,
    carrying the best estimate)."""
    exact = norm_squared_exact(op)
    if exact is not None:
        return math.sqrt(exact)
    g = (op.adjoint() @ op)._m.astype(np.float64)
    v = np.ones(op.dim) / math.sqrt(op.dim)
    previous = 0.0
    for _ in range(max_iter):
        w = g @ v
        norm_w = float(np.linalg.norm(w))
        if norm_w == 0.0:
            return 0.0
        v = w / norm_w
        rayleigh = float(v @ (g @ v))
        if abs(rayleigh - previous) <= tol * max(1.0, abs(rayleigh)):
            return math.sqrt(rayleigh)
        previous = rayleigh
    raise NoConvergenceError(
        f"power iteration did not converge in {max_iter} steps",
        estimate=math.sqrt(previous),
    )


def class_diagonal_values(
    fock: FockTruncation, op: SparseOp, system: QuantisedSystem
) -> dict[int, int]:
    """Read a class-constant diagonal off the truncation.

    Raises NotClassConstantError when the operator is not diagonal or its
    diagonal takes different values inside one predecessor class.
    """
    if not op.is_diagonal():
        raise NotClassConstantError("operator is not diagonal")
    diag = op.diagonal()
    margin = system.level
    values: dict[int, int] = {}
    usable = fock.interior_dim(margin)
    for col in range(usable):
        c = system.class_of_word(fock.basis[col])
        v = int(diag[col])
        if c in values and values[c] != v:
            raise NotClassConstantError(
                f"diagonal not constant on class {c}: {values[c]} vs {v}"
            )
        values.setdefault(c, v)
    return values


def essential_norm_diagonal(
    system: QuantisedSystem, class_values: Mapping[int, float]
) -> float:
    """Essential norm of a class-constant diagonal operator: the largest
    value over the infinite classes (a finite class contributes compactly),
    0 when every class is finite."""
    if set(class_values) != set(range(system.class_count)):
        raise NotClassConstantError("class values must cover every class exactly")
    if any(v < 0 for v in class_values.values()):
        raise NotClassConstantError("diagonal values must be nonnegative")
    best = 0.0
    for c, flag in enumerate(system.infinite_flags):
        if flag:
            best = max(best, float(class_values[c]))
    return best


def cenv_gap_check(
    ideal: MonomialIdeal,
    witness_words: Sequence[Word],
    system: Optional[QuantisedSystem] = None,
) -> tuple[int, int]:
    """Exact (full norm^2, essential norm^2) for T = sum_i T_{mu_i}.

    Preconditions (PreconditionViolationError otherwise): one word per
    letter, pairwise distinct, allowable, all of the same length, and
    mu_i . i forbidden for each i.  Then the full norm squared is the number
    of words, the essential norm squared is at most one less, and a strict
    gap certifies that the quotient is not isometric on the shift algebra.
    """
    words = [check_letters(w, ideal.d) for w in witness_words]
    if len(words) != ideal.d:
        raise PreconditionViolationError(
            f"need one word per letter ({ideal.d}), got {len(words)}", offender=None
        )
    if len(set(words)) != len(words):
        dup = next(w for w in words if words.count(w) > 1)
        raise PreconditionViolationError("witness words must be distinct", offender=dup)
    lengths = {len(w) for w in words}
    if len(lengths) != 1:
        raise PreconditionViolationError(
            "witness words must share one length", offender=max(words, key=len)
        )
    for i, w in enumerate(words, start=1):
        if ideal.is_forbidden(w):
            raise PreconditionViolationError("witness word is forbidden", offender=w)
        if not ideal.is_forbidden(w + (i,)):
            raise PreconditionViolationError(
                f"word {w!r} does not forbid letter {i} on the right", offender=w
            )

    n = len(words)
    if system is None:
        from .quantised import quantised_system

        system = quantised_system(ideal)

    # Diagonal of sum T_{mu_i}^* T_{mu_i} on a class: how many witness words
    # extend its representative on the left.
    class_values = {
        c: sum(
            1
            for w in words
            if not ideal.is_forbidden(w + system.representatives[c])
        )
        for c in range(system.class_count)
    }
    full_sq = max(class_values.values())
    if full_sq != n:
        raise InternalInvariantError(
            f"full norm squared {full_sq} != word count {n}"
        )
    ess_sq = int(essential_norm_diagonal(system, class_values))
    if ess_sq > n - 1:
        raise InternalInvariantError(
            f"essential norm squared {ess_sq} exceeds {n - 1}"
        )
    return full_sq, ess_sq
