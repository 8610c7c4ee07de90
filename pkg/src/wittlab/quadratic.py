"""Quadratic modules over the integers.

A quadratic module is a free module ``Z^r`` with an ``epsilon``-symmetric
bilinear form (its Gram matrix) and a quadratic refinement ``mu`` with values
in ``Z / Lambda``. Only three form parameters exist over the integers:
``(+1, {0})``, ``(-1, 2Z)`` and ``(-1, Z)``.

Values of ``mu`` are plain ints, kept reduced: an arbitrary integer for
``Lambda = {0}``, a bit for ``Lambda = 2Z`` and always ``0`` for
``Lambda = Z`` (the quotient is trivial).
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from . import intmat
from .intmat import Matrix, Vector


class LambdaSub(enum.Enum):
    """The subgroup ``Lambda`` of the integers."""

    ZERO = "zero"
    EVEN = "even"
    ALL = "all"

    def contains(self, a: int) -> bool:
        if self is LambdaSub.ZERO:
            return a == 0
        if self is LambdaSub.EVEN:
            return a % 2 == 0
        return True


@dataclass(frozen=True)
class FormParameter:
    epsilon: int
    lambda_sub: LambdaSub

    def __post_init__(self):
        if (self.epsilon, self.lambda_sub) not in _ALLOWED:
            raise ValueError(f"not a form parameter over Z: ({self.epsilon}, {self.lambda_sub.value})")

    def reduce(self, a: int) -> int:
        """Canonical representative of ``a`` in ``Z / Lambda``."""
        if self.lambda_sub is LambdaSub.ZERO:
            return a
        if self.lambda_sub is LambdaSub.EVEN:
            return a % 2
        return 0

    def reduce_array(self, a: np.ndarray) -> np.ndarray:
        if self.lambda_sub is LambdaSub.ZERO:
            return a
        if self.lambda_sub is LambdaSub.EVEN:
            return a % 2
        return a * 0

    def check_containment(self, sample: int = 10) -> bool:
        """``{a - eps a} <= Lambda <= {a : a + eps a = 0}`` on ``|a| <= sample``."""
        e = self.epsilon
        for a in range(-sample, sample + 1):
            if not self.lambda_sub.contains(a - e * a):
                return False
            if self.lambda_sub.contains(a) and a + e * a != 0:
                return False
        return True

    @property
    def label(self) -> str:
        return f"({self.epsilon:+d},{self.lambda_sub.value})"


_ALLOWED = {(1, LambdaSub.ZERO), (-1, LambdaSub.EVEN), (-1, LambdaSub.ALL)}

SYMMETRIC = FormParameter(1, LambdaSub.ZERO)
SKEW_EVEN = FormParameter(-1, LambdaSub.EVEN)
SKEW_ALL = FormParameter(-1, LambdaSub.ALL)
FORM_PARAMETERS = (SYMMETRIC, SKEW_EVEN, SKEW_ALL)


@dataclass(frozen=True)
class ValidationResult:
    ok: bool
    invariant: str | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class QuadraticModule:
    """``(Z^rank, gram, mu)``; ``mu`` lists the values on the basis vectors.

    Construction does not enforce the axioms (degenerate and even invalid
    data can be represented); call :meth:`validate`.
    """

    param: FormParameter
    gram: Matrix
    mu: Vector = field(default=())

    def __post_init__(self):
        gram = intmat.as_matrix(self.gram)
        object.__setattr__(self, "gram", gram)
        mu = tuple(self.param.reduce(int(m)) for m in self.mu)
        if not mu and gram:
            mu = (0,) * len(gram)
        object.__setattr__(self, "mu", mu)

    @classmethod
    def hyperbolic(cls, param: FormParameter, g: int = 1) -> QuadraticModule:
        """``H^g``: blocks ``[[0, 1], [eps, 0]]`` and ``mu = 0`` on the basis."""
        block = ((0, 1), (param.epsilon, 0))
        return cls(param, intmat.block_diag(*([block] * g)), (0,) * (2 * g))

    @classmethod
    def zero(cls, param: FormParameter) -> QuadraticModule:
        return cls(param, (), ())

    @property
    def rank(self) -> int:
        return len(self.gram)

    def _check_len(self, x: Sequence[int]) -> None:
        if len(x) != self.rank:
            raise ValueError(f"vector of length {len(x)} in a module of rank {self.rank}")

    def eval_lambda(self, x: Sequence[int], y: Sequence[int]) -> int:
        self._check_len(x)
        self._check_len(y)
        G = self.gram
        return sum(x[i] * G[i][j] * y[j] for i in range(self.rank) if x[i] for j in range(self.rank))

    def eval_mu(self, x: Sequence[int]) -> int:
        """``sum a_i^2 mu(b_i) + sum_{i<j} a_i a_j lambda(b_i, b_j)`` mod ``Lambda``."""
        self._check_len(x)
        G = self.gram
        r = self.rank
        total = sum(x[i] * x[i] * self.mu[i] for i in range(r))
        total += sum(x[i] * x[j] * G[i][j] for i in range(r) if x[i] for j in range(i + 1, r))
        return self.param.reduce(total)

    def mu_array(self, X: np.ndarray) -> np.ndarray:
        """``eval_mu`` on every row of ``X``."""
        U = np.triu(np.array(self.gram, dtype=X.dtype).reshape(self.rank, self.rank), 1)
        U = U + np.diag(np.array(self.mu, dtype=X.dtype))
        return self.param.reduce_array(((X @ U) * X).sum(axis=1))

    def lambda_array(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        """``[[eval_lambda(x, y) for y in Y] for x in X]``."""
        G = np.array(self.gram, dtype=X.dtype).reshape(self.rank, self.rank)
        return X @ G @ Y.T

    def validate(self) -> ValidationResult:
        r = self.rank
        G = self.gram
        if any(len(row) != r for row in G):
            return ValidationResult(False, "square", "gram matrix is not square")
        if len(self.mu) != r:
            return ValidationResult(False, "mu_length", f"{len(self.mu)} mu values for rank {r}")
        eps = self.param.epsilon
        for i in range(r):
            for j in range(r):
                if G[i][j] != eps * G[j][i]:
                    kind = "symmetric" if eps == 1 else "skew"
                    return ValidationResult(False, "epsilon_symmetry", f"gram is not {kind} at ({i},{j})")
        if eps == -1:
            for i in range(r):
                if G[i][i] != 0:
                    return ValidationResult(False, "zero_diagonal", f"gram[{i}][{i}] = {G[i][i]}")
        if self.param.lambda_sub is LambdaSub.ZERO:
            for i in range(r):
                if G[i][i] != 2 * self.mu[i]:
                    return ValidationResult(
                        False, "lambda_xx_equals_2mu", f"gram[{i}][{i}] = {G[i][i]} but mu = {self.mu[i]}"
                    )
        return ValidationResult(True)

    def is_nondegenerate(self) -> bool:
        return abs(intmat.det(self.gram)) == 1

    def pullback(self, basis: Sequence[Sequence[int]]) -> QuadraticModule:
        """Restriction to the sublattice spanned by the columns of ``basis``."""
        cols = intmat.columns(basis) if basis and basis[0] else []
        gram = [[self.eval_lambda(u, v) for v in cols] for u in cols]
        return QuadraticModule(self.param, gram, tuple(self.eval_mu(u) for u in cols))


def direct_sum(M: QuadraticModule, N: QuadraticModule) -> QuadraticModule:
    if M.param != N.param:
        raise ValueError("direct sum of modules with different form parameters")
    return QuadraticModule(M.param, intmat.block_diag(M.gram, N.gram), M.mu + N.mu)


def hyperbolic_power(param: FormParameter, g: int) -> QuadraticModule:
    return QuadraticModule.hyperbolic(param, g)


@dataclass(frozen=True)
class QModMorphism:
    """Map ``source -> target``; column ``i`` is the image of basis vector ``i``."""

    source: QuadraticModule
    target: QuadraticModule
    matrix: Matrix

    def __post_init__(self):
        object.__setattr__(self, "matrix", _shaped(self.matrix, self.target.rank, self.source.rank))

    def is_valid(self) -> bool:
        return is_morphism(self.matrix, self.source, self.target)

    def image(self, i: int) -> Vector:
        return tuple(row[i] for row in self.matrix)

    def apply(self, x: Sequence[int]) -> Vector:
        return intmat.matvec(self.matrix, x) if self.matrix else ()

    def compose(self, other: QModMorphism) -> QModMorphism:
        """``self o other``."""
        return QModMorphism(other.source, self.target, _mm(self.matrix, other.matrix, self.target.rank, other.source.rank))


def _shaped(A, m: int, n: int) -> Matrix:
    A = intmat.as_matrix(A) if A else tuple(() for _ in range(m))
    if len(A) != m or any(len(r) != n for r in A):
        raise ValueError(f"matrix shape does not match {m}x{n}")
    return A


def _mm(A: Matrix, B: Matrix, m: int, n: int) -> Matrix:
    if m == 0:
        return ()
    if not B or n == 0:
        return tuple(() for _ in range(m)) if n == 0 else intmat.zeros(m, n)
    return intmat.matmul(A, B)


def is_morphism(f: Sequence[Sequence[int]], M: QuadraticModule, N: QuadraticModule) -> bool:
    """Whether ``f`` (``N.rank x M.rank``) preserves ``lambda`` and ``mu``."""
    if M.param != N.param:
        raise ValueError("morphisms need equal form parameters")
    F = _shaped(f, N.rank, M.rank)
    cols = [tuple(row[i] for row in F) for i in range(M.rank)] if N.rank else [()] * M.rank
    for i, u in enumerate(cols):
        if N.eval_mu(u) != M.mu[i]:
            return False
        for j, v in enumerate(cols):
            if N.eval_lambda(u, v) != M.gram[i][j]:
                return False
    return True


@dataclass(frozen=True)
class Complement:
    """Orthogonal complement of ``f(source)`` in ``f.target``.

    ``change_of_basis`` is ``[f | basis]``: unimodular, and the Gram matrix of
    the target in these coordinates is ``source.gram (+) module.gram``.
    """

    module: QuadraticModule
    basis: Matrix
    change_of_basis: Matrix

    def verify(self, f: QModMorphism) -> bool:
        P = self.change_of_basis
        N = f.target
        if not intmat.is_unimodular(P):
            return False
        expected = intmat.block_diag(f.source.gram, self.module.gram)
        return N.pullback(P).gram == expected


def orthogonal_complement(f: QModMorphism) -> Complement:
    """Split ``f.target == f(source) (+) f(source)^perp``; needs a nondegenerate source."""
    M, N = f.source, f.target
    if not M.is_nondegenerate():
        raise ValueError("orthogonal complement needs a nondegenerate source (det gram = +-1)")
    if not f.is_valid():
        raise ValueError("not a morphism of quadratic modules")
    if M.rank == 0:
        K = intmat.identity(N.rank)
    else:
        # y -> (lambda(f(b_i), y))_i, i.e. the row vectors f(b_i)^T G_N
        A = intmat.matmul(intmat.transpose(f.matrix, M.rank), N.gram) if N.rank else ()
        K = intmat.kernel_basis(A, ncols=N.rank)
    K = _normalize_basis(N, K)
    module = N.pullback(K)
    P = intmat.hstack(f.matrix, K, nrows=N.rank)
    out = Complement(module, K, P)
    if not out.verify(f):
        raise ArithmeticError("complement certificate failed")
    return out


def _normalize_basis(N: QuadraticModule, K: Matrix) -> Matrix:
    """Negate basis columns so the Gram superdiagonal is nonnegative."""
    cols = intmat.columns(K) if K and K[0] else []
    for j in range(1, len(cols)):
        if N.eval_lambda(cols[j - 1], cols[j]) < 0:
            cols[j] = tuple(-x for x in cols[j])
    return intmat.from_columns(cols, N.rank)


def kernel_submodule(M: QuadraticModule, rows: Sequence[Sequence[int]]) -> tuple[QuadraticModule, Matrix]:
    """Common kernel of the linear functionals ``rows`` as a submodule with basis."""
    if not rows:
        K = intmat.identity(M.rank)
    else:
        K = intmat.kernel_basis(rows, ncols=M.rank)
    return M.pullback(K), K


# --- bounded search -------------------------------------------------------

_INT64_LIMIT = 2**62


def candidate_pool(M: QuadraticModule, bound: int) -> np.ndarray:
    """All vectors with entries in ``[-bound, bound]``, lexicographic order."""
    r = M.rank
    size = (2 * bound + 1) ** r
    if size > 5_000_000:
        raise ValueError(f"candidate pool of {size} vectors is too large")
    scale = max([1] + [abs(x) for row in M.gram for x in row] + [abs(m) for m in M.mu])
    dtype = np.int64 if 4 * r * r * bound * bound * scale < _INT64_LIMIT else object
    if r == 0:
        return np.zeros((1, 0), dtype=dtype)
    vals = np.arange(-bound, bound + 1)
    grids = np.meshgrid(*([vals] * r), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1).astype(dtype)


def _embeddings(
    N: QuadraticModule,
    gram: Matrix,
    mu: Vector,
    bound: int,
    limit: int | None,
    accept=None,
) -> Iterator[Matrix]:
    """Form-preserving maps from ``(gram, mu)`` into ``N`` with bounded entries.

    Depth-first over columns in lexicographic order, with forward checking of
    the pairing constraints against already chosen columns.
    """
    k = len(gram)
    if k == 0:
        yield tuple(() for _ in range(N.rank))
        return
    pool = candidate_pool(N, bound)
    P = pool
    Gn = np.array(N.gram, dtype=P.dtype).reshape(N.rank, N.rank)
    mu_vals = N.mu_array(P) if N.rank else np.zeros(len(P), dtype=P.dtype)
    self_pair = ((P @ Gn) * P).sum(axis=1)
    base = [(mu_vals == N.param.reduce(mu[i])) & (self_pair == gram[i][i]) for i in range(k)]
    # pairing of every pool vector with a chosen column is P @ (G_N @ c)
    PG = P @ Gn  # row p: p^T G_N ; lambda(p, c) = PG[p] . c
    GP = P @ Gn.T  # lambda(c, p) = GP[p] . c
    count = 0
    chosen: list[int] = []

    def rec(level: int, masks: list[np.ndarray]):
        nonlocal count
        for c in np.flatnonzero(masks[0]):
            chosen.append(int(c))
            if level + 1 < k:
                col = P[c]
                lam_pc = PG @ col  # lambda(p, c)
                lam_cp = GP @ col  # lambda(c, p)
                nxt = []
                for off, m in enumerate(masks[1:]):
                    j = level + 1 + off
                    m = m & (lam_cp == gram[level][j]) & (lam_pc == gram[j][level])
                    if not m.any():
                        break
                    nxt.append(m)
                else:
                    yield from rec(level + 1, nxt)
            else:
                F = tuple(tuple(int(P[ci][r]) for ci in chosen) for r in range(N.rank))
                if accept is None or accept(F):
                    count += 1
                    yield F
            chosen.pop()
            if limit is not None and count >= limit:
                return

    yield from rec(0, base)


def enumerate_hyperbolic_morphisms(M: QuadraticModule, g: int, coeff_bound: int) -> list[QModMorphism]:
    """All morphisms ``H^g -> M`` with entries in ``[-coeff_bound, coeff_bound]``.

    Order is lexicographic in the images ``(e_1, f_1, e_2, ...)``, each image
    compared entrywise.
    """
    if coeff_bound < 0:
        raise ValueError("coeff_bound must be nonnegative")
    Hg = QuadraticModule.hyperbolic(M.param, g)
    if 2 * g > M.rank and g > 0:
        return []
    return [QModMorphism(Hg, M, F) for F in _embeddings(M, Hg.gram, Hg.mu, coeff_bound, None)]


def first_hyperbolic_morphism(M: QuadraticModule, g: int, coeff_bound: int) -> QModMorphism | None:
    Hg = QuadraticModule.hyperbolic(M.param, g)
    if 2 * g > M.rank and g > 0:
        return None
    for F in _embeddings(M, Hg.gram, Hg.mu, coeff_bound, 1):
        return QModMorphism(Hg, M, F)
    return None


def witt_index_upper_bound(M: QuadraticModule) -> int:
    """An upper bound for the (unbounded) Witt index.

    The image of ``H^g`` is a direct summand on which the form is unimodular,
    so it meets the radical of the form mod 2 trivially: ``2g`` is at most
    the rank of the Gram matrix mod 2. For symmetric forms the image also
    carries ``g`` positive and ``g`` negative directions. A form that is
    nonsingular mod 2 and has Arf invariant 1 cannot be all hyperbolic.
    """
    if M.rank == 0:
        return 0
    rank2 = intmat.rank_mod(M.gram, 2)
    cap = rank2 // 2
    if M.param.epsilon == 1:
        pos, neg, _ = intmat.inertia(M.gram)
        cap = min(cap, pos, neg)
    elif M.param == SKEW_EVEN and rank2 == M.rank and arf_invariant(M) == 1:
        cap = min(cap, M.rank // 2 - 1)
    return cap


def witt_index_lower_bound(M: QuadraticModule, coeff_bound: int) -> tuple[int, QModMorphism]:
    """Largest ``g`` with a bounded morphism ``H^g -> M``, with a witness."""
    if coeff_bound < 1:
        raise ValueError("coeff_bound must be at least 1")
    for g in range(witt_index_upper_bound(M), 0, -1):
        w = first_hyperbolic_morphism(M, g, coeff_bound)
        if w is not None:
            return g, w
    return 0, QModMorphism(QuadraticModule.zero(M.param), M, tuple(() for _ in range(M.rank)))


def stable_witt_lower_bound(M: QuadraticModule, k: int, coeff_bound: int) -> int:
    if k < 0:
        raise ValueError("k must be nonnegative")
    stabilized = direct_sum(M, QuadraticModule.hyperbolic(M.param, k))
    return witt_index_lower_bound(stabilized, coeff_bound)[0] - k


def arf_invariant(M: QuadraticModule) -> int:
    """Arf invariant of ``x -> mu(x) mod 2`` by counting zeros over ``F_2^rank``."""
    if M.param != SKEW_EVEN:
        raise ValueError("the Arf invariant needs form parameter (-1, 2Z)")
    if intmat.det(M.gram) % 2 == 0:
        raise ValueError("gram matrix is degenerate mod 2")
    r = M.rank
    if r == 0:
        return 0
    X = np.array(list(itertools.product((0, 1), repeat=r)), dtype=object).reshape(2**r, r)
    zeros = int((M.mu_array(X) % 2 == 0).sum())
    return 0 if 2 * zeros > 2**r else 1


def is_isomorphic_bounded(M: QuadraticModule, N: QuadraticModule, coeff_bound: int) -> QModMorphism | None:
    """First unimodular form-preserving ``M -> N`` with bounded entries, or ``None``.

    ``None`` does not prove that ``M`` and ``N`` are non-isomorphic.
    """
    if M.rank != N.rank or M.param != N.param:
        raise ValueError("need equal rank and form parameter")
    if M == N:
        return QModMorphism(M, N, intmat.identity(M.rank))
    for F in _embeddings(N, M.gram, M.mu, coeff_bound, 1, accept=lambda F: abs(intmat.det(F)) == 1):
        return QModMorphism(M, N, F)
    return None
