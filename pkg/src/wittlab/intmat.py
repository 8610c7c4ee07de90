"""Exact integer matrix arithmetic.

Matrices are tuples of row tuples of Python ints, so entries never overflow.
Functions accept any nested sequence and return tuples.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Matrix = tuple[tuple[int, ...], ...]
Vector = tuple[int, ...]


def as_matrix(rows: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    out = tuple(tuple(int(x) for x in row) for row in rows)
    widths = {len(r) for r in out}
    if len(widths) > 1:
        raise ValueError("ragged matrix")
    if ncols is not None and out and len(out[0]) != ncols:
        raise ValueError(f"expected {ncols} columns, got {len(out[0])}")
    return out


def as_vector(v: Sequence[int]) -> Vector:
    return tuple(int(x) for x in v)


def shape(A: Sequence[Sequence[int]], ncols: int = 0) -> tuple[int, int]:
    """Shape of ``A``; an empty matrix reports ``ncols`` columns."""
    return (len(A), len(A[0]) if A else ncols)


def zeros(m: int, n: int) -> Matrix:
    return tuple((0,) * n for _ in range(m))


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(A: Sequence[Sequence[int]], nrows_if_empty: int = 0) -> Matrix:
    """Transpose. ``A`` with no rows but a known column count is handled by
    the caller passing ``nrows_if_empty`` (the column count of ``A``)."""
    if not A:
        return tuple(() for _ in range(nrows_if_empty))
    return tuple(zip(*A))


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]], inner: int | None = None) -> Matrix:
    if not A:
        return ()
    n_inner = len(A[0])
    if len(B) != n_inner:
        raise ValueError(f"cannot multiply {len(A)}x{n_inner} by {len(B)}x?")
    if n_inner == 0:
        ncols = inner or 0
        return zeros(len(A), ncols)
    cols = tuple(zip(*B))
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in cols) for row in A)


def matvec(A: Sequence[Sequence[int]], x: Sequence[int]) -> Vector:
    return tuple(sum(a * b for a, b in zip(row, x)) for row in A)


def columns(A: Sequence[Sequence[int]]) -> list[Vector]:
    return [tuple(c) for c in zip(*A)] if A else []


def from_columns(cols: Sequence[Sequence[int]], nrows: int) -> Matrix:
    if not cols:
        return tuple(() for _ in range(nrows))
    return tuple(zip(*cols))


def hstack(*blocks: Sequence[Sequence[int]], nrows: int | None = None) -> Matrix:
    if nrows is None:
        nrows = len(blocks[0])
    rows: list[tuple[int, ...]] = [() for _ in range(nrows)]
    for B in blocks:
        if len(B) != nrows:
            raise ValueError("row counts differ")
        rows = [r + tuple(b) for r, b in zip(rows, B)]
    return tuple(rows)


def block_diag(*blocks: Sequence[Sequence[int]]) -> Matrix:
    n = sum(len(B) for B in blocks)
    out = [[0] * n for _ in range(n)]
    off = 0
    for B in blocks:
        k = len(B)
        for i in range(k):
            for j in range(k):
                out[off + i][off + j] = B[i][j]
        off += k
    return as_matrix(out)


def det(A: Sequence[Sequence[int]]) -> int:
    """Determinant by fraction-free Bareiss elimination."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(r) for r in A]
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def rank_mod(A: Sequence[Sequence[int]], p: int) -> int:
    """Rank of ``A`` over the field with ``p`` elements (``p`` prime)."""
    M = [[x % p for x in r] for r in A]
    rank = 0
    ncols = len(M[0]) if M else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        inv = pow(M[rank][c], -1, p)
        for i in range(len(M)):
            if i != rank and M[i][c]:
                q = M[i][c] * inv % p
                M[i] = [(a - q * b) % p for a, b in zip(M[i], M[rank])]
        rank += 1
    return rank


def inertia(G: Sequence[Sequence[int]]) -> tuple[int, int, int]:
    """``(positive, negative, zero)`` counts of a symmetric matrix, exactly.

    Symmetric elimination over the rationals (a congruence, so Sylvester's
    law keeps the counts).
    """
    n = len(G)
    M = [[Fraction(x) for x in r] for r in G]
    pos = neg = 0
    active = list(range(n))
    while active:
        k = next((i for i in active if M[i][i] != 0), None)
        if k is None:
            pair = next(((i, j) for i in active for j in active if i < j and M[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            # replace row/column i by i + j: the new diagonal entry is 2 M[i][j]
            for t in range(n):
                M[i][t] += M[j][t]
            for t in range(n):
                M[t][i] += M[t][j]
            k = i
        d = M[k][k]
        pos, neg = (pos + 1, neg) if d > 0 else (pos, neg + 1)
        active.remove(k)
        for i in active:
            if M[i][k]:
                q = M[i][k] / d
                for t in range(n):
                    M[i][t] -= q * M[k][t]
                for t in range(n):
                    M[t][i] -= q * M[t][k]
    return pos, neg, n - pos - neg


def is_unimodular(A: Sequence[Sequence[int]]) -> bool:
    return len(A) == (len(A[0]) if A else 0) and abs(det(A)) == 1


def _rref_fractions(M: list[list[Fraction]], ncols: int) -> list[int]:
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    return pivots


def inverse(A: Sequence[Sequence[int]]) -> Matrix:
    """Inverse of a unimodular integer matrix."""
    n = len(A)
    if n == 0:
        return ()
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    pivots = _rref_fractions(aug, n)
    if len(pivots) != n:
        raise ValueError("matrix is singular")
    inv = [row[n:] for row in aug]
    if any(x.denominator != 1 for row in inv for x in row):
        raise ValueError("matrix is not invertible over the integers")
    return as_matrix([[int(x) for x in row] for row in inv])


def solve(A: Sequence[Sequence[int]], b: Sequence[int]) -> Vector:
    """Integer solution ``x`` of ``A x = b`` for ``A`` of full column rank.

    Raises ``ValueError`` if no (integer) solution exists.
    """
    m = len(A)
    n = len(A[0]) if A else 0
    if n == 0:
        if any(b):
            raise ValueError("no solution")
        return ()
    aug = [[Fraction(x) for x in row] + [Fraction(bi)] for row, bi in zip(A, b)]
    pivots = _rref_fractions(aug, n)
    if len(pivots) != n:
        raise ValueError("matrix does not have full column rank")
    if any(aug[i][n] != 0 for i in range(n, m)):
        raise ValueError("no solution")
    x = [aug[i][n] for i in range(n)]
    if any(v.denominator != 1 for v in x):
        raise ValueError("no integer solution")
    return tuple(int(v) for v in x)


def content(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


class SmithForm:
    """Result of :func:`smith_normal_form`: ``D == U @ A @ V``.

    ``U`` and ``V`` are ``None`` unless transforms were requested.
    """

    __slots__ = ("D", "U", "V", "invariants")

    def __init__(self, D: Matrix, U: Matrix | None, V: Matrix | None):
        self.D = D
        self.U = U
        self.V = V
        k = min(len(D), len(D[0]) if D else 0)
        self.invariants = tuple(D[i][i] for i in range(k) if D[i][i] != 0)

    @property
    def rank(self) -> int:
        return len(self.invariants)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.invariants if d > 1)


def smith_normal_form(
    A: Sequence[Sequence[int]],
    transforms: bool = False,
    ncols: int | None = None,
    check: bool = False,
) -> SmithForm:
    """Smith normal form over the integers.

    Pivots are chosen by minimal absolute value. The diagonal satisfies
    ``d1 | d2 | ...`` with all entries nonnegative.

    Args:
      A: integer matrix (``ncols`` gives the width when ``A`` has no rows).
      transforms: also return unimodular ``U``, ``V`` with ``D == U A V``.
      check: verify the factorization and the divisibility chain.
    """
    m = len(A)
    n = len(A[0]) if A else (ncols or 0)
    D = [list(r) for r in A]
    U = [[int(i == j) for j in range(m)] for i in range(m)] if transforms else None
    V = [[int(i == j) for j in range(n)] for i in range(n)] if transforms else None

    def swap_rows(i: int, j: int) -> None:
        if i != j:
            D[i], D[j] = D[j], D[i]
            if U is not None:
                U[i], U[j] = U[j], U[i]

    def swap_cols(i: int, j: int) -> None:
        if i != j:
            for row in D:
                row[i], row[j] = row[j], row[i]
            if V is not None:
                for row in V:
                    row[i], row[j] = row[j], row[i]

    def add_row(dst: int, src: int, q: int) -> None:
        # row_dst += q * row_src
        rd, rs = D[dst], D[src]
        for k in range(n):
            if rs[k]:
                rd[k] += q * rs[k]
        if U is not None:
            ud, us = U[dst], U[src]
            for k in range(m):
                if us[k]:
                    ud[k] += q * us[k]

    def add_col(dst: int, src: int, q: int) -> None:
        for row in D:
            if row[src]:
                row[dst] += q * row[src]
        if V is not None:
            for row in V:
                if row[src]:
                    row[dst] += q * row[src]

    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            row = D[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            p = D[t][t]
            dirty = False
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // p))
                    if D[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // p))
                    if D[t][j]:
                        dirty = True
            if dirty:
                # a smaller remainder appeared in row/column t: move it to the pivot
                cand = [(abs(D[i][t]), i, t) for i in range(t, m) if D[i][t]]
                cand += [(abs(D[t][j]), t, j) for j in range(t + 1, n) if D[t][j]]
                _, i, j = min(cand)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            bad = next(
                (i for i in range(t + 1, m) if any(D[i][j] % p for j in range(t + 1, n))),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            if U is not None:
                U[t] = [-x for x in U[t]]

    out = SmithForm(
        as_matrix(D) if m else (),
        as_matrix(U) if U is not None else None,
        as_matrix(V) if V is not None else None,
    )
    if check:
        inv = out.invariants
        assert all(inv[i + 1] % inv[i] == 0 for i in range(len(inv) - 1))
        if transforms:
            assert is_unimodular(out.U) or m == 0
            assert is_unimodular(out.V) or n == 0
            if m and n:
                assert matmul(matmul(out.U, A), out.V) == out.D
    return out


def rank_and_torsion(A: Sequence[Sequence[int]], ncols: int | None = None) -> tuple[int, tuple[int, ...]]:
    """Rank and torsion coefficients of ``A`` without computing transforms.

    Boundary matrices are sparse and mostly made of unit entries. Each unit
    pivot is eliminated with sparse row operations (a unimodular step that
    contributes an invariant factor of 1); the dense Smith form only sees
    what is left.
    """
    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, set[int]] = {}
    for i, r in enumerate(A):
        entries = {j: x for j, x in enumerate(r) if x}
        if entries:
            rows[i] = entries
            for j in entries:
                cols.setdefault(j, set()).add(i)
    r_units = 0
    while True:
        pivot = None
        for i in sorted(rows, key=lambda i: len(rows[i])):
            j = next((j for j, x in rows[i].items() if abs(x) == 1), None)
            if j is not None:
                pivot = (i, j)
                break
        if pivot is None:
            break
        pi, pj = pivot
        prow = rows.pop(pi)
        for j in prow:
            cols[j].discard(pi)
        v = prow[pj]
        for i in list(cols[pj]):
            row = rows[i]
            q = row[pj] * v  # v is a unit, so row -= q * prow clears the pivot column
            for j, x in prow.items():
                y = row.get(j, 0) - q * x
                if y:
                    if j not in row:
                        cols[j].add(i)
                    row[j] = y
                else:
                    row.pop(j, None)
                    cols[j].discard(i)
            if not row:
                del rows[i]
        # the pivot column is now zero apart from the pivot; column operations
        # clear the rest of the pivot row without touching other rows
        del cols[pj]
        r_units += 1
    if not rows:
        return r_units, ()
    used = sorted({j for row in rows.values() for j in row})
    where = {j: k for k, j in enumerate(used)}
    dense = []
    for row in rows.values():
        line = [0] * len(used)
        for j, x in row.items():
            line[where[j]] = x
        dense.append(line)
    snf = smith_normal_form(dense)
    return r_units + snf.rank, snf.torsion


def rank(A: Sequence[Sequence[int]], ncols: int | None = None) -> int:
    return smith_normal_form(A, ncols=ncols).rank


def kernel_basis(A: Sequence[Sequence[int]], ncols: int | None = None, reduce: bool = True) -> Matrix:
    """Basis (as columns) of the integer kernel ``{y : A y = 0}``.

    The kernel of an integer matrix is a saturated sublattice, so the returned
    columns extend to a basis of the whole lattice. With ``reduce`` the basis
    is LLL-reduced to keep coordinates small.
    """
    n = len(A[0]) if A else (ncols or 0)
    snf = smith_normal_form(A, transforms=True, ncols=n)
    r = snf.rank
    cols = [tuple(row[j] for row in snf.V) for j in range(r, n)]
    if reduce and cols:
        cols = lll_reduce(cols)
    return from_columns(cols, n)


def lll_reduce(basis: Sequence[Sequence[int]], delta: Fraction = Fraction(3, 4)) -> list[Vector]:
    """LLL reduction (exact rational Gram-Schmidt) of linearly independent vectors."""
    b = [list(v) for v in basis]
    k = len(b)
    if k <= 1:
        return [tuple(v) for v in b]

    def dot(u, v):
        return sum(x * y for x, y in zip(u, v))

    def gram_schmidt():
        bstar: list[list[Fraction]] = []
        mu = [[Fraction(0)] * k for _ in range(k)]
        norms: list[Fraction] = []
        for i in range(k):
            v = [Fraction(x) for x in b[i]]
            for j in range(i):
                mu[i][j] = dot(b[i], bstar[j]) / norms[j] if norms[j] else Fraction(0)
                v = [a - mu[i][j] * c for a, c in zip(v, bstar[j])]
            bstar.append(v)
            norms.append(dot(v, v))
        return mu, norms

    mu, norms = gram_schmidt()
    i = 1
    while i < k:
        for j in range(i - 1, -1, -1):
            q = round(mu[i][j])
            if q:
                b[i] = [x - q * y for x, y in zip(b[i], b[j])]
                mu, norms = gram_schmidt()
        if norms[i] >= (delta - mu[i][i - 1] ** 2) * norms[i - 1]:
            i += 1
        else:
            b[i], b[i - 1] = b[i - 1], b[i]
            mu, norms = gram_schmidt()
            i = max(i - 1, 1)
    return [tuple(v) for v in b]
