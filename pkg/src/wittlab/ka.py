"""Bounded truncations of the complex of hyperbolic morphisms.

A vertex of ``K^a(M)`` is a morphism ``h: H -> M``; vertices span a simplex
when their images are pairwise orthogonal. Only the vertices whose matrices
have entries in ``[-bound, bound]`` are materialized. They are stored as two
index arrays into the lexicographic candidate pool (image of ``e`` and image
of ``f``), and adjacency is computed on demand with numpy, so truncations
with millions of vertices stay usable for neighborhood and connectivity
queries.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import intmat
from .homology import DEFAULT_PI1_BUDGET, connectivity_report, is_lcm
from .intmat import Matrix
from .quadratic import (
    QModMorphism,
    QuadraticModule,
    candidate_pool,
    direct_sum,
    first_hyperbolic_morphism,
    is_morphism,
    kernel_submodule,
    orthogonal_complement,
    stable_witt_lower_bound,
    witt_index_lower_bound,
)
from .reduction import kernel_restriction
from .simplicial import SimplicialComplex

SMALL_COMPLEX_LIMIT = 4000


@dataclass(frozen=True)
class KaVertex:
    """A morphism ``H -> M``; ``index`` is its enumeration position, ``-1`` outside the truncation."""

    morphism: QModMorphism
    index: int = -1

    @property
    def e(self) -> tuple[int, ...]:
        return self.morphism.image(0)

    @property
    def f(self) -> tuple[int, ...]:
        return self.morphism.image(1)

    @property
    def matrix(self) -> Matrix:
        return self.morphism.matrix


def vertex_from_images(M: QuadraticModule, e: Sequence[int], f: Sequence[int], index: int = -1) -> KaVertex:
    H = QuadraticModule.hyperbolic(M.param, 1)
    mor = QModMorphism(H, M, intmat.from_columns([tuple(e), tuple(f)], M.rank))
    if not mor.is_valid():
        raise ValueError("not a morphism H -> M")
    return KaVertex(mor, index)


class KaComplex:
    """Truncation of ``K^a(M)`` at a coefficient bound.

    Vertex order is lexicographic in ``(h(e), h(f))``, the same order as
    :func:`~wittlab.quadratic.enumerate_hyperbolic_morphisms` with ``g = 1``.
    """

    def __init__(self, ambient: QuadraticModule, coeff_bound: int):
        if coeff_bound < 1:
            raise ValueError("coeff_bound must be at least 1")
        self.ambient = ambient
        self.coeff_bound = coeff_bound
        M = ambient
        if M.rank == 0:
            self.pool = np.zeros((1, 0), dtype=np.int64)
            self.xi = self.yi = np.zeros(0, dtype=np.int64)
            self._G = np.zeros((0, 0), dtype=np.int64)
            return
        pool = candidate_pool(M, coeff_bound)
        G = np.array(M.gram, dtype=pool.dtype).reshape(M.rank, M.rank)
        ok = (M.mu_array(pool) == 0) & (((pool @ G) * pool).sum(axis=1) == 0)
        cand = np.flatnonzero(ok)
        xs, ys = [], []
        # lambda(e, f) = e^T G f = 1, in chunks of e to bound memory
        for start in range(0, len(cand), 512):
            E = pool[cand[start : start + 512]]
            L = E @ G @ pool[cand].T
            r, c = np.nonzero(L == 1)
            xs.append(cand[start + r])
            ys.append(cand[c])
        self.pool = pool
        self.xi = np.concatenate(xs) if xs else np.zeros(0, dtype=np.int64)
        self.yi = np.concatenate(ys) if ys else np.zeros(0, dtype=np.int64)
        self._G = G

    # --- vertices -------------------------------------------------------

    def __len__(self) -> int:
        return len(self.xi)

    @property
    def n_vertices(self) -> int:
        return len(self.xi)

    def vertex(self, i: int) -> KaVertex:
        e = tuple(int(x) for x in self.pool[self.xi[i]])
        f = tuple(int(x) for x in self.pool[self.yi[i]])
        H = QuadraticModule.hyperbolic(self.ambient.param, 1)
        return KaVertex(QModMorphism(H, self.ambient, intmat.from_columns([e, f], self.ambient.rank)), int(i))

    @property
    def vertices(self) -> list[KaVertex]:
        return [self.vertex(i) for i in range(len(self))]

    def vertex_matrices(self) -> set[Matrix]:
        return {self.vertex(i).matrix for i in range(len(self))}

    def _pool_index(self, v: Sequence[int]) -> int | None:
        B = self.coeff_bound
        if any(abs(x) > B for x in v):
            return None
        idx = 0
        for x in v:
            idx = idx * (2 * B + 1) + (x + B)
        return idx

    def index_of(self, h: KaVertex | QModMorphism) -> int | None:
        mor = h.morphism if isinstance(h, KaVertex) else h
        pe, pf = self._pool_index(mor.image(0)), self._pool_index(mor.image(1))
        if pe is None or pf is None or not len(self):
            return None
        key = self.xi * len(self.pool) + self.yi
        target = pe * len(self.pool) + pf
        pos = int(np.searchsorted(key, target))
        return pos if pos < len(key) and key[pos] == target else None

    def locate(self, h: KaVertex | QModMorphism) -> KaVertex:
        """``h`` with its truncation index filled in (``-1`` if outside)."""
        mor = h.morphism if isinstance(h, KaVertex) else h
        i = self.index_of(mor)
        return KaVertex(mor, -1 if i is None else i)

    # --- adjacency ------------------------------------------------------

    def _orth_mask(self, e: Sequence[int], f: Sequence[int]) -> np.ndarray:
        G = self._G
        ve = np.array(e, dtype=self.pool.dtype)
        vf = np.array(f, dtype=self.pool.dtype)
        z = ((self.pool @ (G @ ve)) == 0) & ((self.pool @ (G @ vf)) == 0)
        return z[self.xi] & z[self.yi]

    def neighbor_mask(self, h: KaVertex | int) -> np.ndarray:
        v = self.vertex(h) if isinstance(h, (int, np.integer)) else h
        return self._orth_mask(v.e, v.f)

    def neighbors(self, h: KaVertex | int) -> np.ndarray:
        """Truncation indices orthogonal to ``h``, increasing."""
        return np.flatnonzero(self.neighbor_mask(h))

    def adjacent(self, a: KaVertex, b: KaVertex) -> bool:
        return are_orthogonal(self.ambient, a, b)

    def edges(self) -> list[tuple[int, int]]:
        if len(self) > SMALL_COMPLEX_LIMIT:
            raise ValueError(f"{len(self)} vertices: too many to list edges")
        A = self.adjacency_matrix()
        i, j = np.nonzero(np.triu(A, 1))
        return [(int(a), int(b)) for a, b in zip(i, j)]

    def adjacency_matrix(self) -> np.ndarray:
        if len(self) == 0:
            return np.zeros((0, 0), dtype=bool)
        E, F = self.pool[self.xi], self.pool[self.yi]
        G = self._G
        A = np.ones((len(self), len(self)), dtype=bool)
        for X in (E, F):
            for Y in (E, F):
                A &= (X @ G @ Y.T) == 0
        return A

    def to_simplicial_complex(self) -> SimplicialComplex:
        return SimplicialComplex.flag(range(len(self)), self.edges())

    # --- connectivity ---------------------------------------------------

    def components(self) -> int:
        """Number of connected components of the orthogonality graph."""
        n = len(self)
        if n == 0:
            return 0
        if n <= SMALL_COMPLEX_LIMIT:
            import networkx as nx

            g = nx.Graph()
            g.add_nodes_from(range(n))
            g.add_edges_from(self.edges())
            return nx.number_connected_components(g)
        if _hub_certificate(self):
            return 1
        return _lazy_components(self)

    def is_connected(self) -> bool:
        return self.components() == 1

    def shortest_path(self, a: KaVertex, b: KaVertex, max_expansions: int = 5000) -> list[KaVertex] | None:
        """Breadth-first path from ``a`` to ``b`` through truncation vertices.

        Endpoints may lie outside the truncation. Neighbors are visited in
        index order, so the path is reproducible. ``None`` if no path exists
        or the expansion budget runs out.
        """
        a, b = self.locate(a), self.locate(b)
        if a.matrix == b.matrix:
            return [a]
        if self.adjacent(a, b):
            return [a, b]
        na, nb = self.neighbor_mask(a), self.neighbor_mask(b)
        both = np.flatnonzero(na & nb)
        if len(both):
            return [a, self.vertex(int(both[0])), b]
        # general search: parents over truncation indices
        parent: dict[int, int] = {}
        frontier = [int(i) for i in np.flatnonzero(na)]
        seen = np.zeros(len(self), dtype=bool)
        seen[frontier] = True
        if a.index >= 0:
            seen[a.index] = True
        for i in frontier:
            parent[i] = -1
        queue = deque(frontier)
        expansions = 0
        while queue:
            u = queue.popleft()
            expansions += 1
            if expansions > max_expansions:
                return None
            nu = self.neighbor_mask(u)
            hit = np.flatnonzero(nu & nb & ~seen)
            if len(hit) or (nb[u]):
                chain = [u]
                while parent[chain[-1]] != -1:
                    chain.append(parent[chain[-1]])
                chain.reverse()
                if not nb[u]:
                    chain.append(int(hit[0]))
                return [a] + [self.vertex(i) for i in chain] + [b]
            new = np.flatnonzero(nu & ~seen)
            seen[new] = True
            for w in new:
                parent[int(w)] = u
                queue.append(int(w))
        return None


def _gram_components(M: QuadraticModule) -> list[list[int]]:
    """Coordinate blocks on which the Gram matrix is block diagonal."""
    import networkx as nx

    g = nx.Graph()
    g.add_nodes_from(range(M.rank))
    g.add_edges_from((i, j) for i in range(M.rank) for j in range(i) if M.gram[i][j])
    return sorted(sorted(c) for c in nx.connected_components(g))


def _unique_rows(A: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    A = np.ascontiguousarray(A)
    view = A.view(np.dtype((np.void, A.dtype.itemsize * A.shape[1]))).ravel()
    _, first, inv = np.unique(view, return_index=True, return_inverse=True)
    return A[first], inv.ravel()


def _hubs(K: KaComplex) -> list[tuple[list[int], KaComplex]]:
    M = K.ambient
    out = []
    for block in _gram_components(M):
        keep = [i for i in range(M.rank) if i not in block]
        out.append((keep, KaComplex(M.pullback(_coordinate_basis(M.rank, keep)), K.coeff_bound)))
    return out


def _cover(K: KaComplex, keep: list[int], hub: KaComplex, todo: np.ndarray) -> np.ndarray:
    """Which vertices ``todo`` are orthogonal to some vertex of ``hub``."""
    if len(todo) == 0 or len(hub) == 0:
        return np.zeros(len(todo), dtype=bool)
    E, F, G = K.pool[K.xi[todo]], K.pool[K.yi[todo]], K._G
    # lambda(p, e) for p supported on keep is (G e)[keep] . p
    key = np.concatenate([E @ G[keep, :].T, F @ G[keep, :].T], axis=1).astype(np.int16)
    ukey, inv = _unique_rows(key)
    r = len(keep)
    P = hub.pool
    Z = ((ukey[:, :r].astype(P.dtype) @ P.T) == 0) & ((ukey[:, r:].astype(P.dtype) @ P.T) == 0)
    uz, inv2 = _unique_rows(np.packbits(Z, axis=1))
    Zu = np.unpackbits(uz, axis=1)[:, : len(P)].astype(bool)
    hit = np.zeros(len(uz), dtype=bool)
    for x, y in zip(hub.xi, hub.yi):
        hit |= Zu[:, x] & Zu[:, y]
    return hit[inv2][inv]


def _hub_certificate(K: KaComplex) -> bool:
    """Sufficient test for connectivity through orthogonal summands.

    For each Gram block ``c`` the vertices supported away from ``c`` form the
    truncation of a smaller orthogonal summand (a hub). If every hub is
    connected, the hubs pairwise share a vertex, and every vertex is
    orthogonal to some hub vertex, the truncation is connected. Returns
    ``False`` when the test is inconclusive.
    """
    blocks = _gram_components(K.ambient)
    if len(blocks) < 3 or len(K) == 0:
        return False
    E, F = K.pool[K.xi], K.pool[K.yi]
    support = np.stack([(E[:, b] != 0).any(axis=1) | (F[:, b] != 0).any(axis=1) for b in blocks], axis=1)
    for c in range(len(blocks)):
        for d in range(c):
            if not (~support[:, [c, d]].any(axis=1)).any():
                return False  # hubs c and d share no vertex
    covered = np.zeros(len(K), dtype=bool)
    for keep, hub in _hubs(K):
        if hub.components() != 1:
            return False
        todo = np.flatnonzero(~covered)
        covered[todo[_cover(K, keep, hub, todo)]] = True
        if covered.all():
            return True
    return False


def isolated_vertices(K: KaComplex, work_limit: int = 10**9) -> np.ndarray | None:
    """Indices of vertices without neighbors; ``None`` if too many to decide."""
    if len(K) <= SMALL_COMPLEX_LIMIT:
        return np.flatnonzero(~K.adjacency_matrix().any(axis=1))
    covered = np.zeros(len(K), dtype=bool)
    if len(_gram_components(K.ambient)) >= 2:
        for keep, hub in _hubs(K):
            todo = np.flatnonzero(~covered)
            covered[todo[_cover(K, keep, hub, todo)]] = True
    rest = np.flatnonzero(~covered)
    if len(rest) * len(K) > work_limit:
        return None
    return np.array([v for v in rest if not K.neighbor_mask(int(v)).any()], dtype=np.int64)


def _coordinate_basis(n: int, keep: Sequence[int]) -> Matrix:
    return tuple(tuple(1 if i == k else 0 for k in keep) for i in range(n))


def _lazy_components(K: KaComplex) -> int:
    """Component count via on-demand expansion and label merging.

    Every vertex receives a provisional label; groups other than the one
    holding vertex 0 are expanded until either they merge with it or all of
    their vertices have been expanded, in which case they are genuine
    components.
    """
    n = len(K)
    label = np.full(n, -1, dtype=np.int64)
    expanded = np.zeros(n, dtype=bool)
    parent: list[int] = []

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def expand(v: int) -> None:
        nb = K.neighbors(v)
        expanded[v] = True
        labs = {find(int(l)) for l in np.unique(label[nb]) if l >= 0}
        if label[v] >= 0:
            labs.add(find(int(label[v])))
        if labs:
            root = min(labs)
            for l in labs:
                parent[l] = root
        else:
            root = len(parent)
            parent.append(root)
        label[v] = root
        fresh = nb[label[nb] < 0]
        label[fresh] = root

    expand(0)
    while True:
        todo = np.flatnonzero(label < 0)
        if len(todo) == 0:
            break
        expand(int(todo[0]))
    while True:
        roots = np.array([find(int(l)) for l in range(len(parent))])
        lab = roots[label]
        main = lab[0]
        pending = np.flatnonzero((lab != main) & ~expanded)
        if len(pending) == 0:
            return 1 + len(set(lab[lab != main].tolist()))
        label[:] = lab
        for v in pending[:256]:
            if find(int(label[v])) != find(int(main)) and not expanded[v]:
                expand(int(v))


def are_orthogonal(M: QuadraticModule, a: KaVertex, b: KaVertex) -> bool:
    return all(M.eval_lambda(x, y) == 0 for x in (a.e, a.f) for y in (b.e, b.f))


def build_ka(M: QuadraticModule, coeff_bound: int) -> KaComplex:
    return KaComplex(M, coeff_bound)


# --- evidence for the connectivity theorem --------------------------------


@dataclass(frozen=True)
class EvidenceReport:
    g: int
    bound: int
    clause: str
    status: str
    degree: int
    detail: str = ""

    def to_json(self) -> dict:
        return {
            "claim": "thm32",
            "g": self.g,
            "bound": self.bound,
            "clause": self.clause,
            "status": self.status,
            "evidence_only": True,
            "degree": self.degree,
            "detail": self.detail,
        }


def certified_stable_witt(M: QuadraticModule, coeff_bound: int, max_k: int = 1) -> int:
    best = -1
    for k in range(max_k + 1):
        best = max(best, stable_witt_lower_bound(M, k, coeff_bound))
    return best


def theorem32_evidence(
    M: QuadraticModule,
    g_claim: int,
    coeff_bound: int,
    max_degree: int,
    pi1_budget: int = DEFAULT_PI1_BUDGET,
    complex_: KaComplex | None = None,
) -> list[EvidenceReport]:
    """Check both clauses of the connectivity theorem on the truncation.

    A pass confirms the property of the truncated complex only; a failure
    does not refute anything about the full complex.
    """
    if g_claim < 0:
        raise ValueError("g_claim must be nonnegative")
    if g_claim > 0 and certified_stable_witt(M, coeff_bound) < g_claim:
        raise ValueError(f"stable Witt index >= {g_claim} is not certified at bound {coeff_bound}")
    K = complex_ if complex_ is not None else build_ka(M, coeff_bound)
    reports = []

    conn = min(max_degree, (g_claim - 4) // 2)
    if (g_claim - 4) // 2 <= -2:
        reports.append(EvidenceReport(g_claim, coeff_bound, "connectivity", "vacuous", (g_claim - 4) // 2))
    elif conn <= 0:
        if conn == -1:
            ok, detail = len(K) > 0, f"{len(K)} vertices"
        else:
            comps = K.components()
            ok, detail = comps == 1, f"{len(K)} vertices, {comps} components"
        reports.append(EvidenceReport(g_claim, coeff_bound, "connectivity", "pass" if ok else "fail", conn, detail))
    else:
        if len(K) > SMALL_COMPLEX_LIMIT:
            raise ValueError(f"{len(K)} vertices: too many for degree-{conn} homology")
        rep = connectivity_report(K.to_simplicial_complex(), conn, pi1_budget)
        status = "pass" if rep.certifies(conn) else "fail"
        reports.append(EvidenceReport(g_claim, coeff_bound, "connectivity", status, conn, str(rep.to_json())))

    n = (g_claim - 1) // 2
    if n <= 0:
        reports.append(EvidenceReport(g_claim, coeff_bound, "lcm", "vacuous", n))
    elif n == 1 and len(K) > SMALL_COMPLEX_LIMIT:
        # links of vertices must be nonempty: no isolated vertices
        iso = isolated_vertices(K)
        if iso is None:
            reports.append(EvidenceReport(g_claim, coeff_bound, "lcm", "not_run", n, f"{len(K)} vertices"))
        else:
            detail = "" if len(iso) == 0 else f"isolated vertex {int(iso[0])}"
            reports.append(EvidenceReport(g_claim, coeff_bound, "lcm", "fail" if len(iso) else "pass", n, detail))
    elif len(K) > SMALL_COMPLEX_LIMIT:
        reports.append(EvidenceReport(g_claim, coeff_bound, "lcm", "not_run", n, f"{len(K)} vertices"))
    else:
        res = is_lcm(K.to_simplicial_complex(), n, pi1_budget)
        detail = "" if res.ok else f"failing face {list(res.witness)}"
        reports.append(EvidenceReport(g_claim, coeff_bound, "lcm", "pass" if res.ok else "fail", n, detail))
    return reports


# --- automorphisms from the complex ----------------------------------------


def swap_automorphism(M: QuadraticModule, h0: KaVertex, h1: KaVertex) -> Matrix:
    """Automorphism of ``M`` exchanging ``h0(H)`` and ``h1(H)`` and fixing their complement."""
    if not are_orthogonal(M, h0, h1):
        raise ValueError("h0 and h1 are not adjacent")
    H2 = QuadraticModule.hyperbolic(M.param, 2)
    pair = QModMorphism(H2, M, intmat.hstack(h0.matrix, h1.matrix, nrows=M.rank))
    comp = orthogonal_complement(pair)
    P = comp.change_of_basis
    r = M.rank
    perm = [2, 3, 0, 1] + list(range(4, r))
    S = tuple(tuple(1 if perm[j] == i else 0 for j in range(r)) for i in range(r))
    F = intmat.matmul(intmat.matmul(P, S), intmat.inverse(P))
    if not (is_morphism(F, M, M) and intmat.is_unimodular(F)):
        raise ArithmeticError("swap is not an automorphism")
    if intmat.matmul(F, h0.matrix) != h1.matrix:
        raise ArithmeticError("swap does not carry h0 to h1")
    return F


@dataclass(frozen=True)
class TransitivityWitness:
    automorphism: Matrix
    path: tuple[KaVertex, ...]


def transitivity_witness(
    M: QuadraticModule, h0: KaVertex, h1: KaVertex, coeff_bound: int, complex_: KaComplex | None = None
) -> TransitivityWitness | None:
    """Automorphism ``f`` with ``f o h0 = h1``, composed from swaps along a path."""
    if h0.matrix == h1.matrix:
        return TransitivityWitness(intmat.identity(M.rank), (h0,))
    K = complex_ if complex_ is not None else build_ka(M, coeff_bound)
    path = K.shortest_path(h0, h1)
    if path is None:
        return None
    F = intmat.identity(M.rank)
    for a, b in zip(path, path[1:]):
        F = intmat.matmul(swap_automorphism(M, a, b), F)
    if intmat.matmul(F, h0.matrix) != h1.matrix:
        raise ArithmeticError("composite does not carry h0 to h1")
    return TransitivityWitness(F, tuple(path))


@dataclass(frozen=True)
class CancellationWitness:
    isomorphism: QModMorphism
    inverse: QModMorphism
    alpha: Matrix


def cancellation_witness(
    M: QuadraticModule, N: QuadraticModule, phi: Sequence[Sequence[int]], coeff_bound: int
) -> CancellationWitness | None:
    """Isomorphism ``M -> N`` from an isomorphism ``M (+) H -> N (+) H``.

    ``H`` is the last summand on both sides. Moves ``phi|_H`` onto the
    standard inclusion by an automorphism ``alpha`` of ``N (+) H``; then
    ``alpha o phi`` restricts to ``M -> N``.
    """
    H = QuadraticModule.hyperbolic(M.param, 1)
    MH, NH = direct_sum(M, H), direct_sum(N, H)
    Phi = intmat.as_matrix(phi)
    if not (is_morphism(Phi, MH, NH) and intmat.is_unimodular(Phi)):
        raise ValueError("phi is not an isomorphism M + H -> N + H")
    if not is_morphism(intmat.inverse(Phi), NH, MH):
        raise ValueError("phi^-1 is not a morphism")
    m, n = M.rank, N.rank
    if m != n:
        raise ValueError("ranks differ")
    if m == 0:
        empty = QModMorphism(M, N, ())
        return CancellationWitness(empty, QModMorphism(N, M, ()), intmat.identity(NH.rank))
    restricted = vertex_from_images(NH, [row[m] for row in Phi], [row[m + 1] for row in Phi])
    iota = vertex_from_images(NH, [0] * n + [1, 0], [0] * n + [0, 1])
    w = transitivity_witness(NH, restricted, iota, coeff_bound)
    if w is None:
        return None
    psi = intmat.matmul(w.automorphism, Phi)
    if any(psi[i][j] for i in range(n, n + 2) for j in range(m)):
        raise ArithmeticError("alpha o phi does not preserve the complement")
    block = tuple(row[:m] for row in psi[:n])
    iso = QModMorphism(M, N, block)
    inv = QModMorphism(N, M, intmat.inverse(block))
    if not (iso.is_valid() and inv.is_valid()):
        raise ArithmeticError("induced map is not an isomorphism")
    return CancellationWitness(iso, inv, w.automorphism)


# --- short paths ---------------------------------------------------------


@dataclass(frozen=True)
class ConnectResult:
    status: str  # "adjacent", "path", "not_found", "precondition_failed"
    path: tuple[KaVertex, ...] = ()
    detail: str = ""
    middle_within_bound: bool | None = None

    @property
    def found(self) -> bool:
        return self.status in ("adjacent", "path")


def prop43_connect(
    M: QuadraticModule, h: KaVertex, h0: KaVertex, coeff_bound: int, method: str = "construct"
) -> ConnectResult:
    """Path ``h -- h1 -- h0`` through a vertex orthogonal to both ends.

    ``method="construct"`` takes a bounded witness ``H^3 -> h0(H)^perp`` and
    restricts it twice, to the kernels of ``lambda(h(e), -)`` and
    ``lambda(h(f), -)``; the result is a morphism
    ``H -> h0(H)^perp cap h(H)^perp``. ``method="enumerate"`` searches that
    intersection directly for a bounded morphism from ``H`` in its reduced
    basis.
    """
    if method not in ("construct", "enumerate"):
        raise ValueError(f"unknown method {method!r}")
    if h.matrix == h0.matrix:
        return ConnectResult("adjacent", (h,))
    if are_orthogonal(M, h, h0):
        return ConnectResult("adjacent", (h, h0))
    comp = orthogonal_complement(h0.morphism)
    C, Kc = comp.module, comp.basis
    g, witness = witt_index_lower_bound(C, coeff_bound) if C.rank >= 2 else (0, None)
    if g < 3:
        return ConnectResult("precondition_failed", detail=f"Witt index of the complement >= {g} only")
    G = M.gram
    if method == "enumerate":
        rows = [[sum(x[i] * G[i][j] for i in range(M.rank)) for j in range(M.rank)] for x in (h.e, h.f, h0.e, h0.f)]
        W, B = kernel_submodule(M, rows)
        w = first_hyperbolic_morphism(W, 1, coeff_bound) if W.rank >= 2 else None
        if w is None:
            return ConnectResult("not_found", detail="no bounded morphism into the intersection")
        amb = intmat.matmul(B, w.matrix)
        mid = vertex_from_images(M, [r[0] for r in amb], [r[1] for r in amb])
        inside = all(abs(x) <= coeff_bound for row in amb for x in row)
        return ConnectResult("path", (h, mid, h0), middle_within_bound=inside)
    witness = first_hyperbolic_morphism(C, 3, coeff_bound)

    def functional(x: Sequence[int], basis: Matrix) -> tuple[int, ...]:
        # y -> lambda(x, basis y)
        row = [sum(x[i] * G[i][j] for i in range(M.rank)) for j in range(M.rank)]
        return tuple(sum(row[i] * basis[i][k] for i in range(M.rank)) for k in range(len(basis[0])))

    step1 = kernel_restriction(witness, functional(h.e, Kc))
    B1 = intmat.matmul(Kc, step1.kernel_basis)
    step2 = kernel_restriction(step1.morphism, functional(h.f, B1))
    B2 = intmat.matmul(B1, step2.kernel_basis)
    amb = intmat.matmul(B2, step2.morphism.matrix)
    mid = vertex_from_images(M, [r[0] for r in amb], [r[1] for r in amb])
    if not (are_orthogonal(M, mid, h) and are_orthogonal(M, mid, h0)):
        return ConnectResult("not_found", detail="constructed vertex is not orthogonal to both ends")
    inside = all(abs(x) <= coeff_bound for row in amb for x in row)
    return ConnectResult("path", (h, mid, h0), middle_within_bound=inside)


def random_vertex_pairs(K: KaComplex, count: int, rng: np.random.Generator) -> list[tuple[int, int]]:
    n = len(K)
    return [(int(rng.integers(n)), int(rng.integers(n))) for _ in range(count)]


@dataclass
class KaStats:
    vertices: int
    edges: int | None
    faces: dict[int, int] = field(default_factory=dict)
    components: int | None = None

    def to_json(self) -> dict:
        return {
            "vertices": self.vertices,
            "edges": self.edges,
            "faces": {str(k): v for k, v in sorted(self.faces.items())},
            "components": self.components,
        }


def ka_stats(K: KaComplex, max_degree: int) -> KaStats:
    if len(K) > SMALL_COMPLEX_LIMIT:
        return KaStats(len(K), None, {}, K.components())
    X = K.to_simplicial_complex()
    faces = {k: X.count(k) for k in range(max_degree + 1) if X.count(k)}
    return KaStats(len(K), X.count(1), faces, K.components())
