"""Finite simplicial complexes, simplicial maps and semisimplicial sets.

Faces are sorted tuples of vertex labels (nonnegative ints). Every complex
contains the empty face, so the complex with no facets is ``{()}``; its
reduced homology is ``Z`` in degree ``-1``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import networkx as nx

Face = tuple[int, ...]


def _maximal(faces: Iterable[Iterable[int]]) -> frozenset[Face]:
    cands = sorted({tuple(sorted(set(f))) for f in faces}, key=len, reverse=True)
    kept: list[Face] = []
    kept_sets: list[frozenset] = []
    for f in cands:
        if not f:
            continue
        s = frozenset(f)
        if not any(s <= k for k in kept_sets):
            kept.append(f)
            kept_sets.append(s)
    return frozenset(kept)


class SimplicialComplex:
    """Complex stored by its facets, or (for flag complexes) by its graph.

    Instances are treated as immutable.
    """

    def __init__(self, facets: Iterable[Iterable[int]] = (), vertices: Iterable[int] = ()):
        facets = [tuple(f) for f in facets]
        self._facets: frozenset[Face] | None = _maximal(facets + [(v,) for v in vertices])
        self._adj: dict[int, frozenset[int]] | None = None

    @classmethod
    def flag(cls, vertices: Iterable[int], edges: Iterable[Sequence[int]]) -> SimplicialComplex:
        """Clique complex of a graph; faces are cliques, expanded on demand."""
        X = cls.__new__(cls)
        adj: dict[int, set[int]] = {int(v): set() for v in vertices}
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError("loops are not allowed")
            adj.setdefault(u, set()).add(v)
            adj.setdefault(v, set()).add(u)
        X._adj = {v: frozenset(n) for v, n in adj.items()}
        X._facets = None
        return X

    @classmethod
    def simplex(cls, vertices: Iterable[int]) -> SimplicialComplex:
        return cls([tuple(vertices)])

    @classmethod
    def boundary_of_simplex(cls, n: int) -> SimplicialComplex:
        """``dDelta^n`` on vertices ``0..n``."""
        return cls(itertools.combinations(range(n + 1), n))

    @property
    def is_flag(self) -> bool:
        return self._adj is not None

    @property
    def facets(self) -> frozenset[Face]:
        if self._facets is None:
            G = self.graph()
            self._facets = _maximal(nx.find_cliques(G)) if G.number_of_nodes() else frozenset()
        return self._facets

    def graph(self) -> nx.Graph:
        G = nx.Graph()
        if self._adj is not None:
            G.add_nodes_from(sorted(self._adj))
            G.add_edges_from((u, v) for u, ns in self._adj.items() for v in ns if u < v)
        else:
            G.add_nodes_from(self.vertices)
            G.add_edges_from(self.faces(1))
        return G

    @cached_property
    def vertices(self) -> tuple[int, ...]:
        if self._adj is not None:
            return tuple(sorted(self._adj))
        return tuple(sorted({v for f in self.facets for v in f}))

    @property
    def dim(self) -> int:
        return max((len(f) - 1 for f in self.facets), default=-1)

    @cached_property
    def _faces_by_dim(self) -> dict[int, list[Face]]:
        out: dict[int, set[Face]] = {}
        for F in self.facets:
            for k in range(1, len(F) + 1):
                out.setdefault(k - 1, set()).update(itertools.combinations(F, k))
        return {d: sorted(fs) for d, fs in out.items()}

    def faces(self, k: int) -> list[Face]:
        """The ``k``-dimensional faces, sorted; ``faces(-1) == [()]``."""
        if k == -1:
            return [()]
        return self._faces_by_dim.get(k, [])

    def all_faces(self) -> list[Face]:
        return [f for k in range(-1, self.dim + 1) for f in self.faces(k)]

    def count(self, k: int) -> int:
        return len(self.faces(k)) if k >= 0 else 0

    def is_face(self, sigma: Iterable[int]) -> bool:
        s = tuple(sorted(set(sigma)))
        if not s:
            return True
        if self._adj is not None:
            return all(v in self._adj for v in s) and all(b in self._adj[a] for a, b in itertools.combinations(s, 2))
        ss = set(s)
        return any(ss <= set(F) for F in self.facets)

    def is_empty(self) -> bool:
        return not self.vertices

    def reduced_euler_characteristic(self) -> int:
        return -1 + sum((-1) ** k * self.count(k) for k in range(self.dim + 1))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SimplicialComplex) and self.facets == other.facets

    def __hash__(self) -> int:
        return hash(self.facets)

    def __repr__(self) -> str:
        return f"SimplicialComplex({sorted(self.facets)})"

    # boundary data for homology
    def boundary(self, k: int) -> list[list[int]]:
        """Matrix of ``d_k: C_k -> C_{k-1}`` (rows: ``(k-1)``-faces)."""
        rows = self.faces(k - 1) if k >= 1 else []
        index = {f: i for i, f in enumerate(rows)}
        cols = self.faces(k)
        D = [[0] * len(cols) for _ in rows]
        for j, f in enumerate(cols):
            for i in range(len(f)):
                D[index[f[:i] + f[i + 1 :]]][j] += (-1) ** i
        return D


def link(X: SimplicialComplex, sigma: Iterable[int]) -> SimplicialComplex:
    """Faces ``tau`` disjoint from ``sigma`` with ``sigma | tau`` a face."""
    s = tuple(sorted(set(sigma)))
    if not X.is_face(s):
        raise ValueError(f"{s} is not a face")
    if not s:
        return X
    if X.is_flag:
        common = set.intersection(*(set(X._adj[v]) for v in s)) - set(s)
        return SimplicialComplex.flag(sorted(common), [(u, v) for u in common for v in X._adj[u] if v in common and u < v])
    ss = set(s)
    return SimplicialComplex([tuple(v for v in F if v not in ss) for F in X.facets if ss <= set(F)])


def star(X: SimplicialComplex, sigma: Iterable[int]) -> SimplicialComplex:
    """Closed star: all faces of facets containing ``sigma``."""
    ss = set(sigma)
    if not X.is_face(ss):
        raise ValueError(f"{tuple(sorted(ss))} is not a face")
    return SimplicialComplex([F for F in X.facets if ss <= set(F)])


def join(X: SimplicialComplex, Y: SimplicialComplex) -> tuple[SimplicialComplex, int]:
    """Join on disjoint vertex sets; ``Y``'s vertices are shifted by the returned offset."""
    offset = max(X.vertices, default=-1) + 1
    fx = list(X.facets) or [()]
    fy = [tuple(v + offset for v in F) for F in Y.facets] or [()]
    if X.is_flag and Y.is_flag:
        edges = list(X.graph().edges()) + [(u + offset, v + offset) for u, v in Y.graph().edges()]
        edges += [(u, v + offset) for u in X.vertices for v in Y.vertices]
        return SimplicialComplex.flag(list(X.vertices) + [v + offset for v in Y.vertices], edges), offset
    return SimplicialComplex([a + b for a in fx for b in fy]), offset


def full_subcomplex(X: SimplicialComplex, vertex_subset: Iterable[int]) -> SimplicialComplex:
    S = set(vertex_subset)
    if X.is_flag:
        keep = [v for v in X.vertices if v in S]
        return SimplicialComplex.flag(keep, [(u, v) for u in keep for v in X._adj[u] if v in S and u < v])
    return SimplicialComplex([tuple(v for v in F if v in S) for F in X.facets])


def is_subcomplex(L: SimplicialComplex, K: SimplicialComplex) -> bool:
    return all(K.is_face(F) for F in L.facets)


# --- simplicial maps ------------------------------------------------------


@dataclass(frozen=True)
class SimplicialMap:
    source: SimplicialComplex
    target: SimplicialComplex
    images: Mapping[int, int]

    def __post_init__(self):
        missing = [v for v in self.source.vertices if v not in self.images]
        if missing:
            raise ValueError(f"no image for vertices {missing}")

    def __call__(self, sigma: Iterable[int]) -> Face:
        return tuple(sorted({self.images[v] for v in sigma}))

    def is_valid(self) -> bool:
        return all(self.target.is_face(self(F)) for F in self.source.facets)


def is_simplexwise_injective(f: SimplicialMap) -> bool:
    """Every edge goes to two distinct vertices."""
    return all(f.images[u] != f.images[v] for u, v in f.source.faces(1))


def injectivity_criteria(f: SimplicialMap) -> tuple[bool, bool, bool, bool]:
    """The four equivalent characterizations of simplexwise injectivity.

    (i) injective on every face; (ii) ``f(Lk sigma) <= Lk f(sigma)`` for all
    faces; (iii) the same for vertices; (iv) injective on every edge.
    """
    X, Y = f.source, f.target
    faces = [s for s in X.all_faces() if s]
    crit1 = all(len(f(s)) == len(s) for s in faces)

    def link_preserved(s: Face) -> bool:
        img = f(s)
        lk_img = set(img)
        for tau in link(X, s).facets:
            t = f(tau)
            if lk_img & set(t) or not Y.is_face(img + t):
                return False
        return True

    crit2 = all(link_preserved(s) for s in faces)
    crit3 = all(link_preserved((v,)) for v in X.vertices)
    crit4 = is_simplexwise_injective(f)
    return crit1, crit2, crit3, crit4


def find_bad_simplices(f: SimplicialMap) -> list[Face]:
    """Faces containing an edge whose endpoints have equal images, largest first."""
    bad = [s for k in range(1, f.source.dim + 1) for s in f.source.faces(k) if len(f(s)) < len(s)]
    return sorted(bad, key=lambda s: (-len(s), s))


# --- relative subdivision -------------------------------------------------


@dataclass(frozen=True)
class RelativeSubdivision:
    complex: SimplicialComplex
    carrier: dict[int, Face]
    star_condition: bool


def barycentric_subdivide_rel(K: SimplicialComplex, L: SimplicialComplex) -> RelativeSubdivision:
    """Subdivide ``K`` once, adding barycenters only of faces outside ``L``.

    Simplices of the result are ``tau * {b(s_0), ..., b(s_k)}`` for chains
    ``s_0 < ... < s_k`` of faces outside ``L`` and faces ``tau`` of ``L``
    properly contained in ``s_0``. The barycenter of a vertex is the vertex.
    ``carrier`` maps every vertex of the result to its carrier face in ``K``.
    ``star_condition`` reports whether every new vertex's closed star meets
    ``L`` in a single simplex (true whenever ``L`` is full in ``K``).
    """
    if not is_subcomplex(L, K):
        raise ValueError("L is not a subcomplex of K")
    outside = [s for s in K.all_faces() if s and not L.is_face(s)]
    next_label = max(K.vertices, default=-1) + 1
    bary: dict[Face, int] = {}
    for s in sorted(outside, key=lambda s: (len(s), s)):
        if len(s) == 1:
            bary[s] = s[0]
        else:
            bary[s] = next_label
            next_label += 1
    above: dict[Face, list[Face]] = {s: [] for s in outside}
    for s in outside:
        ss = set(s)
        for t in outside:
            if len(t) == len(s) + 1 and ss < set(t):
                above[s].append(t)

    simplices: list[Face] = list(L.facets)

    def chains(s: Face):
        if not above[s]:
            yield [s]
        for t in above[s]:
            for c in chains(t):
                yield [s] + c

    for s0 in outside:
        bottoms = [tau for tau in L.all_faces() if set(tau) < set(s0)]
        maximal_bottoms = [t for t in bottoms if not any(set(t) < set(u) for u in bottoms)] or [()]
        for c in chains(s0):
            for tau in maximal_bottoms:
                simplices.append(tau + tuple(bary[s] for s in c))
    Kp = SimplicialComplex(simplices, vertices=K.vertices)
    carrier = {v: (v,) for v in K.vertices}
    carrier.update({b: s for s, b in bary.items()})
    new_vertices = [v for v in Kp.vertices if v not in set(L.vertices)]
    ok = all(_star_meets_in_simplex(Kp, L, v) for v in new_vertices)
    return RelativeSubdivision(Kp, carrier, ok)


def _star_meets_in_simplex(Kp: SimplicialComplex, L: SimplicialComplex, v: int) -> bool:
    Lv = set(L.vertices)
    meet: set[Face] = set()
    for F in Kp.facets:
        if v in F:
            inside = [u for u in F if u in Lv]
            for k in range(1, len(inside) + 1):
                meet.update(t for t in itertools.combinations(inside, k) if L.is_face(t))
    if not meet:
        return True
    top = max(meet, key=len)
    return all(set(t) <= set(top) for t in meet) and len(meet) == 2 ** len(top) - 1


# --- semisimplicial sets --------------------------------------------------


class SemiSimplicialSet:
    """Finite semisimplicial set.

    ``counts[p]`` is the number of ``p``-simplices; ``faces[p-1][j]`` lists
    ``(d_0 x, ..., d_p x)`` (indices into degree ``p-1``) for the ``j``-th
    ``p``-simplex ``x``.
    """

    def __init__(self, counts: Sequence[int], faces: Sequence[Sequence[Sequence[int]]], labels=None):
        self.counts = tuple(int(c) for c in counts)
        self.faces = tuple(tuple(tuple(int(i) for i in f) for f in deg) for deg in faces)
        self.labels = labels
        if len(self.faces) != max(len(self.counts) - 1, 0):
            raise ValueError("need face data for every positive degree")
        for p, deg in enumerate(self.faces, start=1):
            if len(deg) != self.counts[p] or any(len(f) != p + 1 for f in deg):
                raise ValueError(f"bad face data in degree {p}")
            if any(not 0 <= i < self.counts[p - 1] for f in deg for i in f):
                raise ValueError(f"face index out of range in degree {p}")

    @property
    def dim(self) -> int:
        return len(self.counts) - 1

    def count(self, k: int) -> int:
        return self.counts[k] if 0 <= k < len(self.counts) else 0

    def face(self, p: int, j: int, i: int) -> int:
        return self.faces[p - 1][j][i]

    def identity_violations(self) -> list[tuple[int, int, int, int]]:
        """All ``(p, x, i, j)`` with ``i < j`` where ``d_i d_j x != d_{j-1} d_i x``."""
        bad = []
        for p in range(2, self.dim + 1):
            for x in range(self.counts[p]):
                for j in range(p + 1):
                    for i in range(j):
                        lhs = self.face(p - 1, self.face(p, x, j), i)
                        rhs = self.face(p - 1, self.face(p, x, i), j - 1)
                        if lhs != rhs:
                            bad.append((p, x, i, j))
        return bad

    def boundary(self, k: int) -> list[list[int]]:
        if k < 1 or k > self.dim:
            return [[0] * self.count(k) for _ in range(self.count(k - 1))]
        D = [[0] * self.counts[k] for _ in range(self.counts[k - 1])]
        for j, f in enumerate(self.faces[k - 1]):
            for i, t in enumerate(f):
                D[t][j] += (-1) ** i
        return D

    @classmethod
    def from_complex(cls, K: SimplicialComplex) -> SemiSimplicialSet:
        """The ordered-simplex set ``K_.``: ``p``-simplices are injective maps ``Delta^p -> K``."""
        levels: list[list[Face]] = []
        for p in range(K.dim + 1):
            levels.append(sorted(t for s in K.faces(p) for t in itertools.permutations(s)))
        index = [{t: i for i, t in enumerate(lv)} for lv in levels]
        faces = []
        for p in range(1, len(levels)):
            faces.append([tuple(index[p - 1][t[:i] + t[i + 1 :]] for i in range(p + 1)) for t in levels[p]])
        return cls([len(lv) for lv in levels], faces, labels=levels)


def ordered_chain_maps(K: SimplicialComplex, Kdot: SemiSimplicialSet, k: int) -> tuple[list[list[int]], list[list[int]]]:
    """Section ``C_k(K) -> C_k(K_.)`` (sorted order) and projection back.

    The projection sends an ordered tuple to its underlying face with the sign
    of the sorting permutation; projection after section is the identity.
    """
    faces = K.faces(k)
    ordered = Kdot.labels[k]
    idx_face = {f: i for i, f in enumerate(faces)}
    idx_ord = {t: i for i, t in enumerate(ordered)}
    section = [[0] * len(faces) for _ in ordered]
    for j, f in enumerate(faces):
        section[idx_ord[f]][j] = 1
    proj = [[0] * len(ordered) for _ in faces]
    for j, t in enumerate(ordered):
        s = tuple(sorted(t))
        proj[idx_face[s]][j] = _perm_sign(t)
    return section, proj


def _perm_sign(t: Sequence[int]) -> int:
    inv = sum(1 for a, b in itertools.combinations(t, 2) if a > b)
    return -1 if inv % 2 else 1


def torus() -> SemiSimplicialSet:
    """Two triangles glued into a torus: one vertex, edges ``a, b, c``."""
    # edges a=0, b=1, c=2 (diagonal); upper triangle faces (a, c, b), lower (b, c, a)
    return SemiSimplicialSet([1, 3, 2], [[(0, 0), (0, 0), (0, 0)], [(0, 2, 1), (1, 2, 0)]])


def real_projective_plane() -> SimplicialComplex:
    """The minimal 6-vertex triangulation of the real projective plane."""
    return SimplicialComplex(
        [
            (0, 1, 3), (0, 1, 5), (0, 2, 4), (0, 2, 5), (0, 3, 4),
            (1, 2, 3), (1, 2, 4), (1, 4, 5), (2, 3, 5), (3, 4, 5),
        ]
    )
