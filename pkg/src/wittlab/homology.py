"""Integral homology and connectivity certificates for finite complexes."""
from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Union

from .intmat import rank_and_torsion, smith_normal_form
from .simplicial import Face, SemiSimplicialSet, SimplicialComplex, full_subcomplex, link

ChainSource = Union[SimplicialComplex, SemiSimplicialSet]

DEFAULT_PI1_BUDGET = 10_000
_CHECK_SNF = os.environ.get("WITTLAB_CHECK_SNF") == "1"


@dataclass(frozen=True)
class HomologyGroup:
    degree: int
    betti: int
    torsion: tuple[int, ...] = ()

    def is_zero(self) -> bool:
        return self.betti == 0 and not self.torsion

    def to_json(self) -> dict:
        return {"degree": self.degree, "betti": self.betti, "torsion": [str(t) for t in self.torsion]}


@dataclass(frozen=True)
class HomologyReport:
    """Unreduced groups ``H_0..H_max_degree``; ``reduced`` shifts ``H_0`` and adds ``H_-1``."""

    groups: tuple[HomologyGroup, ...]
    nonempty: bool

    def betti(self, k: int) -> int:
        return self.groups[k].betti

    def torsion(self, k: int) -> tuple[int, ...]:
        return self.groups[k].torsion

    def reduced(self, k: int) -> HomologyGroup:
        if k == -1:
            return HomologyGroup(-1, 0 if self.nonempty else 1)
        g = self.groups[k]
        if k == 0 and self.nonempty:
            return HomologyGroup(0, g.betti - 1, g.torsion)
        return g

    def euler_characteristic(self) -> int:
        return sum((-1) ** g.degree * g.betti for g in self.groups)

    def to_json(self) -> list[dict]:
        return [g.to_json() for g in self.groups]


def _chain_homology(counts: list[int], boundaries: dict[int, list[list[int]]], max_degree: int) -> list[HomologyGroup]:
    invariants = {}
    for k, D in boundaries.items():
        invariants[k] = rank_and_torsion(D, ncols=counts[k])
        if _CHECK_SNF:
            full = smith_normal_form(D, ncols=counts[k], transforms=True, check=True)
            assert invariants[k] == (full.rank, full.torsion)
    out = []
    for k in range(max_degree + 1):
        r_k = invariants[k][0] if k in invariants else 0
        r_next, tors = invariants.get(k + 1, (0, ()))
        out.append(HomologyGroup(k, counts[k] - r_k - r_next, tors))
    return out


def homology(X: ChainSource, max_degree: int) -> HomologyReport:
    """Integral homology in degrees ``0..max_degree`` via Smith normal form."""
    if max_degree < 0:
        raise ValueError("max_degree must be nonnegative")
    counts = [X.count(k) for k in range(max_degree + 2)]
    boundaries = {k: X.boundary(k) for k in range(1, max_degree + 2) if counts[k] and counts[k - 1]}
    groups = _chain_homology(counts, boundaries, max_degree)
    return HomologyReport(tuple(groups), counts[0] > 0)


def relative_homology(X: SimplicialComplex, Y: SimplicialComplex, max_degree: int) -> list[HomologyGroup]:
    """``H_k(X, Y)`` for a subcomplex ``Y``, from the quotient chain complex."""
    rel = {k: [f for f in X.faces(k) if not Y.is_face(f)] for k in range(max_degree + 2)}
    counts = [len(rel[k]) for k in range(max_degree + 2)]
    boundaries = {}
    for k in range(1, max_degree + 2):
        rows, cols = rel[k - 1], rel[k]
        if not rows or not cols:
            continue
        index = {f: i for i, f in enumerate(rows)}
        D = [[0] * len(cols) for _ in rows]
        for j, f in enumerate(cols):
            for i in range(len(f)):
                r = index.get(f[:i] + f[i + 1 :])
                if r is not None:
                    D[r][j] += (-1) ** i
        boundaries[k] = D
    return _chain_homology(counts, boundaries, max_degree)


# --- fundamental group ----------------------------------------------------


def _free_reduce(w: list[int]) -> list[int]:
    out: list[int] = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    while len(out) >= 2 and out[0] == -out[-1]:
        out = out[1:-1]
    return out


def _substitute(w: list[int], g: int, repl: list[int]) -> list[int]:
    inv = [-x for x in reversed(repl)]
    out: list[int] = []
    for x in w:
        if x == g:
            out.extend(repl)
        elif x == -g:
            out.extend(inv)
        else:
            out.append(x)
    return _free_reduce(out)


def edge_path_presentation(X: SimplicialComplex) -> tuple[set[int], list[list[int]]]:
    """Generators and relators of the edge-path group at the least vertex.

    Generators are the edges outside a BFS spanning tree (numbered from 1);
    each triangle contributes one relator. Only the component of the least
    vertex is used.
    """
    verts = X.vertices
    if not verts:
        return set(), []
    adj: dict[int, list[int]] = {v: [] for v in verts}
    for u, v in X.faces(1):
        adj[u].append(v)
        adj[v].append(u)
    tree: set[tuple[int, int]] = set()
    seen = {verts[0]}
    q = deque([verts[0]])
    while q:
        u = q.popleft()
        for v in sorted(adj[u]):
            if v not in seen:
                seen.add(v)
                tree.add((min(u, v), max(u, v)))
                q.append(v)
    gen_of: dict[tuple[int, int], int] = {}
    for e in X.faces(1):
        if e[0] in seen and e not in tree:
            gen_of[e] = len(gen_of) + 1

    def word(u: int, v: int) -> list[int]:
        if u < v:
            g = gen_of.get((u, v))
            return [g] if g else []
        g = gen_of.get((v, u))
        return [-g] if g else []

    rels = []
    for a, b, c in X.faces(2):
        if a in seen:
            w = _free_reduce(word(a, b) + word(b, c) + word(c, a))
            if w:
                rels.append(w)
    return set(gen_of.values()), rels


def simplify_presentation(gens: set[int], rels: list[list[int]], budget: int) -> tuple[bool | None, int]:
    """Tietze elimination. Returns (trivial?, moves used); ``None`` means undecided."""
    gens = set(gens)
    rels = [r for r in (_free_reduce(list(r)) for r in rels) if r]
    moves = 0
    while gens:
        if moves >= budget:
            return None, moves
        if not rels:
            return False, moves  # free group of positive rank
        best = None
        for ri, r in enumerate(rels):
            counts: dict[int, int] = {}
            for x in r:
                counts[abs(x)] = counts.get(abs(x), 0) + 1
            for g, c in counts.items():
                if c == 1 and (best is None or len(r) < best[0]):
                    best = (len(r), ri, g)
        if best is None:
            return None, moves
        _, ri, g = best
        r = rels.pop(ri)
        pos = next(i for i, x in enumerate(r) if abs(x) == g)
        # r = u g^s v = 1  =>  g^s = u^-1 v^-1, rotate so g^s comes first
        rot = r[pos:] + r[:pos]
        s, rest = rot[0], rot[1:]
        repl = [-x for x in reversed(rest)]  # g^s = rest^-1
        if s < 0:
            repl = [-x for x in reversed(repl)]
        rels = [w for w in (_substitute(w, g, repl) for w in rels) if w]
        gens.discard(g)
        moves += 1
        if sum(len(w) for w in rels) > 200_000:
            return None, moves
    return True, moves


def fundamental_group_trivial(X: SimplicialComplex, budget: int = DEFAULT_PI1_BUDGET) -> bool | None:
    gens, rels = edge_path_presentation(X)
    return simplify_presentation(gens, rels, budget)[0]


# --- connectivity ---------------------------------------------------------


@dataclass(frozen=True)
class ConnectivityReport:
    """Homology-level connectivity evidence.

    ``h_reduced_vanishing_up_to`` is the largest ``k <= n`` with reduced
    homology zero in all degrees ``<= k`` (``-2`` for the empty complex).
    ``connectivity`` is what is certified for homotopy: homology vanishing
    counts beyond degree 0 only together with a trivial fundamental group.
    """

    n: int
    nonempty: bool
    h_reduced_vanishing_up_to: int
    pi1_trivial: bool | None
    connectivity: int = field(default=-2)

    def certifies(self, k: int) -> bool:
        return k <= -2 or self.connectivity >= k

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "nonempty": self.nonempty,
            "h_reduced_vanishing_up_to": self.h_reduced_vanishing_up_to,
            "pi1_trivial": "unknown" if self.pi1_trivial is None else self.pi1_trivial,
            "connectivity": self.connectivity,
        }


def connectivity_report(X: SimplicialComplex, n: int, pi1_budget: int = DEFAULT_PI1_BUDGET) -> ConnectivityReport:
    if n < -1:
        raise ValueError("n must be at least -1")
    nonempty = not X.is_empty()
    if not nonempty:
        return ConnectivityReport(n, False, -2, None, -2)
    vanish = -1
    pi1 = None
    if n >= 0:
        H = homology(X, n)
        for k in range(n + 1):
            if not H.reduced(k).is_zero():
                break
            vanish = k
        if n >= 1 and vanish >= 0:
            if not H.reduced(1).is_zero():
                pi1 = False
            else:
                pi1 = fundamental_group_trivial(X, pi1_budget)
    conn = vanish if vanish <= 0 or pi1 else 0
    return ConnectivityReport(n, True, vanish, pi1, conn)


@dataclass(frozen=True)
class CMResult:
    ok: bool
    witness: Face | None = None

    def __bool__(self) -> bool:
        return self.ok


def _link_conditions(X: SimplicialComplex, n: int, pi1_budget: int) -> CMResult:
    for p in range(0, n):
        need = n - p - 2
        for s in X.faces(p):
            if not connectivity_report(link(X, s), max(need, -1), pi1_budget).certifies(need):
                return CMResult(False, s)
    return CMResult(True)


def is_wcm(X: SimplicialComplex, n: int, pi1_budget: int = DEFAULT_PI1_BUDGET) -> CMResult:
    """Weakly Cohen-Macaulay of dimension ``n``; the witness is the failing face."""
    if n - 1 >= -1 and not connectivity_report(X, n - 1, pi1_budget).certifies(n - 1):
        return CMResult(False, ())
    return _link_conditions(X, n, pi1_budget)


def is_lcm(X: SimplicialComplex, n: int, pi1_budget: int = DEFAULT_PI1_BUDGET) -> CMResult:
    """Locally weakly Cohen-Macaulay: only the link conditions."""
    return _link_conditions(X, n, pi1_budget)


# --- full subcomplexes ----------------------------------------------------


@dataclass(frozen=True)
class SubcomplexReport:
    n: int
    hypothesis_holds: bool
    conclusion_holds: bool
    failing_face: Face | None
    relative_homology: tuple[HomologyGroup, ...]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "hypothesis_holds": self.hypothesis_holds,
            "conclusion_holds": self.conclusion_holds,
            "failing_face": None if self.failing_face is None else list(self.failing_face),
            "relative_homology": [g.to_json() for g in self.relative_homology],
        }


def prop25_harness(
    X: SimplicialComplex, y_vertices: Iterable[int], n: int, pi1_budget: int = DEFAULT_PI1_BUDGET
) -> SubcomplexReport:
    """Check the link hypothesis and the homological conclusion for ``Y`` full in ``X``.

    Hypothesis: for each ``p``-face with no vertex in ``Y``, ``Y cap Lk(sigma)``
    is ``(n-p-1)``-connected. Conclusion: ``H_k(X, Y) = 0`` for ``k <= n``.
    """
    S = set(y_vertices)
    Y = full_subcomplex(X, S)
    failing = None
    for p in range(0, X.dim + 1):
        need = n - p - 1
        if need < -1:
            break
        for s in X.faces(p):
            if S.intersection(s):
                continue
            piece = full_subcomplex(link(X, s), S)
            if not connectivity_report(piece, need, pi1_budget).certifies(need):
                failing = s
                break
        if failing is not None:
            break
    rel = tuple(relative_homology(X, Y, n)) if n >= 0 else ()
    return SubcomplexReport(n, failing is None, all(g.is_zero() for g in rel), failing, rel)
