"""Reference computations that share no code with the package.

Each oracle takes the slow, obvious route: sympy for integer linear algebra,
explicit recursion on the form axioms, symplectic bases over GF(2), and
plain loops for enumerations and graphs.
"""
from __future__ import annotations

import itertools
from functools import lru_cache

import networkx as nx
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors


def sym_invariants(A, ncols=None):
    """Nonzero invariant factors via sympy."""
    rows = [list(r) for r in A]
    if not rows or not rows[0]:
        return ()
    facs = invariant_factors(Matrix(rows), domain=ZZ)
    return tuple(int(abs(d)) for d in facs if d != 0)


def sym_rank(A):
    rows = [list(r) for r in A]
    if not rows or not rows[0]:
        return 0
    return Matrix(rows).rank()


def sym_det(A):
    return int(Matrix([list(r) for r in A]).det()) if A else 1


def lam(gram, x, y):
    return sum(x[i] * gram[i][j] * y[j] for i in range(len(x)) for j in range(len(y)))


def mu_by_axioms(gram, mu_basis, x, modulus):
    """mu(x) built from mu(b_i) by repeated use of mu(u + v) = mu(u) + mu(v) + lam(u, v).

    ``modulus`` is 0 for the integers, 2 for Z/2, 1 for the trivial group.
    Negative coefficients use mu(-v) = mu(v).
    """
    n = len(x)

    def red(a):
        return a if modulus == 0 else a % modulus

    def basis(i, sign):
        return tuple(sign if k == i else 0 for k in range(n))

    cur = (0,) * n
    val = 0
    for i, c in enumerate(x):
        step = basis(i, 1 if c > 0 else -1)
        for _ in range(abs(c)):
            val = val + mu_basis[i] + lam(gram, cur, step)
            cur = tuple(a + b for a, b in zip(cur, step))
    return red(val)


def arf_by_symplectic_basis(gram, mu_basis):
    """Arf invariant via a symplectic basis of the form mod 2: sum of q(a_i) q(b_i)."""
    n = len(gram)
    G = [[gram[i][j] % 2 for j in range(n)] for i in range(n)]

    def b(u, v):
        return sum(u[i] * G[i][j] * v[j] for i in range(n) for j in range(n)) % 2

    def q(u):
        return (sum(u[i] * mu_basis[i] for i in range(n)) + sum(u[i] * u[j] * G[i][j] for i in range(n) for j in range(i + 1, n))) % 2

    vecs = [tuple(int(i == k) for i in range(n)) for k in range(n)]
    total = 0
    while vecs:
        a = vecs.pop(0)
        k = next(k for k, v in enumerate(vecs) if b(a, v))
        c = vecs.pop(k)
        total += q(a) * q(c)
        new = []
        for v in vecs:
            # project v off span(a, c)
            w = list(v)
            if b(v, c):
                w = [(x + y) % 2 for x, y in zip(w, a)]
            if b(v, a):
                w = [(x + y) % 2 for x, y in zip(w, c)]
            new.append(tuple(w))
        vecs = new
    return total % 2


def brute_hyperbolic_vertices(gram, mu_basis, eps, modulus, bound):
    """All (e, f) with lam(e,f)=1, lam(f,e)=eps, lam(e,e)=lam(f,f)=0 and mu(e)=mu(f)=0."""
    n = len(gram)
    pool = list(itertools.product(range(-bound, bound + 1), repeat=n))

    def iso(v):
        if lam(gram, v, v) != 0:
            return False
        m = mu_by_axioms(gram, mu_basis, v, modulus)
        return m == 0

    good = [v for v in pool if iso(v)]
    out = []
    for e in good:
        for f in good:
            if lam(gram, e, f) == 1 and lam(gram, f, e) == eps:
                out.append((e, f))
    return out


def orthogonality_graph(gram, vertices):
    G = nx.Graph()
    G.add_nodes_from(range(len(vertices)))
    for i, (e1, f1) in enumerate(vertices):
        for j in range(i + 1, len(vertices)):
            e2, f2 = vertices[j]
            if all(lam(gram, x, y) == 0 for x in (e1, f1) for y in (e2, f2)):
                G.add_edge(i, j)
    return G


def clique_faces(G, k):
    """k-dimensional faces of the clique complex of G."""
    return sorted(tuple(sorted(c)) for c in nx.enumerate_all_cliques(G) if len(c) == k + 1)


def boundary_matrix(faces_k, faces_km1):
    index = {f: i for i, f in enumerate(faces_km1)}
    D = [[0] * len(faces_k) for _ in faces_km1]
    for j, f in enumerate(faces_k):
        for i in range(len(f)):
            D[index[f[:i] + f[i + 1 :]]][j] += (-1) ** i
    return D


def homology_from_faces(faces_by_dim, max_degree):
    """(betti, torsion) per degree with sympy doing all linear algebra."""
    out = []
    for k in range(max_degree + 1):
        n_k = len(faces_by_dim.get(k, []))
        r_k = sym_rank(boundary_matrix(faces_by_dim[k], faces_by_dim[k - 1])) if k >= 1 and n_k and faces_by_dim.get(k - 1) else 0
        up = faces_by_dim.get(k + 1, [])
        if up and n_k:
            D = boundary_matrix(up, faces_by_dim[k])
            inv = sym_invariants(D)
            r_up = len(inv)
            tors = tuple(d for d in inv if d > 1)
        else:
            r_up, tors = 0, ()
        out.append((n_k - r_k - r_up, tors))
    return out


def all_faces_from_facets(facets):
    faces = {}
    for F in facets:
        F = tuple(sorted(F))
        for k in range(1, len(F) + 1):
            for t in itertools.combinations(F, k):
                faces.setdefault(k - 1, set()).add(t)
    return {k: sorted(v) for k, v in faces.items()}


@lru_cache(maxsize=None)
def hyperbolic_gram(eps, g):
    n = 2 * g
    G = [[0] * n for _ in range(n)]
    for i in range(g):
        G[2 * i][2 * i + 1] = 1
        G[2 * i + 1][2 * i] = eps
    return tuple(tuple(r) for r in G)
