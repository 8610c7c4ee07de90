import itertools

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import all_faces_from_facets, clique_faces
from wittlab.simplicial import (
    SemiSimplicialSet,
    SimplicialComplex,
    SimplicialMap,
    barycentric_subdivide_rel,
    find_bad_simplices,
    full_subcomplex,
    injectivity_criteria,
    is_simplexwise_injective,
    join,
    link,
    ordered_chain_maps,
    star,
    torus,
)

S = SimplicialComplex


@st.composite
def graphs(draw, max_vertices=8):
    n = draw(st.integers(0, max_vertices))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return n, [e for e, keep in zip(pairs, chosen) if keep]


@st.composite
def complexes(draw, max_vertices=7, max_facets=6):
    n = draw(st.integers(1, max_vertices))
    facets = draw(
        st.lists(st.lists(st.integers(0, n - 1), min_size=1, max_size=4, unique=True), min_size=1, max_size=max_facets)
    )
    return S(facets)


# --- construction ----------------------------------------------------------


def test_facets_are_maximal():
    X = S([(0, 1, 2), (0, 1), (3,)])
    assert X.facets == frozenset({(0, 1, 2), (3,)})


@given(graphs())
def test_flag_faces_are_exactly_cliques(g):
    n, edges = g
    X = S.flag(range(n), edges)
    G = nx.Graph()
    G.add_nodes_from(range(n))
    G.add_edges_from(edges)
    for k in range(0, 5):
        assert X.faces(k) == clique_faces(G, k)


@given(complexes())
def test_faces_downward_closed_and_euler(X):
    want = all_faces_from_facets(X.facets)
    for k, fs in want.items():
        assert X.faces(k) == fs
    chi = sum((-1) ** k * len(fs) for k, fs in want.items())
    assert X.reduced_euler_characteristic() == chi - 1


@given(complexes())
def test_boundary_squares_to_zero(X):
    for k in range(2, X.dim + 1):
        A, B = X.boundary(k - 1), X.boundary(k)
        prod = [[sum(A[i][t] * B[t][j] for t in range(len(B))) for j in range(len(B[0]))] for i in range(len(A))]
        assert all(x == 0 for row in prod for x in row)


# --- links, stars, joins, full subcomplexes ---------------------------------


def test_link_examples():
    T = S.boundary_of_simplex(3)
    assert link(T, (0,)) == S([(1, 2), (1, 3), (2, 3)])
    assert link(T, (0, 1)) == S([(2,), (3,)])
    assert link(T, ()) == T
    with pytest.raises(ValueError):
        link(S([(0, 1)]), (0, 2))


def test_star_example():
    X = S([(0, 1, 2), (2, 3)])
    assert star(X, (2,)) == X
    assert star(X, (0,)) == S([(0, 1, 2)])


def test_join_examples():
    X = S.boundary_of_simplex(2)
    cone, _ = join(S([(0,)]), X)
    assert len(cone.facets) == len(X.facets)
    circle, _ = join(S([(0,), (1,)]), S([(0,), (1,)]))
    assert len(circle.faces(0)) == 4 and len(circle.faces(1)) == 4 and circle.dim == 1
    empty = S([])
    assert join(empty, X)[0] == X


@given(complexes(5, 4), complexes(5, 4))
def test_join_reduced_euler_is_multiplicative(X, Y):
    J, _ = join(X, Y)
    assert J.reduced_euler_characteristic() == -X.reduced_euler_characteristic() * Y.reduced_euler_characteristic()


@given(graphs(7), graphs(5))
def test_flag_join_agrees_with_facet_join(gx, gy):
    X = S.flag(range(gx[0]), gx[1])
    Y = S.flag(range(gy[0]), gy[1])
    flag_join, off = join(X, Y)
    plain_join, off2 = join(S(X.facets), S(Y.facets))
    assert off == off2 and flag_join.facets == plain_join.facets


def test_full_subcomplex_examples():
    T = S.boundary_of_simplex(3)
    assert full_subcomplex(T, range(4)) == T
    assert full_subcomplex(T, []).is_empty()
    assert full_subcomplex(T, [0, 1, 2]) == S.simplex([0, 1, 2])


# --- simplicial maps ---------------------------------------------------------


def test_injectivity_examples():
    E = S([(0, 1)])
    assert is_simplexwise_injective(SimplicialMap(E, E, {0: 0, 1: 1}))
    assert not is_simplexwise_injective(SimplicialMap(E, S([(0,)]), {0: 0, 1: 0}))
    C4 = S([(0, 1), (1, 2), (2, 3), (0, 3)])
    fold = SimplicialMap(C4, E, {0: 0, 1: 1, 2: 0, 3: 1})
    assert fold.is_valid() and is_simplexwise_injective(fold)


def test_bad_simplex_examples():
    E = S([(0, 1)])
    assert find_bad_simplices(SimplicialMap(E, E, {0: 0, 1: 1})) == []
    assert find_bad_simplices(SimplicialMap(E, S([(0,)]), {0: 0, 1: 0})) == [(0, 1)]
    tri = S([(0, 1, 2)])
    f = SimplicialMap(tri, E, {0: 0, 1: 0, 2: 1})
    assert find_bad_simplices(f) == [(0, 1, 2), (0, 1)]


@st.composite
def simplicial_maps(draw):
    X = draw(complexes(6, 5))
    m = draw(st.integers(1, 8))
    images = {v: draw(st.integers(0, m - 1)) for v in X.vertices}
    target = S([tuple({images[v] for v in F}) for F in X.facets])
    return SimplicialMap(X, target, images)


@given(simplicial_maps())
def test_injectivity_criteria_agree(f):
    crits = injectivity_criteria(f)
    assert len(set(crits)) == 1
    assert crits[0] == (find_bad_simplices(f) == [])


# --- relative subdivision ---------------------------------------------------


def test_relative_subdivision_examples():
    K = S.simplex([0, 1, 2])
    assert barycentric_subdivide_rel(K, K).complex == K

    seg = barycentric_subdivide_rel(S([(0, 1)]), S([(0,), (1,)]))
    assert seg.complex == S([(0, 2), (1, 2)])
    assert seg.carrier[2] == (0, 1)

    tri = barycentric_subdivide_rel(K, S.boundary_of_simplex(2))
    assert len(tri.complex.faces(2)) == 3
    assert tri.complex.faces(0) == [(0,), (1,), (2,), (3,)]
    assert tri.carrier[3] == (0, 1, 2)
    # the boundary circle is not full in the triangle: the new star meets it in a circle
    assert not tri.star_condition


@given(complexes(5, 4), st.data())
def test_relative_subdivision_keeps_euler_and_subcomplex(K, data):
    verts = data.draw(st.lists(st.sampled_from(K.vertices), unique=True))
    L = full_subcomplex(K, verts)
    sub = barycentric_subdivide_rel(K, L)
    assert sub.complex.reduced_euler_characteristic() == K.reduced_euler_characteristic()
    assert all(sub.complex.is_face(F) for F in L.facets)
    assert sub.star_condition
    # every simplex is carried by a face of K
    for F in sub.complex.facets:
        carried = set().union(*(sub.carrier[v] for v in F))
        assert K.is_face(carried)


# --- semisimplicial sets ---------------------------------------------------------


def test_torus_identities():
    assert torus().identity_violations() == []


def test_bad_face_data_rejected():
    with pytest.raises(ValueError):
        SemiSimplicialSet([1, 1], [[(0, 3)]])
    with pytest.raises(ValueError):
        SemiSimplicialSet([1, 2], [[(0, 0)]])


@given(complexes(5, 4))
def test_ordered_simplices_satisfy_identities_and_split(K):
    Kd = SemiSimplicialSet.from_complex(K)
    assert Kd.identity_violations() == []
    for k in range(K.dim + 1):
        sec, proj = ordered_chain_maps(K, Kd, k)
        n = len(K.faces(k))
        ident = [[sum(proj[i][t] * sec[t][j] for t in range(len(sec))) for j in range(n)] for i in range(n)]
        assert ident == [[int(i == j) for j in range(n)] for i in range(n)]
        if k >= 1:
            # both maps commute with the boundary
            dK, dKd = K.boundary(k), Kd.boundary(k)
            sec_lo, proj_lo = ordered_chain_maps(K, Kd, k - 1)

            def mm(A, B):
                return [[sum(A[i][t] * B[t][j] for t in range(len(B))) for j in range(len(B[0]))] for i in range(len(A))]

            assert mm(dKd, sec) == mm(sec_lo, dK)
            assert mm(dK, proj) == mm(proj_lo, dKd)
