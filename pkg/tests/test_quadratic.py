import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy import Matrix

from oracles import arf_by_symplectic_basis, brute_hyperbolic_vertices, lam, mu_by_axioms, sym_det
from wittlab import intmat
from wittlab.quadratic import (
    FORM_PARAMETERS,
    SKEW_ALL,
    SKEW_EVEN,
    SYMMETRIC,
    FormParameter,
    LambdaSub,
    QModMorphism,
    QuadraticModule,
    arf_invariant,
    direct_sum,
    enumerate_hyperbolic_morphisms,
    is_isomorphic_bounded,
    is_morphism,
    orthogonal_complement,
    stable_witt_lower_bound,
    witt_index_lower_bound,
    witt_index_upper_bound,
)

MODULUS = {LambdaSub.ZERO: 0, LambdaSub.EVEN: 2, LambdaSub.ALL: 1}


def H(param, g=1):
    return QuadraticModule.hyperbolic(param, g)


@st.composite
def modules(draw, param=None, max_rank=4, entry=2):
    param = param or draw(st.sampled_from(FORM_PARAMETERS))
    r = draw(st.integers(0, max_rank))
    G = [[0] * r for _ in range(r)]
    mu = [0] * r
    for i in range(r):
        for j in range(i + 1, r):
            a = draw(st.integers(-entry, entry))
            G[i][j], G[j][i] = a, param.epsilon * a
        if param is SYMMETRIC:
            mu[i] = draw(st.integers(-entry, entry))
            G[i][i] = 2 * mu[i]
        elif param is SKEW_EVEN:
            mu[i] = draw(st.integers(0, 1))
    return QuadraticModule(param, G, mu)


def vectors(n, bound=3):
    return st.lists(st.integers(-bound, bound), min_size=n, max_size=n)


# --- form parameters -------------------------------------------------------


def test_only_three_parameters_constructible():
    for eps in (1, -1):
        for sub in LambdaSub:
            ok = (eps, sub) in {(1, LambdaSub.ZERO), (-1, LambdaSub.EVEN), (-1, LambdaSub.ALL)}
            if ok:
                assert FormParameter(eps, sub).check_containment()
            else:
                with pytest.raises(ValueError):
                    FormParameter(eps, sub)


def test_quotient_arithmetic():
    assert SKEW_EVEN.reduce(5) == 1
    assert SKEW_ALL.reduce(5) == 0
    assert SYMMETRIC.reduce(-5) == -5


# --- evaluation -----------------------------------------------------------


def test_lambda_examples():
    M = H(SKEW_EVEN)
    assert M.eval_lambda((1, 0), (0, 1)) == 1
    assert M.eval_lambda((0, 1), (1, 0)) == -1
    H2 = H(SYMMETRIC, 2)
    assert H2.eval_lambda((1, 0, 0, 1), (0, 1, 1, 0)) == 2


def test_mu_examples():
    for p in FORM_PARAMETERS:
        assert H(p).eval_mu((1, 0)) == 0
    assert H(SYMMETRIC).eval_mu((1, 1)) == 1
    assert H(SKEW_EVEN).eval_mu((2, 1)) == 0


@given(modules(), st.data())
def test_mu_closed_form_matches_axiom_recursion(M, data):
    x = data.draw(vectors(M.rank))
    assert M.eval_mu(x) == mu_by_axioms(M.gram, M.mu, x, MODULUS[M.param.lambda_sub])


@given(modules(), st.data())
def test_axioms_hold(M, data):
    x = data.draw(vectors(M.rank, 2))
    y = data.draw(vectors(M.rank, 2))
    a = data.draw(st.integers(-3, 3))
    red = M.param.reduce
    s = tuple(u + v for u, v in zip(x, y))
    assert red(M.eval_mu(s) - M.eval_mu(x) - M.eval_mu(y) - M.eval_lambda(x, y)) == 0
    assert M.eval_mu(tuple(a * u for u in x)) == red(a * a * M.eval_mu(x))
    assert M.eval_lambda(x, y) == M.param.epsilon * M.eval_lambda(y, x)
    if M.param is SYMMETRIC:
        assert M.eval_lambda(x, x) == 2 * M.eval_mu(x)
    if M.param.epsilon == -1:
        assert M.eval_lambda(x, x) == 0


# --- validation and morphisms ----------------------------------------------


def test_validate_examples():
    for p in FORM_PARAMETERS:
        for g in range(4):
            assert H(p, g).validate()
    bad = QuadraticModule(SYMMETRIC, [[1, 0], [0, -1]], [0, 0])
    res = bad.validate()
    assert not res and res.invariant == "lambda_xx_equals_2mu"
    res = QuadraticModule(SKEW_EVEN, [[0, 1], [1, 0]]).validate()
    assert not res and res.invariant == "epsilon_symmetry"
    # degenerate forms are allowed
    assert QuadraticModule(SKEW_ALL, [[0, 0], [0, 0]]).validate()


@given(modules())
def test_generated_modules_validate(M):
    assert M.validate()


def test_morphism_examples():
    assert is_morphism(((1, 0), (0, 1)), H(SYMMETRIC), H(SYMMETRIC))
    assert not is_morphism(((1, 1), (0, 1)), H(SYMMETRIC), H(SYMMETRIC))
    assert is_morphism(((1, 2), (0, 1)), H(SKEW_EVEN), H(SKEW_EVEN))


def test_direct_sum_examples():
    assert direct_sum(H(SKEW_EVEN), H(SKEW_EVEN)) == H(SKEW_EVEN, 2)
    M = H(SYMMETRIC)
    assert direct_sum(M, QuadraticModule.zero(SYMMETRIC)) == M
    A = QuadraticModule(SYMMETRIC, [[2]], [1])
    B = QuadraticModule(SYMMETRIC, [[-2]], [-1])
    assert direct_sum(A, B).gram == ((2, 0), (0, -2))
    with pytest.raises(ValueError):
        direct_sum(A, H(SKEW_ALL))


# --- complements -----------------------------------------------------------


def _certificate_holds(f, comp):
    P = comp.change_of_basis
    if abs(sym_det(P)) != 1:
        return False
    N = f.target
    cols = intmat.columns(P)
    k = f.source.rank
    for i, u in enumerate(cols):
        for j, v in enumerate(cols):
            want = f.source.gram[i][j] if i < k and j < k else (comp.module.gram[i - k][j - k] if i >= k and j >= k else 0)
            if lam(N.gram, u, v) != want:
                return False
    return True


def test_complement_examples():
    p = SKEW_EVEN
    f = QModMorphism(H(p), H(p, 2), ((1, 0), (0, 1), (0, 0), (0, 0)))
    comp = orthogonal_complement(f)
    assert comp.module.rank == 2 and comp.module.gram == ((0, 1), (-1, 0))
    assert _certificate_holds(f, comp)

    ident = QModMorphism(H(p), H(p), ((1, 0), (0, 1)))
    assert orthogonal_complement(ident).module.rank == 0

    f = QModMorphism(H(p), H(p, 2), ((1, 0), (0, 1), (0, 1), (0, 0)))
    comp = orthogonal_complement(f)
    assert comp.module.gram == ((0, 1), (-1, 0))
    assert _certificate_holds(f, comp)


def test_complement_needs_nondegenerate_source():
    p = SKEW_ALL
    Z = QuadraticModule(p, [[0, 0], [0, 0]])
    with pytest.raises(ValueError):
        orthogonal_complement(QModMorphism(Z, H(p), ((1, 0), (0, 1))))


@pytest.mark.parametrize("param", FORM_PARAMETERS)
def test_complement_of_every_bounded_vertex_in_h2(param):
    M = H(param, 2)
    for f in enumerate_hyperbolic_morphisms(M, 1, 1):
        comp = orthogonal_complement(f)
        assert _certificate_holds(f, comp)
        assert comp.module.is_nondegenerate()


# --- bounded enumeration and Witt indices ------------------------------------


def test_enumeration_examples():
    mors = enumerate_hyperbolic_morphisms(H(SYMMETRIC), 1, 1)
    assert sorted(m.matrix for m in mors) == sorted(
        [((1, 0), (0, 1)), ((-1, 0), (0, -1)), ((0, 1), (1, 0)), ((0, -1), (-1, 0))]
    )
    assert enumerate_hyperbolic_morphisms(QuadraticModule.zero(SKEW_EVEN), 1, 3) == []
    ident = intmat.identity(4)
    assert any(m.matrix == ident for m in enumerate_hyperbolic_morphisms(H(SKEW_EVEN, 2), 2, 1))


@pytest.mark.parametrize("param", FORM_PARAMETERS)
@pytest.mark.parametrize("M_name", ["H", "H2", "odd"])
def test_enumeration_matches_brute_force(param, M_name):
    if M_name == "H":
        M = H(param)
    elif M_name == "H2":
        M = H(param, 2)
    else:
        g = [[0, 1, 1], [param.epsilon, 0, 0], [param.epsilon, 0, 0]]
        mu = [1, 0, 0] if param is not SYMMETRIC else [0, 0, 0]
        M = QuadraticModule(param, g, mu)
    bound = 1
    fast = [(m.image(0), m.image(1)) for m in enumerate_hyperbolic_morphisms(M, 1, bound)]
    slow = brute_hyperbolic_vertices(M.gram, M.mu, param.epsilon, MODULUS[param.lambda_sub], bound)
    assert fast == sorted(slow)


@given(modules(max_rank=4))
def test_every_enumerated_element_is_a_morphism(M):
    for m in enumerate_hyperbolic_morphisms(M, 1, 1):
        assert m.is_valid()


def test_witt_examples():
    g, w = witt_index_lower_bound(H(SKEW_EVEN, 3), 1)
    assert g == 3 and w.is_valid()
    assert witt_index_lower_bound(QuadraticModule(SKEW_ALL, [[0, 0], [0, 0]]), 2)[0] == 0
    D = QuadraticModule(SYMMETRIC, [[2, 0], [0, -2]], [1, -1])
    assert witt_index_lower_bound(D, 3)[0] == 0
    assert stable_witt_lower_bound(H(SKEW_EVEN, 2), 1, 1) == 2
    assert stable_witt_lower_bound(QuadraticModule.zero(SKEW_EVEN), 2, 1) == 0
    assert stable_witt_lower_bound(D, 1, 2) >= 0


def test_no_hyperbolic_pair_in_even_symmetric_example():
    # lambda(x, y) on diag(2, -2) is always even, so lambda(x, y) = 1 never happens
    D = QuadraticModule(SYMMETRIC, [[2, 0], [0, -2]], [1, -1])
    for x in itertools.product(range(-3, 4), repeat=2):
        for y in itertools.product(range(-3, 4), repeat=2):
            assert D.eval_lambda(x, y) % 2 == 0


@pytest.mark.parametrize(
    "M",
    [
        QuadraticModule.zero(SKEW_EVEN),
        QuadraticModule(SKEW_EVEN, [[0, 1], [-1, 0]], [1, 1]),
        QuadraticModule(SYMMETRIC, [[2, 1], [1, 2]], [1, 1]),
        QuadraticModule(SKEW_ALL, [[0, 2], [-2, 0]]),
    ],
    ids=["zero", "arf1", "a2", "degenerate"],
)
def test_stable_witt_grows_under_stabilization(M):
    for k in (0, 1):
        assert stable_witt_lower_bound(direct_sum(M, H(M.param)), k, 1) >= stable_witt_lower_bound(M, k, 1) + 1


@given(modules(max_rank=4, entry=1))
def test_witt_upper_bound_dominates_search(M):
    assert witt_index_lower_bound(M, 1)[0] <= witt_index_upper_bound(M) <= M.rank // 2


def test_witt_upper_bound_examples():
    assert witt_index_upper_bound(H(SKEW_EVEN, 3)) == 3
    A2 = QuadraticModule(SYMMETRIC, [[2, 1], [1, 2]], [1, 1])
    assert witt_index_upper_bound(direct_sum(A2, H(SYMMETRIC, 2))) == 2
    arf1 = QuadraticModule(SKEW_EVEN, [[0, 1], [-1, 0]], [1, 1])
    assert witt_index_upper_bound(direct_sum(arf1, H(SKEW_EVEN, 2))) == 2
    assert witt_index_upper_bound(QuadraticModule(SKEW_ALL, [[0, 2], [-2, 0]])) == 0


def _sign_changes(coeffs):
    signs = [c > 0 for c in coeffs if c != 0]
    return sum(a != b for a, b in zip(signs, signs[1:]))


@given(modules(SYMMETRIC, max_rank=5, entry=3))
def test_inertia_matches_descartes_count(M):
    # the characteristic polynomial of a symmetric matrix is real-rooted, so
    # Descartes' rule of signs counts positive and negative eigenvalues exactly
    n = M.rank
    if n == 0:
        assert intmat.inertia(M.gram) == (0, 0, 0)
        return
    coeffs = [int(c) for c in Matrix([list(r) for r in M.gram]).charpoly().all_coeffs()]
    zero = 0
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
        zero += 1
    pos = _sign_changes(coeffs)
    neg = _sign_changes([c * (-1) ** (len(coeffs) - 1 - i) for i, c in enumerate(coeffs)])
    assert intmat.inertia(M.gram) == (pos, neg, zero)


def _odd_minor_exists(G, k):
    n = len(G)
    return any(
        sym_det([[G[i][j] for j in cols] for i in rows]) % 2
        for rows in itertools.combinations(range(n), k)
        for cols in itertools.combinations(range(n), k)
    )


@given(modules(max_rank=4, entry=3))
def test_rank_mod_two_is_largest_odd_minor(M):
    # rank over GF(2) is the size of the largest minor with odd determinant
    r2 = intmat.rank_mod(M.gram, 2)
    assert r2 == 0 or _odd_minor_exists(M.gram, r2)
    assert r2 == M.rank or not _odd_minor_exists(M.gram, r2 + 1)


# --- Arf -----------------------------------------------------------------


def test_arf_examples():
    assert arf_invariant(H(SKEW_EVEN)) == 0
    assert arf_invariant(QuadraticModule(SKEW_EVEN, [[0, 1], [-1, 0]], [1, 1])) == 1
    assert arf_invariant(H(SKEW_EVEN, 2)) == 0
    with pytest.raises(ValueError):
        arf_invariant(H(SYMMETRIC))
    with pytest.raises(ValueError):
        arf_invariant(QuadraticModule(SKEW_EVEN, [[0, 2], [-2, 0]]))


@st.composite
def nonsingular_even(draw, max_half=3):
    """Planes with odd pairing and arbitrary mu bits, in a random basis."""
    half = draw(st.integers(0, max_half))
    r = 2 * half
    G = [[0] * r for _ in range(r)]
    mu = [draw(st.integers(0, 1)) for _ in range(r)]
    for i in range(half):
        a = draw(st.sampled_from([1, -1, 3, -3]))
        G[2 * i][2 * i + 1], G[2 * i + 1][2 * i] = a, -a
    B = [[int(i == j) for j in range(r)] for i in range(r)]
    for _ in range(draw(st.integers(0, 4)) if r > 1 else 0):
        i, j = draw(st.integers(0, r - 1)), draw(st.integers(0, r - 1))
        if i != j:
            c = draw(st.integers(-2, 2))
            for row in B:
                row[j] += c * row[i]
    return QuadraticModule(SKEW_EVEN, G, mu).pullback(B)


@given(nonsingular_even())
def test_arf_matches_symplectic_basis(M):
    assert arf_invariant(M) == arf_by_symplectic_basis(M.gram, M.mu)


@given(nonsingular_even(2), nonsingular_even(2))
def test_arf_additive(M, N):
    assert arf_invariant(direct_sum(M, N)) == arf_invariant(M) ^ arf_invariant(N)


# --- isomorphism search -----------------------------------------------------


def test_isomorphism_examples():
    p = SKEW_EVEN
    w = is_isomorphic_bounded(H(p), H(p), 1)
    assert w is not None and w.matrix == ((1, 0), (0, 1))
    assert is_isomorphic_bounded(H(p), QuadraticModule(p, [[0, 0], [0, 0]]), 2) is None
    B = ((1, 2), (0, 1))
    N = H(p).pullback(B)
    w = is_isomorphic_bounded(H(p), N, 2)
    assert w is not None and w.is_valid() and abs(sym_det(w.matrix)) == 1
