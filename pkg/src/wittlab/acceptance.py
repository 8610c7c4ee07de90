"""The acceptance suite: nine checks run by ``wittlab suite``, plus determinism.

Each check returns a :class:`CriterionResult` whose JSON form carries no
timings, so two runs with the same seed serialize to identical bytes.
"""
from __future__ import annotations

import itertools
import json
import time
from dataclasses import dataclass, field
from importlib import resources
from typing import Callable

import numpy as np

from . import intmat, simplicial
from .homology import DEFAULT_PI1_BUDGET, homology, is_lcm, is_wcm
from .ka import build_ka, cancellation_witness, prop43_connect, are_orthogonal, transitivity_witness, vertex_from_images
from .quadratic import (
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
    is_morphism,
)
from .reduction import (
    Cross,
    FinalComposite,
    HVector,
    Rot,
    Shear,
    Swap,
    Transvection,
    generators,
    kernel_restriction,
    move_matrix,
    orbit_search,
    reduce_to_first_block,
    word_matrix,
)
from .simplicial import SimplicialComplex, link

PROFILES = ("desk",)


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    budget_s: float | None
    details: dict = field(default_factory=dict)
    elapsed_s: float = 0.0

    @property
    def within_budget(self) -> bool:
        return self.budget_s is None or self.elapsed_s <= self.budget_s

    @property
    def ok(self) -> bool:
        return self.passed and self.within_budget

    def to_json(self) -> dict:
        return {
            "criterion": self.number,
            "name": self.name,
            "passed": self.ok,
            "checks_passed": self.passed,
            "within_budget": self.within_budget,
            "budget_s": self.budget_s,
            "details": self.details,
        }


def _rng(seed: int, number: int) -> np.random.Generator:
    return np.random.default_rng([seed, number])


# --- random instances -------------------------------------------------------


def random_isometry(param: FormParameter, g: int, rng: np.random.Generator, length: int = 6):
    """Automorphism of ``H^g`` from a random word over the search generators."""
    gens = generators(g, param)
    word = [gens[int(i)] for i in rng.integers(len(gens), size=length)]
    return word_matrix(word, g, param)


def random_unimodular(r: int, rng: np.random.Generator, steps: int = 4):
    """Product of ``steps`` elementary column operations with coefficient +-1."""
    B = [[int(i == j) for j in range(r)] for i in range(r)]
    if r < 2:
        return intmat.as_matrix(B) if r else ()
    for _ in range(steps):
        i, j = (int(x) for x in rng.choice(r, 2, replace=False))
        c = int(rng.choice([-1, 1]))
        for row in B:
            row[i] += c * row[j]
    return intmat.as_matrix(B)


def _congruent(a: np.ndarray, b: np.ndarray, param: FormParameter) -> np.ndarray:
    return param.reduce_array(a - b) == 0


# --- 1: form axioms ---------------------------------------------------------


def _valid_modules(param: FormParameter, r: int, B: int = 2):
    """Every module of rank ``r`` with Gram entries in ``[-B, B]`` that validates."""
    eps = param.epsilon
    pairs = [(i, j) for i in range(r) for j in range(i + 1, r)]
    diag_vals = [d for d in range(-B, B + 1) if d % 2 == 0] if eps == 1 else [0]
    mus = list(itertools.product((0, 1), repeat=r)) if param.lambda_sub is LambdaSub.EVEN else [None]
    for diag in itertools.product(diag_vals, repeat=r):
        for off in itertools.product(range(-B, B + 1), repeat=len(pairs)):
            G = [[0] * r for _ in range(r)]
            for i in range(r):
                G[i][i] = diag[i]
            for (i, j), x in zip(pairs, off):
                G[i][j], G[j][i] = x, eps * x
            for mu in mus:
                if param.lambda_sub is LambdaSub.ZERO:
                    mu = tuple(d // 2 for d in diag)
                elif mu is None:
                    mu = (0,) * r
                yield QuadraticModule(param, G, mu)


def _count_valid_grams(param: FormParameter, r: int, B: int = 2) -> int:
    """Brute-force count over all of ``[-B, B]^(r*r)``, independent of ``validate``."""
    if r == 0:
        return 1
    vals = np.arange(-B, B + 1)
    grids = np.meshgrid(*([vals] * (r * r)), indexing="ij")
    G = np.stack([g.ravel() for g in grids], axis=1).reshape(-1, r, r)
    ok = (G == param.epsilon * G.transpose(0, 2, 1)).all(axis=(1, 2))
    diag = np.diagonal(G, axis1=1, axis2=2)
    ok &= (diag % 2 == 0).all(axis=1) if param.epsilon == 1 else (diag == 0).all(axis=1)
    n = int(ok.sum())
    return n * (2**r if param.lambda_sub is LambdaSub.EVEN else 1)


def criterion_1(seed: int) -> CriterionResult:
    details: dict = {"modules": {}, "violations": []}
    ok = True
    for param in FORM_PARAMETERS:
        count = 0
        for r in range(4):
            X = np.array(list(itertools.product(range(-2, 3), repeat=r)), dtype=np.int64).reshape(5**r, r)
            S = (X[:, None, :] + X[None, :, :]).reshape(len(X) ** 2, r)
            expected = _count_valid_grams(param, r)
            got = 0
            for M in _valid_modules(param, r):
                got += 1
                if not M.validate():
                    ok = False
                    details["violations"].append(f"{param.label} {M.gram}: enumerated module fails validate")
                    continue
                mu = M.mu_array(X)
                lam = M.lambda_array(X, X)
                checks = {
                    "epsilon_symmetry": bool((lam == param.epsilon * lam.T).all()),
                    "axiom_ii": bool(
                        _congruent(M.mu_array(S).reshape(len(X), len(X)) - mu[:, None] - mu[None, :], lam, param).all()
                    ),
                    "axiom_i": all(bool(_congruent(M.mu_array(a * X), a * a * mu, param).all()) for a in range(-3, 4)),
                }
                if param == SYMMETRIC:
                    checks["lambda_xx"] = bool((np.diagonal(lam) == 2 * mu).all())
                stride = max(1, len(X) // 7)
                checks["scalar_agrees"] = all(
                    M.eval_mu(tuple(int(t) for t in x)) == int(param.reduce(int(m)))
                    for x, m in zip(X[::stride], mu[::stride])
                )
                for name, good in checks.items():
                    if not good:
                        ok = False
                        details["violations"].append(f"{param.label} {M.gram} {M.mu}: {name}")
            if got != expected:
                ok = False
                details["violations"].append(f"{param.label} rank {r}: enumerated {got}, brute force {expected}")
            count += got
        details["modules"][param.label] = count
    details["violations"] = details["violations"][:10]
    return CriterionResult(1, "form axioms", ok, 60.0, details)


# --- 2: move soundness ------------------------------------------------------


def move_instances(n_blocks: int, param: FormParameter, k_range=range(-2, 3)):
    moves = []
    for i in range(n_blocks):
        moves += [Rot(i, 1), Rot(i, -1)]
        if param.epsilon == -1:
            moves += [Shear(i, 1), Shear(i, -1)]
    for i, j in itertools.permutations(range(n_blocks), 2):
        moves += [Cross(i, j, 1), Cross(i, j, -1)]
        moves += [Transvection(i, j, k) for k in k_range if k]
        moves += [FinalComposite(i, j, k) for k in k_range]
        if i < j:
            moves.append(Swap(i, j))
    return moves


def criterion_2(seed: int) -> CriterionResult:
    ok = True
    count = 0
    bad = []
    for param in (SKEW_EVEN, SKEW_ALL):
        for g in range(1, 5):
            H = QuadraticModule.hyperbolic(param, g)
            for m in move_instances(g, param):
                count += 1
                A = move_matrix(m, g, param)
                Ainv = move_matrix(m.inverse(param.epsilon), g, param)
                good = (
                    abs(intmat.det(A)) == 1
                    and is_morphism(A, H, H)
                    and intmat.matmul(A, Ainv) == intmat.identity(2 * g)
                )
                if not good:
                    ok = False
                    bad.append(f"{param.label} g={g} {m.to_json()}")
    return CriterionResult(2, "move soundness", ok, 10.0, {"move_instances": count, "failures": bad[:10]})


# --- 3: reduction of unimodular vectors ---------------------------------------


def criterion_3(seed: int) -> CriterionResult:
    rng = _rng(seed, 3)
    ok = True
    details: dict = {}
    for param in (SKEW_EVEN, SKEW_ALL):
        vecs = [v for v in itertools.product(range(-3, 4), repeat=4) if intmat.content(v) == 1]
        results = []
        failures = 0
        max_len = 0
        for v in vecs:
            word, res = reduce_to_first_block(HVector(param, v))
            replay = intmat.matvec(word_matrix(word, 2, param), v)
            if replay != res.coords or any(res.coords[2:]):
                failures += 1
            results.append(res)
            max_len = max(max_len, len(word))
        sample = rng.choice(len(vecs), size=100, replace=False)
        oracle_fail = 0
        for i in sorted(int(s) for s in sample):
            w = orbit_search(HVector(param, vecs[i]), results[i], 12)
            if w is None or intmat.matvec(word_matrix(w, 2, param), vecs[i]) != results[i].coords:
                oracle_fail += 1
        ok &= failures == 0 and oracle_fail == 0
        details[param.label] = {
            "vectors": len(vecs),
            "failures": failures,
            "max_word_length": max_len,
            "oracle_sample": 100,
            "oracle_failures": oracle_fail,
        }
    return CriterionResult(3, "unimodular reduction", ok, 300.0, details)


# --- 4: kernel restriction ----------------------------------------------------


def criterion_4(seed: int) -> CriterionResult:
    rng = _rng(seed, 4)
    ok = True
    counts = {"instances": 0, "failures": 0, "zero_functionals": 0}
    for k in range(50):
        g = 2 if k < 25 else 3
        param = (SKEW_EVEN, SKEW_ALL)[k % 2]
        M = QuadraticModule.hyperbolic(param, g)
        phi = QModMorphism(M, M, random_isometry(param, g, rng))
        ell = tuple(int(x) for x in rng.integers(-3, 4, size=2 * g))
        counts["instances"] += 1
        counts["zero_functionals"] += not any(ell)
        try:
            res = kernel_restriction(phi, ell)
        except (ArithmeticError, LookupError, ValueError):
            counts["failures"] += 1
            ok = False
            continue
        cols = intmat.columns(res.ambient)
        Hg1 = QuadraticModule.hyperbolic(param, g - 1)
        good = (
            res.morphism.is_valid()
            and len(cols) == 2 * (g - 1)
            and all(sum(a * b for a, b in zip(ell, c)) == 0 for c in cols)
            and all(M.eval_lambda(u, v) == Hg1.gram[i][j] for i, u in enumerate(cols) for j, v in enumerate(cols))
            and all(M.eval_mu(u) == 0 for u in cols)
        )
        if not good:
            counts["failures"] += 1
            ok = False
    return CriterionResult(4, "kernel restriction", ok, 120.0, counts)


# --- 5: homology golden set ---------------------------------------------------


def _build_named(spec: str):
    name, _, arg = spec.partition(":")
    if name == "boundary_of_simplex":
        return SimplicialComplex.boundary_of_simplex(int(arg))
    if name == "real_projective_plane":
        return simplicial.real_projective_plane()
    if name == "torus":
        return simplicial.torus()
    raise ValueError(f"unknown complex {spec!r}")


def load_golden(path: str | None = None) -> dict:
    if path is None:
        text = resources.files("wittlab").joinpath("data/golden_homology.json").read_text(encoding="utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return json.loads(text)


def criterion_5(seed: int, golden_path: str | None = None) -> CriterionResult:
    details: dict = {}
    try:
        golden = load_golden(golden_path)
        entries = golden["complexes"]
    except (OSError, ValueError, KeyError, TypeError) as exc:
        return CriterionResult(5, "homology golden set", False, 10.0, {"error": f"golden file unreadable: {exc}"})
    ok = bool(entries)
    for entry in entries:
        try:
            X = _build_named(entry["build"])
            got = homology(X, int(entry["max_degree"])).to_json()
        except (KeyError, ValueError, TypeError) as exc:
            details[str(entry.get("name", "?"))] = f"error: {exc}"
            ok = False
            continue
        expected = [
            {"degree": int(g["degree"]), "betti": int(g["betti"]), "torsion": [str(t) for t in g["torsion"]]}
            for g in entry["groups"]
        ]
        match = got == expected
        ok &= match
        details[entry["name"]] = {"match": match, "computed": got}
    return CriterionResult(5, "homology golden set", ok, 10.0, details)


# --- 6: Cohen-Macaulay ----------------------------------------------------------


def random_flag_complex(rng: np.random.Generator, max_vertices: int = 10) -> SimplicialComplex:
    n = int(rng.integers(3, max_vertices + 1))
    p = float(rng.uniform(0.45, 0.95))
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return SimplicialComplex.flag(range(n), edges)


def criterion_6(seed: int, pi1_budget: int = DEFAULT_PI1_BUDGET) -> CriterionResult:
    rng = _rng(seed, 6)
    sphere_ok = bool(is_wcm(SimplicialComplex.boundary_of_simplex(3), 2, pi1_budget))
    lcm_passes = 0
    links_checked = 0
    violations = []
    for t in range(200):
        X = random_flag_complex(rng)
        n = int(rng.integers(1, 4))
        if not is_lcm(X, n, pi1_budget):
            continue
        lcm_passes += 1
        for s in X.all_faces():
            if not s:
                continue
            links_checked += 1
            p = len(s) - 1
            if not is_wcm(link(X, s), n - p - 1, pi1_budget):
                violations.append({"instance": t, "n": n, "face": list(s)})
    ok = sphere_ok and not violations and lcm_passes > 0
    details = {
        "wcm_boundary_tetrahedron": sphere_ok,
        "complexes": 200,
        "lcm_passes": lcm_passes,
        "links_checked": links_checked,
        "violations": violations[:10],
    }
    return CriterionResult(6, "Cohen-Macaulay", ok, 180.0, details)


# --- 7: K^a structure -----------------------------------------------------------


def criterion_7(seed: int) -> CriterionResult:
    rng = _rng(seed, 7)
    details: dict = {}
    K1 = build_ka(QuadraticModule.hyperbolic(SYMMETRIC, 1), 1)
    details["H_sym_bound1"] = {"vertices": len(K1), "edges": len(K1.edges())}
    ok = len(K1) == 4 and not K1.edges()
    nonempty = {}
    for param in FORM_PARAMETERS:
        n = len(build_ka(QuadraticModule.hyperbolic(param, 2), 1))
        nonempty[param.label] = n
        ok &= n > 0
    details["H2_bound1_vertices"] = nonempty
    M4 = QuadraticModule.hyperbolic(SKEW_EVEN, 4)
    K4 = build_ka(M4, 1)
    comps = K4.components()
    ok &= comps == 1
    statuses: dict[str, int] = {}
    inside = 0
    bad_paths = 0
    for a, b in [(int(rng.integers(len(K4))), int(rng.integers(len(K4)))) for _ in range(20)]:
        h, h0 = K4.vertex(a), K4.vertex(b)
        res = prop43_connect(M4, h, h0, 1)
        statuses[res.status] = statuses.get(res.status, 0) + 1
        path = res.path
        good = (
            res.found
            and len(path) - 1 <= 2
            and path[0].matrix == h.matrix
            and path[-1].matrix == h0.matrix
            and all(v.morphism.is_valid() for v in path)
            and all(are_orthogonal(M4, u, v) for u, v in zip(path, path[1:]))
        )
        bad_paths += not good
        inside += bool(res.middle_within_bound)
    ok &= bad_paths == 0
    details["H4_even_bound1"] = {
        "vertices": len(K4),
        "components": comps,
        "pairs": 20,
        "statuses": dict(sorted(statuses.items())),
        "bad_paths": bad_paths,
        "middle_within_bound": inside,
    }
    return CriterionResult(7, "K^a structure", ok, 300.0, details)


# --- 8: transitivity and cancellation ---------------------------------------------


def cancellation_instance(param: FormParameter, rng: np.random.Generator):
    """``(M, N, phi)`` with ``M = H^2``, ``N`` a base change of ``M`` and ``phi: M + H -> N + H``."""
    M = QuadraticModule.hyperbolic(param, 2)
    B = random_unimodular(4, rng)
    N = M.pullback(B)  # B: N -> M is an isomorphism
    A = random_isometry(param, 3, rng)
    phi = intmat.matmul(intmat.block_diag(intmat.inverse(B), intmat.identity(2)), A)
    return M, N, phi, A


def criterion_8(seed: int) -> CriterionResult:
    rng = _rng(seed, 8)
    ok = True
    stats = {"instances": 25, "transitivity_found": 0, "cancellation_found": 0, "cancellation_bound2": 0}
    failures = []
    for t in range(25):
        param = FORM_PARAMETERS[t % 3]
        M, N, phi, A = cancellation_instance(param, rng)
        H3 = QuadraticModule.hyperbolic(param, 3)
        h0 = vertex_from_images(H3, [1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0])
        h1 = vertex_from_images(H3, [r[0] for r in A], [r[1] for r in A])
        w = transitivity_witness(H3, h0, h1, 1)
        if (
            w is not None
            and intmat.matmul(w.automorphism, h0.matrix) == h1.matrix
            and is_morphism(w.automorphism, H3, H3)
            and intmat.is_unimodular(w.automorphism)
        ):
            stats["transitivity_found"] += 1
        else:
            ok = False
            failures.append({"instance": t, "step": "transitivity"})
        c = cancellation_witness(M, N, phi, 1)
        if c is None:
            c = cancellation_witness(M, N, phi, 2)
            stats["cancellation_bound2"] += c is not None
        good = (
            c is not None
            and c.isomorphism.is_valid()
            and c.inverse.is_valid()
            and intmat.matmul(c.isomorphism.matrix, c.inverse.matrix) == intmat.identity(N.rank)
            and intmat.matmul(c.inverse.matrix, c.isomorphism.matrix) == intmat.identity(M.rank)
        )
        if good:
            stats["cancellation_found"] += 1
        else:
            ok = False
            failures.append({"instance": t, "step": "cancellation"})
    stats["failures"] = failures[:10]
    return CriterionResult(8, "transitivity and cancellation", ok, 300.0, stats)


# --- 9: Arf invariant -------------------------------------------------------------


def _arf_universe() -> dict[int, list[QuadraticModule]]:
    """Skew-even modules of rank <= 4, Gram entries in [-1, 1], odd determinant."""
    out: dict[int, list[QuadraticModule]] = {0: [QuadraticModule.zero(SKEW_EVEN)]}
    for r in (2, 4):
        pairs = [(i, j) for i in range(r) for j in range(i + 1, r)]
        mods = []
        for off in itertools.product((-1, 0, 1), repeat=len(pairs)):
            G = [[0] * r for _ in range(r)]
            for (i, j), x in zip(pairs, off):
                G[i][j], G[j][i] = x, -x
            if intmat.det(G) % 2 == 0:
                continue
            for mu in itertools.product((0, 1), repeat=r):
                mods.append(QuadraticModule(SKEW_EVEN, G, mu))
        out[r] = mods
    return out


def criterion_9(seed: int) -> CriterionResult:
    rng = _rng(seed, 9)
    hyperbolic = {g: arf_invariant(QuadraticModule.hyperbolic(SKEW_EVEN, g)) for g in range(1, 6)}
    ok = all(v == 0 for v in hyperbolic.values())
    U = _arf_universe()
    arf = {id(M): arf_invariant(M) for mods in U.values() for M in mods}
    pairs = 0
    add_fail = 0
    for ra, rb in [(0, 0), (0, 2), (2, 0), (0, 4), (4, 0), (2, 2)]:
        for A in U[ra]:
            for B in U[rb]:
                pairs += 1
                if arf_invariant(direct_sum(A, B)) != arf[id(A)] ^ arf[id(B)]:
                    add_fail += 1
    ok &= add_fail == 0
    forms = U[2] + [U[4][int(i)] for i in rng.choice(len(U[4]), size=8, replace=False)]
    inv_fail = 0
    for M in forms:
        for _ in range(100):
            B = random_unimodular(M.rank, rng, steps=5)
            if arf_invariant(M.pullback(B)) != arf[id(M)]:
                inv_fail += 1
    ok &= inv_fail == 0
    details = {
        "hyperbolic": {str(g): v for g, v in hyperbolic.items()},
        "additivity_pairs": pairs,
        "additivity_failures": add_fail,
        "invariance_forms": len(forms),
        "invariance_trials": 100 * len(forms),
        "invariance_failures": inv_fail,
        "arf_one_count_rank2": sum(arf[id(M)] for M in U[2]),
    }
    return CriterionResult(9, "Arf invariant", ok, 60.0, details)


# --- the suite --------------------------------------------------------------------


CRITERIA: dict[int, Callable[..., CriterionResult]] = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
}


def run_criterion(number: int, seed: int = 0, golden_path: str | None = None, pi1_budget: int = DEFAULT_PI1_BUDGET):
    fn = CRITERIA[number]
    start = time.perf_counter()
    if number == 5:
        res = fn(seed, golden_path)
    elif number == 6:
        res = fn(seed, pi1_budget)
    else:
        res = fn(seed)
    res.elapsed_s = time.perf_counter() - start
    return res


def run_suite(
    seed: int = 0,
    golden_path: str | None = None,
    pi1_budget: int = DEFAULT_PI1_BUDGET,
    only: list[int] | None = None,
    progress: Callable[[CriterionResult], None] | None = None,
) -> list[CriterionResult]:
    results = []
    for n in only or sorted(CRITERIA):
        res = run_criterion(n, seed, golden_path, pi1_budget)
        if progress:
            progress(res)
        results.append(res)
    return results


def report_json(results: list[CriterionResult], seed: int, profile: str = "desk") -> dict:
    return {
        "profile": profile,
        "seed": seed,
        "criteria": [r.to_json() for r in results],
        "passed": all(r.ok for r in results),
    }
