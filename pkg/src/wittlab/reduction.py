"""Orbits of vectors in ``H^{n+1}`` under elementary automorphisms.

Coordinates are ``(a_0, b_0, ..., a_n, b_n)`` with respect to the standard
hyperbolic basis ``(e_0, f_0, ..., e_n, f_n)``. Every move below is a linear
automorphism of ``H^{n+1}``; a word of moves is applied left to right.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Sequence, Union

from . import intmat
from .intmat import Matrix, Vector
from .quadratic import (
    FormParameter,
    QModMorphism,
    QuadraticModule,
    kernel_submodule,
)


@dataclass(frozen=True)
class HVector:
    param: FormParameter
    coords: Vector

    def __post_init__(self):
        c = intmat.as_vector(self.coords)
        if not c or len(c) % 2:
            raise ValueError("an H-vector needs a positive even number of coordinates")
        object.__setattr__(self, "coords", c)

    @property
    def blocks(self) -> int:
        return len(self.coords) // 2

    def block(self, i: int) -> tuple[int, int]:
        return self.coords[2 * i], self.coords[2 * i + 1]

    def is_unimodular(self) -> bool:
        return intmat.content(self.coords) == 1

    def replace(self, coords: Sequence[int]) -> HVector:
        return HVector(self.param, tuple(coords))


# --- moves ----------------------------------------------------------------


@dataclass(frozen=True)
class Rot:
    """``(a, b) -> sign * (b, eps a)`` on one block."""

    block: int
    sign: int = 1

    def blocks_used(self):
        return (self.block,)

    def act(self, c: list[int], eps: int) -> None:
        i = 2 * self.block
        a, b = c[i], c[i + 1]
        c[i], c[i + 1] = self.sign * b, self.sign * eps * a

    def inverse(self, eps: int) -> "Move":
        return Rot(self.block, self.sign * eps)

    def to_json(self) -> dict:
        return {"move": "rot", "block": self.block, "sign": self.sign}


@dataclass(frozen=True)
class Shear:
    """``(a, b) -> (a - 2 sign b, b)``; an automorphism only when ``eps = -1``."""

    block: int
    sign: int = 1

    def blocks_used(self):
        return (self.block,)

    def act(self, c: list[int], eps: int) -> None:
        if eps != -1:
            raise ValueError("the shear (a, b) -> (a - 2b, b) is not an isometry for eps = +1")
        i = 2 * self.block
        c[i] -= 2 * self.sign * c[i + 1]

    def inverse(self, eps: int) -> "Move":
        return Shear(self.block, -self.sign)

    def to_json(self) -> dict:
        return {"move": "shear", "block": self.block, "sign": self.sign}


@dataclass(frozen=True)
class Cross:
    """``(a, b, c, d) -> (a, b + s c, c, d - eps s a)`` on blocks ``i``, ``j``.

    For ``eps = -1`` and ``s = 1`` this is ``(a, b + c, c, d + a)``.
    """

    i: int
    j: int
    sign: int = 1

    def blocks_used(self):
        return (self.i, self.j)

    def act(self, c: list[int], eps: int) -> None:
        p, q = 2 * self.i, 2 * self.j
        a, cc = c[p], c[q]
        c[p + 1] += self.sign * cc
        c[q + 1] -= eps * self.sign * a

    def inverse(self, eps: int) -> "Move":
        return Cross(self.i, self.j, -self.sign)

    def to_json(self) -> dict:
        return {"move": "cross", "blocks": [self.i, self.j], "sign": self.sign}


@dataclass(frozen=True)
class Transvection:
    """``(a, b, c, d) -> (a, b + k d, c - k a, d)`` on blocks ``i``, ``j``."""

    i: int
    j: int
    k: int = 1

    def blocks_used(self):
        return (self.i, self.j)

    def act(self, c: list[int], eps: int) -> None:
        p, q = 2 * self.i, 2 * self.j
        a, d = c[p], c[q + 1]
        c[p + 1] += self.k * d
        c[q] -= self.k * a

    def inverse(self, eps: int) -> "Move":
        return Transvection(self.i, self.j, -self.k)

    def to_json(self) -> dict:
        return {"move": "transvection", "blocks": [self.i, self.j], "k": self.k}


@dataclass(frozen=True)
class FinalComposite:
    """Three-step move clearing block ``j`` once both blocks read ``(1, *)``.

    ``(a,b,c,d) -> (a,b+d,c-a,d) -> (a,b+d,d,a-c) -> (a,(b+d)+k(a-c),d-ka,a-c)``;
    the last step is linear once the multiplier ``k`` (the value of ``d``
    when the move is chosen) is fixed.
    """

    i: int
    j: int
    k: int

    def blocks_used(self):
        return (self.i, self.j)

    def steps(self) -> tuple["Move", ...]:
        return (Transvection(self.i, self.j, 1), Rot(self.j, 1), Transvection(self.i, self.j, self.k))

    def act(self, c: list[int], eps: int) -> None:
        for m in self.steps():
            m.act(c, eps)

    def inverse(self, eps: int) -> "Move":
        return _Word(tuple(m.inverse(eps) for m in reversed(self.steps())))

    def to_json(self) -> dict:
        return {"move": "final", "blocks": [self.i, self.j], "k": self.k}


@dataclass(frozen=True)
class Swap:
    i: int
    j: int

    def blocks_used(self):
        return (self.i, self.j)

    def act(self, c: list[int], eps: int) -> None:
        p, q = 2 * self.i, 2 * self.j
        c[p], c[p + 1], c[q], c[q + 1] = c[q], c[q + 1], c[p], c[p + 1]

    def inverse(self, eps: int) -> "Move":
        return self

    def to_json(self) -> dict:
        return {"move": "swap", "blocks": [self.i, self.j]}


@dataclass(frozen=True)
class _Word:
    moves: tuple

    def blocks_used(self):
        return tuple(b for m in self.moves for b in m.blocks_used())

    def act(self, c: list[int], eps: int) -> None:
        for m in self.moves:
            m.act(c, eps)

    def inverse(self, eps: int):
        return _Word(tuple(m.inverse(eps) for m in reversed(self.moves)))

    def to_json(self) -> dict:
        return {"move": "word", "moves": [m.to_json() for m in self.moves]}


Move = Union[Rot, Shear, Cross, Transvection, FinalComposite, Swap, _Word]


def _check_blocks(m: Move, n_blocks: int) -> None:
    used = m.blocks_used()
    if any(b < 0 or b >= n_blocks for b in used):
        raise IndexError(f"{m} uses a block outside 0..{n_blocks - 1}")
    if isinstance(m, (Cross, Transvection, FinalComposite, Swap)) and m.i == m.j:
        raise ValueError(f"{m} needs two distinct blocks")


def apply_move(m: Move, v: HVector) -> HVector:
    _check_blocks(m, v.blocks)
    c = list(v.coords)
    m.act(c, v.param.epsilon)
    return v.replace(c)


def apply_word(word: Sequence[Move], v: HVector) -> HVector:
    c = list(v.coords)
    for m in word:
        _check_blocks(m, v.blocks)
        m.act(c, v.param.epsilon)
    return v.replace(c)


def move_matrix(m: Move, n_blocks: int, param: FormParameter) -> Matrix:
    """The move as a ``2n x 2n`` matrix acting on coordinate columns."""
    _check_blocks(m, n_blocks)
    n = 2 * n_blocks
    cols = []
    for k in range(n):
        c = [int(i == k) for i in range(n)]
        m.act(c, param.epsilon)
        cols.append(c)
    return intmat.from_columns(cols, n)


def word_matrix(word: Sequence[Move], n_blocks: int, param: FormParameter) -> Matrix:
    n = 2 * n_blocks
    cols = []
    for k in range(n):
        c = [int(i == k) for i in range(n)]
        for m in word:
            m.act(c, param.epsilon)
        cols.append(c)
    return intmat.from_columns(cols, n)


def invert_word(word: Sequence[Move], param: FormParameter) -> list[Move]:
    return [m.inverse(param.epsilon) for m in reversed(word)]


def word_to_json(word: Sequence[Move]) -> list[dict]:
    return [m.to_json() for m in word]


def move_from_json(d: dict) -> Move:
    kind = d["move"]
    if kind == "rot":
        return Rot(int(d["block"]), int(d.get("sign", 1)))
    if kind == "shear":
        return Shear(int(d["block"]), int(d.get("sign", 1)))
    i, j = (int(x) for x in d.get("blocks", (0, 0)))
    if kind == "cross":
        return Cross(i, j, int(d.get("sign", 1)))
    if kind == "transvection":
        return Transvection(i, j, int(d.get("k", 1)))
    if kind == "final":
        return FinalComposite(i, j, int(d["k"]))
    if kind == "swap":
        return Swap(i, j)
    if kind == "word":
        return _Word(tuple(move_from_json(x) for x in d["moves"]))
    raise ValueError(f"unknown move {kind!r}")


def generators(n_blocks: int, param: FormParameter) -> list[Move]:
    """The fixed move set used by :func:`orbit_search`, in search order.

    Closed under inverses, so searching backwards uses the same set.
    """
    gens: list[Move] = []
    for i in range(n_blocks):
        gens += [Rot(i, 1), Rot(i, -1)]
        if param.epsilon == -1:
            gens += [Shear(i, 1), Shear(i, -1)]
    for i in range(n_blocks):
        for j in range(i + 1, n_blocks):
            gens += [Cross(i, j, 1), Cross(i, j, -1), Swap(i, j)]
    return gens


# --- reduction ------------------------------------------------------------


def primitive_part(v: HVector) -> tuple[int, HVector]:
    d = intmat.content(v.coords)
    if d == 0:
        raise ValueError("the zero vector has no primitive part")
    return d, v.replace(x // d for x in v.coords)


def _normalize_block(c: list[int], i: int, eps: int, word: list[Move]) -> None:
    """Rotations and shears until block ``i`` reads ``(g, 0)`` or ``(g, g)``, ``g >= 0``."""

    def do(m: Move) -> None:
        m.act(c, eps)
        word.append(m)

    p = 2 * i
    while True:
        a, b = c[p], c[p + 1]
        if b == 0:
            if a < 0:
                do(Rot(i, 1))
                do(Rot(i, 1))
            return
        if abs(a) == abs(b):
            while not (c[p] > 0 and c[p] == c[p + 1]):
                do(Rot(i, 1))
            return
        if abs(b) > abs(a):
            do(Rot(i, 1))
            continue
        if b < 0:
            do(Rot(i, 1))
            do(Rot(i, 1))
            a, b = c[p], c[p + 1]
        # now 0 < b < |a|
        do(Shear(i, 1) if a > 0 else Shear(i, -1))


def _clear_pair(c: list[int], i: int, j: int, eps: int, word: list[Move]) -> None:
    """Moves on blocks ``i``, ``j`` (unimodular there) making block ``j`` zero."""
    _normalize_block(c, i, eps, word)
    _normalize_block(c, j, eps, word)
    if c[2 * j] == 0 and c[2 * j + 1] == 0:
        return
    # gcd(a, c) = 1 now; the cross move makes each block unimodular
    m = Cross(i, j, 1)
    m.act(c, eps)
    word.append(m)
    _normalize_block(c, i, eps, word)
    _normalize_block(c, j, eps, word)
    assert c[2 * i] == 1 and c[2 * j] == 1, c
    fin = FinalComposite(i, j, c[2 * j + 1])
    fin.act(c, eps)
    word.append(fin)
    assert c[2 * j] == 0 and c[2 * j + 1] == 0, c


def reduce_to_first_block(v: HVector) -> tuple[list[Move], HVector]:
    """A word of automorphisms taking the unimodular ``v`` into ``H (+) 0``.

    Only for ``eps = -1``. Blocks ``1..n`` are cleared left to right, each
    paired with block 0; the moves for a pair are computed on the primitive
    part of that pair and are linear, so they act correctly on ``v``.
    Finally block 0 is normalized to ``(1, 0)`` or ``(1, 1)``.
    """
    if v.param.epsilon != -1:
        raise NotImplementedError("no reduction algorithm for eps = +1; use orbit_search")
    if not v.is_unimodular():
        raise ValueError("vector is not unimodular")
    eps = -1
    c = list(v.coords)
    word: list[Move] = []
    for j in range(1, v.blocks):
        pair = [c[0], c[1], c[2 * j], c[2 * j + 1]]
        d = intmat.content(pair)
        if d == 0 or (c[2 * j] == 0 and c[2 * j + 1] == 0):
            continue
        sub = [x // d for x in pair]
        sub_word: list[Move] = []
        _clear_pair(sub, 0, 1, eps, sub_word)
        for m in sub_word:
            m = _relabel(m, {0: 0, 1: j})
            m.act(c, eps)
            word.append(m)
    _normalize_block(c, 0, eps, word)
    result = v.replace(c)
    assert apply_word(word, v) == result
    return word, result


def _relabel(m: Move, mapping: dict[int, int]) -> Move:
    if isinstance(m, (Rot, Shear)):
        return type(m)(mapping[m.block], m.sign)
    if isinstance(m, Cross):
        return Cross(mapping[m.i], mapping[m.j], m.sign)
    if isinstance(m, Transvection):
        return Transvection(mapping[m.i], mapping[m.j], m.k)
    if isinstance(m, FinalComposite):
        return FinalComposite(mapping[m.i], mapping[m.j], m.k)
    if isinstance(m, Swap):
        return Swap(mapping[m.i], mapping[m.j])
    return _Word(tuple(_relabel(x, mapping) for x in m.moves))


def orbit_search(v: HVector, w: HVector, depth: int, max_states: int = 2_000_000) -> list[Move] | None:
    """Shortest word (length ``<= depth``) over :func:`generators` taking ``v`` to ``w``.

    Bidirectional breadth-first search; layers are expanded in generator
    order so the returned word is reproducible. ``None`` if no word exists
    within ``depth`` (or the state budget is exhausted).
    """
    if v.param != w.param or len(v.coords) != len(w.coords):
        raise ValueError("vectors live in different modules")
    if v.coords == w.coords:
        return []
    if intmat.content(v.coords) != intmat.content(w.coords):
        return None
    eps = v.param.epsilon
    gens = generators(v.blocks, v.param)
    # parent maps: state -> (previous state, move index)
    fwd: dict[Vector, tuple | None] = {v.coords: None}
    bwd: dict[Vector, tuple | None] = {w.coords: None}
    f_front, b_front = [v.coords], [w.coords]
    f_depth = b_depth = 0

    def expand(front, seen, other):
        nxt = []
        meets = []
        for s in front:
            for k, g in enumerate(gens):
                c = list(s)
                g.act(c, eps)
                t = tuple(c)
                if t in seen:
                    continue
                seen[t] = (s, k)
                nxt.append(t)
                if t in other:
                    meets.append(t)
        return nxt, meets

    while f_depth + b_depth < depth:
        if len(fwd) + len(bwd) > max_states:
            return None
        if len(f_front) <= len(b_front):
            f_front, meets = expand(f_front, fwd, bwd)
            f_depth += 1
        else:
            b_front, meets = expand(b_front, bwd, fwd)
            b_depth += 1
        if meets:
            return _join_paths(meets[0], fwd, bwd, gens, eps)
        if not f_front or not b_front:
            return None
    return None


def _join_paths(meet: Vector, fwd, bwd, gens, eps) -> list[Move]:
    head: list[Move] = []
    s = meet
    while fwd[s] is not None:
        s, k = fwd[s]
        head.append(gens[k])
    head.reverse()
    tail: list[Move] = []
    s = meet
    while bwd[s] is not None:
        s, k = bwd[s]
        tail.append(gens[k].inverse(eps))
    return head + tail


def reducing_word(x: HVector, depth: int = 12) -> list[Move]:
    """Word taking the unimodular ``x`` into ``H (+) 0``, by construction or search."""
    if x.param.epsilon == -1:
        return reduce_to_first_block(x)[0]
    # eps = +1: same orbit as (1, mu(x), 0, ..., 0)
    mu = sum(x.coords[2 * i] * x.coords[2 * i + 1] for i in range(x.blocks))
    target = x.replace([1, mu] + [0] * (len(x.coords) - 2))
    word = orbit_search(x, target, depth)
    if word is None:
        raise LookupError(f"no word of length <= {depth} reduces {x.coords}")
    return word


# --- kernel restriction ---------------------------------------------------


@dataclass(frozen=True)
class KernelRestriction:
    """``morphism: H^{g-1} -> ker(ell)`` in kernel coordinates.

    ``kernel_basis`` embeds ``ker(ell)`` in the ambient module; ``ambient``
    is the same morphism written in ambient coordinates.
    """

    morphism: QModMorphism
    kernel_basis: Matrix
    ambient: Matrix
    word: tuple


def kernel_restriction(phi: QModMorphism, ell: Sequence[int], depth: int = 12) -> KernelRestriction:
    """Restrict ``phi: H^g -> M`` to ``H^{g-1} -> ker(ell)``.

    Writes ``ell o phi = lambda(x, -)``, moves ``x`` into the first block by
    an automorphism ``A`` of ``H^g`` and restricts ``phi o A^{-1}`` to the
    remaining blocks, which ``ell`` annihilates.
    """
    Hg, M = phi.source, phi.target
    g = Hg.rank // 2
    if g == 0:
        raise ValueError("phi has source H^0")
    ell = intmat.as_vector(ell)
    if len(ell) != M.rank:
        raise ValueError("ell has the wrong length")
    Phi = phi.matrix
    r = tuple(sum(ell[i] * Phi[i][j] for i in range(M.rank)) for j in range(Hg.rank))
    # x^T G = r  <=>  G^T x = r^T
    x = intmat.solve(intmat.transpose(Hg.gram), r)
    param = Hg.param
    if any(x):
        d, xp = primitive_part(HVector(param, x))
        word = reducing_word(xp, depth)
        A_inv = word_matrix(invert_word(word, param), g, param)
        psi = intmat.matmul(Phi, A_inv)
        amb = tuple(row[2:] for row in psi)
    else:
        word = []
        amb = tuple(row[: 2 * (g - 1)] for row in Phi)
    ker_mod, K = kernel_submodule(M, [ell] if any(ell) else [])
    cols = intmat.columns(amb) if g > 1 else []
    coords = [intmat.solve(K, c) for c in cols]
    Hg1 = QuadraticModule.hyperbolic(param, g - 1)
    mor = QModMorphism(Hg1, ker_mod, intmat.from_columns(coords, ker_mod.rank))
    out = KernelRestriction(mor, K, amb if amb and amb[0] else tuple(() for _ in range(M.rank)), tuple(word))
    if not mor.is_valid():
        raise ArithmeticError("restricted map is not a morphism")
    if any(sum(e * a for e, a in zip(ell, col)) for col in cols):
        raise ArithmeticError("restricted map leaves ker(ell)")
    return out
