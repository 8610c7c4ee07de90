"""Moving unimodular vectors of H^g into the first hyperbolic block.

Run with ``python3 demos/vector_reduction.py``.
"""
from wittlab import SKEW_EVEN, HVector, QModMorphism, QuadraticModule, kernel_restriction, orbit_search, primitive_part
from wittlab.reduction import apply_word, reduce_to_first_block, word_matrix

v = HVector(SKEW_EVEN, (3, 5, -2, 7))
content, prim = primitive_part(v)
print(f"v = {v.coords}, content {content}")

# The reduction is constructive: it returns the word of elementary
# automorphisms it used, and replaying the word is the proof.
word, result = reduce_to_first_block(prim)
print(f"reduced to {result.coords} in {len(word)} moves")
for m in word:
    print("   ", m)
assert apply_word(word, prim) == result

# The same word as a matrix: an integral isometry of H^2.
A = word_matrix(word, 2, SKEW_EVEN)
print("word matrix rows:", *A, sep="\n    ")

# An independent check: breadth-first search over the same generators.
bfs = orbit_search(HVector(SKEW_EVEN, (0, 0, 1, 0)), HVector(SKEW_EVEN, (1, 0, 0, 0)), 8)
print("\nBFS word from the second block to the first:", bfs)

# Moves keep the gcd of the coordinates, so (2, 0, 0, 0) never reaches e_1.
print("BFS from (2,0,0,0) to (1,0,0,0):", orbit_search(HVector(SKEW_EVEN, (2, 0, 0, 0)), HVector(SKEW_EVEN, (1, 0, 0, 0)), 10))

# Kernel restriction: a hyperbolic morphism into the kernel of a functional.
H3 = QuadraticModule.hyperbolic(SKEW_EVEN, 3)
phi = QModMorphism(H3, H3, tuple(tuple(int(i == j) for j in range(6)) for i in range(6)))
ell = (1, -2, 0, 3, 1, 0)
out = kernel_restriction(phi, ell)
print(f"\nH^2 -> ker(ell) for ell = {ell}: valid morphism {out.morphism.is_valid()}")
for col in zip(*out.ambient):
    print("    image column", col, "ell =", sum(a * b for a, b in zip(ell, col)))
