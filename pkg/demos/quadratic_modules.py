"""A tour of quadratic modules over the integers.

Run with ``python3 demos/quadratic_modules.py``.
"""
from wittlab import (
    SKEW_ALL,
    SKEW_EVEN,
    SYMMETRIC,
    QModMorphism,
    QuadraticModule,
    arf_invariant,
    direct_sum,
    orthogonal_complement,
    stable_witt_lower_bound,
    witt_index_lower_bound,
)

# The hyperbolic plane comes in three flavours, one per form parameter.
for param in (SYMMETRIC, SKEW_EVEN, SKEW_ALL):
    H = QuadraticModule.hyperbolic(param, 1)
    print(f"H for {param.label:>10}: gram {H.gram}, valid: {bool(H.validate())}")

# Validation names the first broken invariant instead of just saying no.
odd = QuadraticModule(SYMMETRIC, ((1, 0), (0, -1)), (0, 0))
print("\ndiag(1, -1) over the zero subgroup:", odd.validate())

# Morphisms are matrices whose columns are images of basis vectors. The
# standard inclusion of H into H^2 has an orthogonal complement, again H.
H, H2 = QuadraticModule.hyperbolic(SKEW_EVEN, 1), QuadraticModule.hyperbolic(SKEW_EVEN, 2)
inc = QModMorphism(H, H2, ((1, 0), (0, 1), (0, 0), (0, 0)))
comp = orthogonal_complement(inc)
print("\ncomplement of H in H^2:", comp.module.gram, "certificate holds:", comp.verify(inc))

# Witt indices are searched for with bounded coefficients, and each answer
# comes with a witness morphism.
M = direct_sum(H2, QuadraticModule(SKEW_EVEN, ((0, 1), (-1, 0)), (1, 1)))
g, witness = witt_index_lower_bound(M, 1)
print(f"\nWitt index of H^2 + (odd plane) is at least {g}; witness columns:")
for col in zip(*witness.matrix):
    print("   ", col)
print("after adding one more H, minus one:", stable_witt_lower_bound(M, 1, 1))

# The Arf invariant separates the odd plane from H, and it is additive.
odd_plane = QuadraticModule(SKEW_EVEN, ((0, 1), (-1, 0)), (1, 1))
print("\nArf(H) =", arf_invariant(H), " Arf(odd plane) =", arf_invariant(odd_plane))
print("Arf(odd plane + odd plane) =", arf_invariant(direct_sum(odd_plane, odd_plane)))
