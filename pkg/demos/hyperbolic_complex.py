"""Bounded truncations of the complex of hyperbolic morphisms.

Run with ``python3 demos/hyperbolic_complex.py``. Takes a few seconds.
"""
from wittlab import SKEW_EVEN, SYMMETRIC, QuadraticModule, build_ka, prop43_connect, theorem32_evidence, transitivity_witness
from wittlab.ka import ka_stats, vertex_from_images

# With entries in {-1, 0, 1} the symmetric H has exactly four hyperbolic
# morphisms into itself and none of them are orthogonal to each other.
K = build_ka(QuadraticModule.hyperbolic(SYMMETRIC, 1), 1)
print("K(H), symmetric:", len(K), "vertices,", len(K.edges()), "edges")

# H^2: nonempty, but the bounded truncation falls apart into pieces.
M2 = QuadraticModule.hyperbolic(SKEW_EVEN, 2)
K2 = build_ka(M2, 1)
print("K(H^2):", ka_stats(K2, 1).to_json())
for r in theorem32_evidence(M2, 2, 1, 2, complex_=K2):
    print("   evidence", r.to_json())

# H^3: one component, and any vertex can be carried to the standard one.
M3 = QuadraticModule.hyperbolic(SKEW_EVEN, 3)
K3 = build_ka(M3, 1)
print(f"\nK(H^3): {len(K3)} vertices, connected: {K3.is_connected()}")
h0 = vertex_from_images(M3, (1, 0, 0, 0, 0, 0), (0, 1, 0, 0, 0, 0))
h1 = K3.vertex(len(K3) // 2)
w = transitivity_witness(M3, h0, h1, 1, K3)
print("automorphism taking the standard vertex to", h1.matrix, "along a path of", len(w.path), "vertices")

# H^4: two vertices joined through a common orthogonal neighbour.
M4 = QuadraticModule.hyperbolic(SKEW_EVEN, 4)
standard = vertex_from_images(M4, (1, 0, 0, 0, 0, 0, 0, 0), (0, 1, 0, 0, 0, 0, 0, 0))
h = vertex_from_images(M4, (1, 0, 0, 1, 0, 0, 0, 0), (0, 1, 0, 0, 0, 0, 0, 0))
r = prop43_connect(M4, h, standard, 1)
print(f"\nH^4 path status: {r.status}; middle vertex {r.path[1].matrix if len(r.path) == 3 else None}")
