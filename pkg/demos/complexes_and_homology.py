"""Simplicial complexes, integral homology and Cohen-Macaulay checks.

Run with ``python3 demos/complexes_and_homology.py``.
"""
from wittlab import SimplicialComplex, connectivity_report, homology, is_lcm, is_wcm, join, link
from wittlab.simplicial import real_projective_plane, torus


def group_name(g):
    parts = (["Z"] if g.betti == 1 else [f"Z^{g.betti}"] if g.betti else []) + [f"Z/{t}" for t in g.torsion]
    return " + ".join(parts) or "0"


def show(name, X, top):
    print(f"{name:>26}: " + ", ".join(group_name(g) for g in homology(X, top).groups))


show("boundary of a triangle", SimplicialComplex.boundary_of_simplex(2), 1)
show("boundary of a tetrahedron", SimplicialComplex.boundary_of_simplex(3), 2)
show("projective plane", real_projective_plane(), 2)
show("torus (semisimplicial)", torus(), 2)

# Flag complexes are stored by their graph and expanded lazily.
square = SimplicialComplex.flag(range(4), [(0, 1), (1, 2), (2, 3), (0, 3)])
show("4-cycle as flag complex", square, 1)
octahedron, _ = join(*[SimplicialComplex([(0,), (1,)])] * 2)
octahedron, _ = join(octahedron, SimplicialComplex([(0,), (1,)]))
show("octahedron (3 joins)", octahedron, 2)

# Connectivity is certified from vanishing reduced homology together with a
# simply connected check on a presentation of the edge-path group.
print("\nconnectivity of the octahedron:", connectivity_report(octahedron, 2).to_json())
seven_vertex_torus = SimplicialComplex(
    [(i, (i + 1) % 7, (i + 3) % 7) for i in range(7)] + [(i, (i + 2) % 7, (i + 3) % 7) for i in range(7)]
)
show("seven-vertex torus", seven_vertex_torus, 2)
print("connectivity of that torus:  ", connectivity_report(seven_vertex_torus, 1).to_json())

print("\noctahedron weakly Cohen-Macaulay of dimension 2:", bool(is_wcm(octahedron, 2)))
print("link of a vertex:", sorted(link(octahedron, (0,)).facets))
two = SimplicialComplex([(0, 1, 2), (3, 4, 5)])
res = is_wcm(two, 1)
print("two disjoint triangles, wCM(1):", bool(res), "witness", res.witness, " lCM(1):", bool(is_lcm(two, 1)))
