"""Quadratic modules over the integers and the complexes built from them.

The main entry points:

* :mod:`wittlab.quadratic`: form parameters, quadratic modules, morphisms,
  complements, bounded Witt indices and the Arf invariant.
* :mod:`wittlab.reduction`: elementary automorphisms of ``H^g`` and the
  reduction of unimodular vectors into the first hyperbolic block.
* :mod:`wittlab.simplicial` and :mod:`wittlab.homology`: finite complexes,
  integral homology, connectivity and Cohen-Macaulay checks.
* :mod:`wittlab.ka`: truncations of the complex of hyperbolic morphisms.
"""
from .homology import connectivity_report, homology, is_lcm, is_wcm, prop25_harness
from .ka import (
    KaComplex,
    KaVertex,
    build_ka,
    cancellation_witness,
    prop43_connect,
    swap_automorphism,
    theorem32_evidence,
    transitivity_witness,
)
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
    enumerate_hyperbolic_morphisms,
    is_isomorphic_bounded,
    is_morphism,
    orthogonal_complement,
    stable_witt_lower_bound,
    witt_index_lower_bound,
)
from .reduction import HVector, apply_move, kernel_restriction, orbit_search, primitive_part, reduce_to_first_block
from .simplicial import SemiSimplicialSet, SimplicialComplex, join, link, star

__version__ = "0.1.0"

__all__ = [
    "FORM_PARAMETERS",
    "SKEW_ALL",
    "SKEW_EVEN",
    "SYMMETRIC",
    "FormParameter",
    "HVector",
    "KaComplex",
    "KaVertex",
    "LambdaSub",
    "QModMorphism",
    "QuadraticModule",
    "SemiSimplicialSet",
    "SimplicialComplex",
    "apply_move",
    "arf_invariant",
    "build_ka",
    "cancellation_witness",
    "connectivity_report",
    "direct_sum",
    "enumerate_hyperbolic_morphisms",
    "homology",
    "is_isomorphic_bounded",
    "is_lcm",
    "is_morphism",
    "is_wcm",
    "join",
    "kernel_restriction",
    "link",
    "orbit_search",
    "orthogonal_complement",
    "primitive_part",
    "prop25_harness",
    "prop43_connect",
    "reduce_to_first_block",
    "stable_witt_lower_bound",
    "star",
    "swap_automorphism",
    "theorem32_evidence",
    "transitivity_witness",
    "witt_index_lower_bound",
]
