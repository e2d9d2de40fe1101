"""Exact tools for lattice polytopes: h*-vectors, IDP, triangulations,
unimodular equivalence, arc polytopes and counterexample search."""

from .digraph import Digraph, arc_polytope
from .ehrhart import (
    EhrhartPolynomial,
    HStarVector,
    ehrhart_from_hstar,
    has_internal_zeros,
    hstar,
    hstar_from_counts,
    is_log_concave,
    is_unimodal,
)
from .enumeration import count_points, enumerate_points
from .equivalence import unimodular_equivalence
from .idp import IdpVerdict, is_idp
from .polytope import AffineUnimodularMap, HalfSpace, Polytope, facet_enumeration, lattice_normalize
from .triangulation import Triangulation, hstar_halfopen

__all__ = [
    "AffineUnimodularMap",
    "Digraph",
    "EhrhartPolynomial",
    "HStarVector",
    "HalfSpace",
    "IdpVerdict",
    "Polytope",
    "Triangulation",
    "arc_polytope",
    "count_points",
    "ehrhart_from_hstar",
    "enumerate_points",
    "facet_enumeration",
    "has_internal_zeros",
    "hstar",
    "hstar_from_counts",
    "hstar_halfopen",
    "is_idp",
    "is_log_concave",
    "is_unimodal",
    "lattice_normalize",
    "unimodular_equivalence",
]

__version__ = "0.1.0"
