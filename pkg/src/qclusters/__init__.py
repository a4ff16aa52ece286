"""Exact toolkit for cluster-free families of subspaces over finite fields."""

from .families import (
    COVERING_TRIPLE,
    D_CLUSTER,
    THREE_CLUSTER,
    Family,
    family_new,
    find_forbidden,
    is_3_cluster,
    is_covering_triple,
    is_d_cluster,
    is_intersecting,
    star_centers,
    star_family,
)
from .gfq import FieldSpec, FqMatrix, make_field
from .grassmann import Subspace, enum_grassmannian, enum_skew_to, subspace_from_vectors
from .qarith import gauss_binom, gauss_binom_poly
from .search import SearchReport, brute_force_max, enumerate_maxima, search_max

__version__ = "0.1.0"

__all__ = [
    "COVERING_TRIPLE",
    "D_CLUSTER",
    "THREE_CLUSTER",
    "Family",
    "FieldSpec",
    "FqMatrix",
    "SearchReport",
    "Subspace",
    "brute_force_max",
    "enum_grassmannian",
    "enum_skew_to",
    "enumerate_maxima",
    "family_new",
    "find_forbidden",
    "gauss_binom",
    "gauss_binom_poly",
    "is_3_cluster",
    "is_covering_triple",
    "is_d_cluster",
    "is_intersecting",
    "make_field",
    "search_max",
    "star_centers",
    "star_family",
    "subspace_from_vectors",
]
