"""Exact quadratic 1D quasilattices."""
from .numeric import PHI, QuadraticNumber, qn
from .geometry import BasisVector, GeometricSpec, cut_and_project, torus_slice, dualize
from .floorform import FloorFormParams, SingularSigns, eval_floorform, eval_singular, geometry_to_floorform, floorform_to_geometry
from .equivalence import BasisChange, SubstitutionRule, TileWord, apply_rule, compose_bases, derive_canonical_rule, glue
from .selfsim import catalog, catalog_entry, count_selfsame, eigen_tau, inflate_params, selfsame_params

__all__ = [
    "PHI", "QuadraticNumber", "qn",
    "BasisVector", "GeometricSpec", "cut_and_project", "torus_slice", "dualize",
    "FloorFormParams", "SingularSigns", "eval_floorform", "eval_singular",
    "geometry_to_floorform", "floorform_to_geometry",
    "BasisChange", "SubstitutionRule", "TileWord", "apply_rule", "compose_bases",
    "derive_canonical_rule", "glue",
    "catalog", "catalog_entry", "count_selfsame", "eigen_tau", "inflate_params", "selfsame_params",
]
