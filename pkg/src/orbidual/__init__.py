"""Orbifold Euler characteristics of invertible polynomials with permutation symmetries."""

from .engine import (
    Instance,
    bhht_dual,
    bruteforce,
    make_instance,
    orbifold_euler_bruteforce,
    point_orbifold_euler,
    reduced_orbifold_euler,
    verify_duality,
)
from .invertible import ExponentMatrix, diagonal_symmetry_group, dual_subgroup, grading_operator
from .symmetry import CyclicPermGroup, Permutation, parse_permutation
from .torsion import FiniteSubgroup, TorsionVector, combine, map_subgroup, span

__all__ = [
    "Instance",
    "make_instance",
    "reduced_orbifold_euler",
    "point_orbifold_euler",
    "bhht_dual",
    "verify_duality",
    "bruteforce",
    "orbifold_euler_bruteforce",
    "ExponentMatrix",
    "diagonal_symmetry_group",
    "dual_subgroup",
    "grading_operator",
    "Permutation",
    "CyclicPermGroup",
    "parse_permutation",
    "TorsionVector",
    "FiniteSubgroup",
    "span",
    "combine",
    "map_subgroup",
]
