"""Exact computations with abelian extensions and quadratic Lie algebras."""

from .exactlin import Matrix, Subspace
from .extension import ExtensionData, IsomorphismWitness, build
from .liecore import LieAlgebra, canonical_ideals, series
from .quadratic import BilinearForm, metric_exists

__all__ = [
    "BilinearForm",
    "ExtensionData",
    "IsomorphismWitness",
    "LieAlgebra",
    "Matrix",
    "Subspace",
    "build",
    "canonical_ideals",
    "metric_exists",
    "series",
]
