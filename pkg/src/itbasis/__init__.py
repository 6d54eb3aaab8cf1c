"""Exact Cartan-Weyl and irreducible tensor bases of G2, F4 and E6."""

from __future__ import annotations

__version__ = "0.1.0"

from .exactnum import ExactReal
from .rootsystem import RootSystem, build
from .cartanweyl import AlgebraElement, CartanWeyl, StructureTable, load_structure_constants, solve_missing_constants
from .tensorbasis import TensorBasis, TensorOperator, assemble, solve_labels

__all__ = [
    "__version__",
    "ExactReal",
    "RootSystem",
    "build",
    "AlgebraElement",
    "CartanWeyl",
    "StructureTable",
    "load_structure_constants",
    "solve_missing_constants",
    "TensorBasis",
    "TensorOperator",
    "assemble",
    "solve_labels",
]
