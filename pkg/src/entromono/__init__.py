"""Entropy of actions of amenable cancellative monoids on abelian groups.

Finite abelian groups and shift spaces, left actions and their duals,
algebraic and topological entropy through normed monoids, quasi-tilings,
and finite Fourier analysis.  The compiled kernels live in
:mod:`entromono._kernels`; ``entromono.BACKEND`` names the active one.
"""

from ._kernels import BACKEND
from .action import LeftAction, RightAction, kernel_of_action, ore_localize, surjective_core
from .fingroup import Element, FinAbGroup, Hom, Subgroup
from .monoid import AmenableMonoid, FolnerSequence
from .shiftspace import Configuration, EndoKind, IndexKind, ShiftSpace, TranslationEndo

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "AmenableMonoid",
    "Configuration",
    "Element",
    "EndoKind",
    "FinAbGroup",
    "FolnerSequence",
    "Hom",
    "IndexKind",
    "LeftAction",
    "RightAction",
    "ShiftSpace",
    "Subgroup",
    "TranslationEndo",
    "kernel_of_action",
    "ore_localize",
    "surjective_core",
]
