"""Certified open books and stable homotopies for circle-symmetric
3-manifold pieces, as planar-curve calculus.

The package represents invariant stable Hamiltonian structures and contact
forms by pairs of planar curves, implements each constructive step of the
supporting-open-book pipeline as a checkable operation, and assembles
decompositions into globally certified reports.
"""

__version__ = "0.1.0"

from . import (assembly, cli, curves, grid_forms, homotopies, invariant_forms,
               plots, relative_giroux)
from .errors import ToolkitError

__all__ = [
    "assembly", "cli", "curves", "grid_forms", "homotopies",
    "invariant_forms", "plots", "relative_giroux", "ToolkitError",
]
