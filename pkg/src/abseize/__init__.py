"""Amyloid-beta modulated epileptiform electrophysiology.

0D conductance-based ion dynamics with five amyloid-beta pathways, and a
2D monodomain tissue model discretized with symmetric interior-penalty
discontinuous Galerkin elements on polygonal meshes.
"""

__version__ = "0.1.0"

from .params import AbetaParams, BaseParams, IonicState, load_params  # noqa: F401
