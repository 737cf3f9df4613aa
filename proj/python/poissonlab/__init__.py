"""Verification toolkit for compatible Poisson and (pseudo-)Riemannian structures.

The heavy lifting lives in the C++ extension; this package re-exports the
operations most scripts need.
"""

from ._core import (
    PoissonLabError,
    Structure,
    classify,
    eval_jet,
    gallery_ids,
    gallery_structure,
    identities,
    load_structure,
    mean_curvature,
    nabla_pi_max,
    submersion_suite,
    trace_leaf,
)

__all__ = [
    "PoissonLabError",
    "Structure",
    "classify",
    "eval_jet",
    "gallery_ids",
    "gallery_structure",
    "identities",
    "load_structure",
    "mean_curvature",
    "nabla_pi_max",
    "submersion_suite",
    "trace_leaf",
]
