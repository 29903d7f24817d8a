"""Exact curvature jets, Singer invariants and linear Jacobi relations of
reductive homogeneous spaces.

Typical use::

    from jacobijets import build, singer_invariant, min_relation_order

    s = build("m6")
    k_s, chain = singer_invariant(s)      # 1, dims [3, 2, 2]
    order, rel = min_relation_order(s, 5) # 4, R^5 = -5/8 g R^3 - 1/16 g^2 R^1
"""

from .catalog import RECIPES, build, build_kaplan, build_m6, build_reference, build_v1, build_v3, catalog_ids
from .exactalg import ExactMatrix, QArray, Scalar, kernel, parse_scalar, rank, render_scalar, solve_linear
from .homogeneous import (
    InvariantViolation,
    ReductiveSpace,
    ReductiveSpaceError,
    curvature,
    nabla_jet,
    ricci,
    sectional_curvature,
)
from .jacobi import (
    JacobiRelation,
    SymJet,
    find_relation,
    min_relation_order,
    osculating_probe,
    scale_invariant_signature,
    sym_jet,
)
from .lie import LieAlgebraData, killing_form
from .stabilizer import StabilizerChain, g_k, g_k_symmetrized, isotropy_image, singer_invariant

__version__ = "0.1.0"

__all__ = [
    "RECIPES",
    "ExactMatrix",
    "InvariantViolation",
    "JacobiRelation",
    "LieAlgebraData",
    "QArray",
    "ReductiveSpace",
    "ReductiveSpaceError",
    "Scalar",
    "StabilizerChain",
    "SymJet",
    "build",
    "build_kaplan",
    "build_m6",
    "build_reference",
    "build_v1",
    "build_v3",
    "catalog_ids",
    "curvature",
    "find_relation",
    "g_k",
    "g_k_symmetrized",
    "isotropy_image",
    "kernel",
    "killing_form",
    "min_relation_order",
    "nabla_jet",
    "osculating_probe",
    "parse_scalar",
    "rank",
    "render_scalar",
    "ricci",
    "scale_invariant_signature",
    "sectional_curvature",
    "singer_invariant",
    "solve_linear",
    "sym_jet",
]
