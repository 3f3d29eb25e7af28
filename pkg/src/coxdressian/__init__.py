"""Exact computations with Coxeter Dressians of minuscule type.

Minuscule quotients W/P and their polytopes, tropical strong exchange
equations, Dressian membership, regular subdivisions with cell
classification, Dressian and secondary fans, and a registry of named checks.
"""

from .coxeter import (
    CosetLabel,
    InvalidPairError,
    MinusculePair,
    MinusculeQuotient,
    antipode,
    build_quotient,
    cross_polytope_faces,
    graph_distance,
    reflect_vertex,
    separates,
)
from .equations import (
    EquationSystem,
    TropicalQuadric,
    bn_dn1_equation_bijection,
    equations_up_to,
    strong_exchange_system,
)
from .fans import (
    PolyhedralCone,
    PolyhedralFan,
    ScaleGuardError,
    f_vector,
    prevariety_fan,
    quadric_fan,
    secondary_fan,
    support_subfan_check,
)
from .hull import HullResult, affine_hull, convex_hull, is_edge
from .lp import HalfspaceSystem, lp_feasible
from .subdivision import Subdivision, classify, is_coxeter_matroid, is_strong_matroid, regular_subdivision
from .tropical import (
    INF,
    AffineFunctional,
    HeightFunction,
    add_affine,
    embed_bn_to_dn1,
    evaluate,
    indicator,
    is_member,
    satisfies,
)

__all__ = [
    "CosetLabel",
    "InvalidPairError",
    "MinusculePair",
    "MinusculeQuotient",
    "antipode",
    "build_quotient",
    "cross_polytope_faces",
    "graph_distance",
    "reflect_vertex",
    "separates",
    "EquationSystem",
    "TropicalQuadric",
    "bn_dn1_equation_bijection",
    "equations_up_to",
    "strong_exchange_system",
    "PolyhedralCone",
    "PolyhedralFan",
    "ScaleGuardError",
    "f_vector",
    "prevariety_fan",
    "quadric_fan",
    "secondary_fan",
    "support_subfan_check",
    "HullResult",
    "affine_hull",
    "convex_hull",
    "is_edge",
    "HalfspaceSystem",
    "lp_feasible",
    "Subdivision",
    "classify",
    "is_coxeter_matroid",
    "is_strong_matroid",
    "regular_subdivision",
    "INF",
    "AffineFunctional",
    "HeightFunction",
    "add_affine",
    "embed_bn_to_dn1",
    "evaluate",
    "indicator",
    "is_member",
    "satisfies",
]

__version__ = "0.1.0"
