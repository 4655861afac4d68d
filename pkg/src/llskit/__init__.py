"""Exact computations with limit linear series on compact-type curves."""

from types import ModuleType

from .descent import (
    Covering,
    FiniteCategory,
    FiniteGroup,
    FiniteSite,
    PiSheafDatum,
    SetSheaf,
    check_factorable,
    check_sheaf,
    extend_sheaf,
    find_natural_isomorphism,
    galois_fixed_points,
    glue_pi_sheaf,
    restrict_sheaf,
)
from .dual_graph import DualGraph, GraphAutomorphism, GraphFamily, split_at_edge, validate_compact_type
from .errors import LLSError
from .lls import (
    LimitSeriesType,
    count_refined,
    enumerate_refined,
    galois_invariant_count,
    real_count_formulas,
)
from .multidegree import Multidegree, fiber_multidegree, find_sufficient_collection, twist
from .schubert import Partition, brill_noether_rho, intersection_number, syt_rectangle_count

__version__ = "0.1.0"

__all__ = [
    name for name, obj in dict(globals()).items()
    if not name.startswith("_") and name != "ModuleType" and not isinstance(obj, ModuleType)
]
