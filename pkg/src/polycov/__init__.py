"""Monodromy groups, string C-groups and finite regular covers of abstract polytopes."""

from .constructors import build, hypercube, polygon, pyramid, simplex, toroid44
from .covers import (
    CoverReport,
    SymbolicGroup,
    bump,
    extend_2k,
    facet_action,
    regular_cover,
)
from .factored import FactoredInteger
from .group import CapExceeded, PermGroup, contains, enumerate_group, group_order, subgroup_intersection
from .monodromy import is_regular, monodromy
from .perm import Permutation, compose, element_order
from .poset import Polytope, ValidationReport
from .reconstruct import covering_map, polytope_from_group
from .sggi import (
    Sggi,
    SchlafliType,
    check_sggi,
    covers,
    intersection_condition,
    is_string_c_group,
    mix,
    schlafli_type,
)

__version__ = "0.1.0"
