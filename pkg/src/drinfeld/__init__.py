"""Exact modular data and fusion rules of Drinfeld doubles D(G) of finite groups."""

__version__ = "0.1.0"

from .cyclotomic import CycNum, PowerBasis
from .group import Group, GroupError, build_group, parse_group_spec
from .chartable import CharTable, character_table
from .double import DrinfeldDouble, InvariantError, SMatrix, FusionTensor, drinfeld_double, s_matrix, verlinde_fusion
from .fusion import BudgetError, fusion_tensor, max_multiplicity, query
from .rings import FusionRing, group_ring, ring_from_double, rings_isomorphic, verify_ring_axioms, verify_type3_pattern

__all__ = [
    "CycNum", "PowerBasis",
    "Group", "GroupError", "build_group", "parse_group_spec",
    "CharTable", "character_table",
    "DrinfeldDouble", "InvariantError", "SMatrix", "FusionTensor", "drinfeld_double", "s_matrix", "verlinde_fusion",
    "BudgetError", "fusion_tensor", "max_multiplicity", "query",
    "FusionRing", "group_ring", "ring_from_double", "rings_isomorphic", "verify_ring_axioms", "verify_type3_pattern",
]
