"""Crossed products of pointed tensor categories by outer group actions."""

from .braiding import (
    ActionBraiding,
    PointedBraiding,
    action_braiding_defects,
    action_from_braiding,
    braiding_from_action,
    enumerate_braidings,
    hexagon_check,
    hexagon_defects,
    solve_action_braidings,
    solve_braidings,
    verify_action_braiding,
)
from .check import PASS, Check
from .cochains import Cochain, differential, is_cocycle
from .cohomology import cohomology_group, cohomology_order, oracle_cohomology, solve_coboundary
from .crossed_product import (
    Extraction,
    GradedPointedCategory,
    OneCell,
    TwoCell,
    build_crossed_product,
    extract_crossed_system,
    extract_with_gauge,
    functor_to_one_cell,
    one_cell_to_functor,
    pentagon_suite,
    two_cell_to_natural_iso,
    verify_one_cell,
    verify_two_cell,
)
from .errors import CrossprodError
from .groups import FiniteGroup, cyclic, direct_product, symmetric_group, trivial_group
from .linalg import AffineSystem, snf_mod
from .modules import CoeffModule, cyclic_module
from .outer_action import (
    CrossedSystem,
    ObstructionClass,
    check_coherence,
    coherence_obstruction,
    coherify,
    random_central_system,
    random_crossed_system,
    validate_crossed_system,
)
from .pointed import MonoidalEquivalence, PointedCategory, pentagon_check

__version__ = "0.1.0"
