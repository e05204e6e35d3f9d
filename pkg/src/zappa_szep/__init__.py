"""Zappa-Szep products of finite groups, their centers and central automorphisms."""

from .center import center_abelian_corollary, center_semidirect_corollary, center_via_theorem
from .central_aut import (
    CentralAutMatrix,
    check_Ac_conditions,
    compose_matrices,
    compute_PQRS,
    decompose_theta,
    enumerate_Ac,
    matrix_to_theta,
    verify_abcd_product,
    verify_remark,
)
from .errors import ZappaSzepError
from .groups import (
    FiniteGroup,
    GroupHom,
    MapTable,
    Subgroup,
    build_group_from_table,
    center_bruteforce,
    cyclic,
    dihedral,
    direct_product,
    elementary_abelian,
    inner_automorphism,
    structure_probe,
    subgroup_generated,
)
from .homs import central_automorphisms_oracle, enumerate_homs
from .matched_pair import (
    MatchedPair,
    ZappaSzepGroup,
    build_external_product,
    extend_generator_actions,
    factorize_internal,
    fix_ker_sets,
    from_semidirect,
    validate_matched_pair,
)
from .order_p5 import build_p5

__version__ = "0.1.0"
