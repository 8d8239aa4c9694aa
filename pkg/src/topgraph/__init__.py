"""Structure and K-theory of C*-algebras of finite discrete topological graphs."""

from .fock import (
    FockBasis,
    FockOperator,
    build_truncated_fock,
    ck_defect_check,
    conditional_expectation,
    contract,
    dyn_isometry_check,
    gauge_apply,
    phi_n,
    relation_suite,
    sigma0,
    sigma1,
    t_n,
)
from .graph import (
    OMEGA,
    Correspondence,
    Edge,
    Graph,
    GraphError,
    VertexClassification,
    build_graph,
    classify_vertices,
    from_dynamical_system,
    opposite_graph,
)
from .hilbert import (
    ModuleElement,
    ModuleOperator,
    VertexFunction,
    block_structure,
    inner_product,
    module_norm,
    pi_r,
    right_action,
    theta_op,
)
from .ktheory import AbelianGroupPresentation, SnfResult, delta_matrix, k_groups, smith_normal_form
from .paths import (
    Loop,
    Path,
    compose,
    cycles_without_entrances,
    find_non_returning_path,
    is_topologically_free,
    path_space,
)
from .verify import CheckReport, OperatorFamily, verify_ck_family, verify_toeplitz_family

__version__ = "0.1.0"
