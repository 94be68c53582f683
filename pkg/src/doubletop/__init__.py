"""Tube algebra, modular data, and 3-manifold invariants of finite fusion categories."""

from .catdata import (
    CategoryData,
    CategoryError,
    dump_category,
    global_dim,
    load_category,
    unitarity_residual,
    validate_pentagon,
    zoo,
)
from .modulardata import (
    ModularData,
    ModularDataError,
    block_irreps,
    braiding_st,
    compute_S,
    compute_T,
    compute_modular_data,
    extract_half_braidings,
    group_double_oracle,
    match_blocks,
    pants_dims,
    verlinde_fusion,
)
from .statesum import (
    BudgetError,
    Triangulation,
    TriangulationError,
    builtin_triangulation,
    cyclic_group_table,
    dw_oracle,
    lens_triangulation,
    load_triangulation,
    state_sum,
)
from .surgery import (
    ColoringBudgetError,
    PlumbingGraph,
    SurgeryError,
    ToleranceError,
    blow_down,
    blow_up,
    builtin_plumbing,
    chain,
    colored_invariant,
    evaluate,
    lens_chain,
    load_plumbing,
    modular_tau,
    rt_invariant,
    surgery_invariant,
)
from .tube import (
    CenterDecomposition,
    CenterError,
    TubeAlgebra,
    TubeError,
    build_tube_algebra,
    center_decompose,
    colored_inner_product,
)

__all__ = [
    "BudgetError",
    "CategoryData",
    "CategoryError",
    "CenterDecomposition",
    "CenterError",
    "ColoringBudgetError",
    "ModularData",
    "ModularDataError",
    "PlumbingGraph",
    "SurgeryError",
    "ToleranceError",
    "Triangulation",
    "TriangulationError",
    "TubeAlgebra",
    "TubeError",
    "block_irreps",
    "blow_down",
    "blow_up",
    "braiding_st",
    "build_tube_algebra",
    "builtin_plumbing",
    "builtin_triangulation",
    "center_decompose",
    "chain",
    "colored_inner_product",
    "colored_invariant",
    "compute_S",
    "compute_T",
    "compute_modular_data",
    "cyclic_group_table",
    "extract_half_braidings",
    "dump_category",
    "dw_oracle",
    "evaluate",
    "global_dim",
    "group_double_oracle",
    "lens_chain",
    "lens_triangulation",
    "load_category",
    "load_plumbing",
    "load_triangulation",
    "match_blocks",
    "modular_tau",
    "pants_dims",
    "rt_invariant",
    "state_sum",
    "surgery_invariant",
    "unitarity_residual",
    "validate_pentagon",
    "verlinde_fusion",
    "zoo",
]

__version__ = "0.1.0"
