"""Contraction witnesses, triangulated grids and treewidth bounds under graph extensions."""

from .conquest import (StateConfiguration, classify_cloud, finalize, init_configuration,
                       run_conquest, step, transfer, verify_state_configuration)
from .contraction import (Budget, ContractionWitness, Kind, UNBOUNDED, bcg, contraction_compose,
                          find_contraction, verify_contraction)
from .errors import BudgetExceeded, GridContractError, InputError, InvariantError, Verdict
from .extension import (ExtensionWitness, build_intersection, build_extension_witness,
                        edge_degree_bound, theorem_bound_check, verify_extension)
from .graph import Multigraph
from .grids import gen_gamma, gen_gamma_hat, gen_square_grid
from .instances import gen_instance
from .treewidth import (TreeDecomposition, exact_treewidth, lift_decomposition,
                        validate_decomposition)

__all__ = [
    "Budget", "BudgetExceeded", "ContractionWitness", "ExtensionWitness", "GridContractError",
    "InputError", "InvariantError", "Kind", "Multigraph", "StateConfiguration",
    "TreeDecomposition", "UNBOUNDED", "Verdict", "bcg", "build_intersection",
    "build_extension_witness", "classify_cloud", "contraction_compose", "edge_degree_bound",
    "exact_treewidth", "finalize", "find_contraction", "gen_gamma", "gen_gamma_hat",
    "gen_instance", "gen_square_grid", "init_configuration", "lift_decomposition",
    "run_conquest", "step", "theorem_bound_check", "transfer", "validate_decomposition",
    "verify_contraction", "verify_extension", "verify_state_configuration",
]
