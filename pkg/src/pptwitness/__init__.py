"""PPT-definite witnesses, strongly PPT-unextendible subspaces and many-copy PPT indistinguishability."""

from .bipartite import (
    BipartiteOperator,
    SizeCapError,
    Subspace,
    is_ppt,
    is_ppt_definite,
    partial_transpose,
    schmidt_decompose,
    subspace_power,
    support_projector,
    tensor_power_reorder,
)
from .discrimination import (
    StateSet,
    bell_mixture_family,
    generalized_bell_basis,
    many_copy_ppt_indistinguishable,
    ppt_discrimination_sdp,
    pure_state_pair,
    spectral_sum_check,
)
from .subspaces import assemble_rho, build_generator_space, build_smn_basis, find_coefficients
from .witness import (
    SolverSettings,
    TmaxResult,
    is_ppt_extendible_single,
    strong_unextendibility_witness,
    supermultiplicativity_check,
    tmax,
    tmax_lower_bound,
)

__version__ = "0.1.0"
