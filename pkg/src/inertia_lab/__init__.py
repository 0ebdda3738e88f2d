"""Inertia of partially transposed bipartite states and entanglement witnesses."""

from .errors import *  # noqa: F401,F403
from .hermitian import (
    DEFAULT_TOL,
    HermitianMatrix,
    Inertia,
    Spectrum,
    congruence,
    eig_hermitian,
    eigvalsh_stack,
    exact_nullspace,
    exact_rank,
    inertia,
    inertia_exact,
    inertia_float,
)
from .bipartite import (
    BipartiteShape,
    MultiShape,
    embed,
    is_ppt,
    is_psd,
    kron,
    kron_bipartite,
    local_conjugate,
    partial_trace,
    partial_transpose,
    partial_transpose_multi,
    reorder_factors,
)
from .constructors import (
    SchmidtSpec,
    XStateParams,
    bell,
    diagonal_separable,
    paper_examples_2x3,
    pure_state,
    pure_state_inertia,
    two_qubit_double_ew,
    xstate,
    xstate_eigenvalues,
    xstate_pt_spectrum,
    xstate_with_k_negatives,
)
from .generators import (
    WitnessCertificate,
    certify,
    enumerate_N2n,
    expected_N2n,
    kron_inertia,
    ncopy_inertia,
    pad_and_add_products,
    replay,
    shift_to_full_rank,
    staircase,
)
from .witness import (
    EwVerdict,
    ProductVector,
    bound_check,
    ew_or_npt_closure_check,
    find_product_in_kernel,
    is_entanglement_witness,
    reduce_2xn,
    two_qubit_block_positive,
)
from .separability import BipartitionRankReport, npt_rank_bound_check, rank_pt_all_bipartitions
from .slocc import SloccClass, classify, pt_equivariance_check, random_local_invertible, strong_inequivalence

__version__ = "0.1.0"
