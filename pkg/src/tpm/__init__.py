"""Tensor power method toolkit.

Symmetric tensors in decomposition form, equiangular frames, power
iteration with robustness certificates, complete planar eigenpair
enumeration, basin-of-attraction rasters, and seeded reproductions of the
associated numerical experiments.
"""

from . import errors
from .basins import BasinGrid, alpha_orbit, alpha_step, render_basins, sector_check
from .eigen2d import EigenPair, all_eigenpairs_2d, cs_count, eigen_form
from .experiments import (
    ConvergenceGrid,
    PerturbationReport,
    allones_tensor,
    convergence_table,
    mb_tables,
    perturbation_study,
)
from .frames import (
    Frame,
    cube_diagonals,
    es_r4_6lines,
    icosahedron,
    kernel_basis,
    kernel_condition_holds,
    lines16_r6,
    mercedes_benz,
    regular_simplex,
    validate_frame,
    welch_bound,
)
from .linalg import PolyC, nullspace, poly_roots, sym_eigen
from .power import PowerRunResult, run, step
from .robustness import (
    BoundChain,
    RobustnessCertificate,
    bound_allones_etf,
    bound_general,
    bound_kernel_case,
    certify,
    gamma,
    jacobian_at,
    spectral_radius_sym,
)
from .rng import RngSpec, SplitMix64, derive_seed, sample_sphere
from .tensor import (
    DenseTensor,
    SymTensor,
    contract_mat,
    contract_vec,
    eigen_residual,
    make_sym_tensor,
    tensor_from_json,
    tensor_to_json,
    to_dense,
)

__version__ = "0.1.0"
