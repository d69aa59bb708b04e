"""Simultaneous confidence bands for convex median curves via sign tests."""

from .approx import (
    ApproxBand,
    SlopeGrid,
    approx_lower,
    approx_upper,
    band_approx,
    default_slope_grid,
)
from .calibration import (
    DEFAULT_N_SIMS,
    KappaRequest,
    KappaTable,
    get_kappa,
    interpolated_kappa,
    kappa_from_sample,
    simulate_null_sample,
)
from .core import (
    beta_coeff,
    gamma_penalty,
    kernel_psi,
    local_stat,
    max_scale,
    sign_vector,
    t_naught,
    t_naught_batch,
    t_two_sided,
    underline_sign,
)
from .exact import (
    BandResult,
    InfeasibleError,
    band_exact,
    feasibility_check,
    lower_exact,
    upper_exact,
)
from .experiments import (
    CoverageReport,
    SimConfig,
    coverage_study,
    gen_sim_data,
    true_curve,
    width_scaling_study,
)
from .geometry import (
    CandidateLine,
    SortedDataset,
    TangentParams,
    enumerate_candidates,
    eval_candidate,
    eval_tangent_pair,
    greatest_convex_minorant,
    least_concave_majorant,
    tangent_params,
)
from .scan import FlipChain, ScanResult, ScanState, scan

__version__ = "1.0.0"
