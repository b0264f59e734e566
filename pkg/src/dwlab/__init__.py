"""dwlab: dyadic sequence-space machinery with matrix weights.

Finite-window realizations of Besov- and Triebel-Lizorkin-type sequence
quasi-norms with matrix weights, reducing operators, almost-diagonal
operator envelopes, band-limited and wavelet transforms, and a
verification harness that checks the norm equivalences and boundedness
thresholds numerically.
"""

from .dyadic import (
    CubeId,
    DyadicError,
    Truncation,
    ancestor,
    children,
    contains_cube,
    cube_geometry,
    enumerate_cubes,
    parent,
    separation,
)
from .growth import GrowthFn, class_constant, is_almost_increasing, make_growth
from .weights import (
    MatrixWeight,
    QuadratureSpec,
    apinf_characteristic,
    constant_weight,
    diag_power_weight,
    doubling_exponent,
    estimate_dimensions,
    hermitian_eig,
    identity_weight,
    matrix_power,
    op_norm,
    power_weight,
)
from .reducing import (
    ReducingFamily,
    build_family,
    doubling_orders,
    identity_family,
    reduce_cube,
)
from .seqspace import (
    CoeffSeq,
    SpaceParams,
    build_besov_counterexample,
    build_random,
    build_single_point,
    finfty_norm,
    la_norm,
    seq_norm,
    single_point_oracle,
)
from .adops import (
    ADParams,
    MoleculeThresholds,
    Thresholds,
    ad_apply,
    ad_entry,
    ad_thresholds,
    compose_check,
    majorant,
    molecule_thresholds,
)
from .transforms import (
    GridFunction,
    LPWindow,
    WaveletCoeffs,
    band_project,
    build_lp_window,
    direct_weighted_field,
    dwt,
    dwt_analyze,
    dwt_synthesize,
    peetre_maximal,
    phi_analyze,
    phi_synthesize,
    phi_transform,
    square_functions,
    wavelet_gram_check,
)
from .harness import EXPERIMENTS, Report, emit_report, run_all, run_experiment

__version__ = "0.1.0"
