"""Spectral stability of solitary waves of viscous St. Venant and Jin-Xin models."""

from .bloch import (
    PeriodicExtension,
    constant_extension,
    dynamic_spectrum_max_real,
    essential_spectrum_of_wave,
    hill_spectrum,
    periodic_extension,
)
from .contour import (
    RealRoot,
    SpectralContour,
    WindingResult,
    adaptive_winding,
    build_semicircle,
    real_axis_scan,
)
from .errors import NumericalError, RollwaveError, UnreliableResultError, ValidationError
from .evans import (
    EvansEvaluation,
    EvansSystem,
    SplittingReport,
    SplittingStatus,
    StabilityIndex,
    evans_derivative_sign_at_zero,
    evans_eval,
    evans_real,
    kato_basis,
    limiting_matrix,
    stability_index,
)
from .evolve import EvolutionState, MetastabilityDiagnostics, cn_step, run_experiment
from .hifreq import (
    HfBound,
    HfCoefficients,
    ThetaBlocks,
    hf_coefficients,
    hf_convergence_study,
    hf_radius,
    theta_blocks,
)
from .model import (
    EquilibriumClass,
    EquilibriumInfo,
    ModelSpec,
    WaveParams,
    dispersion_roots,
    equilibrium_info,
    essential_spectrum_curve,
    subcharacteristic_ok,
)
from .profile import (
    ProfileSolution,
    find_equilibria,
    find_homoclinic_speed,
    jinxin_quadrature,
    separation,
    separation_speed_derivative,
    solve_homoclinic,
)

__all__ = [
    "ModelSpec",
    "WaveParams",
    "EquilibriumClass",
    "EquilibriumInfo",
    "dispersion_roots",
    "equilibrium_info",
    "essential_spectrum_curve",
    "subcharacteristic_ok",
    "ProfileSolution",
    "find_equilibria",
    "find_homoclinic_speed",
    "jinxin_quadrature",
    "separation",
    "separation_speed_derivative",
    "solve_homoclinic",
    "EvansSystem",
    "EvansEvaluation",
    "SplittingReport",
    "SplittingStatus",
    "StabilityIndex",
    "evans_eval",
    "evans_real",
    "evans_derivative_sign_at_zero",
    "kato_basis",
    "limiting_matrix",
    "stability_index",
    "SpectralContour",
    "WindingResult",
    "RealRoot",
    "adaptive_winding",
    "build_semicircle",
    "real_axis_scan",
    "ThetaBlocks",
    "HfCoefficients",
    "HfBound",
    "theta_blocks",
    "hf_coefficients",
    "hf_radius",
    "hf_convergence_study",
    "PeriodicExtension",
    "periodic_extension",
    "constant_extension",
    "hill_spectrum",
    "dynamic_spectrum_max_real",
    "essential_spectrum_of_wave",
    "EvolutionState",
    "MetastabilityDiagnostics",
    "cn_step",
    "run_experiment",
    "RollwaveError",
    "ValidationError",
    "NumericalError",
    "UnreliableResultError",
]

__version__ = "0.1.0"
