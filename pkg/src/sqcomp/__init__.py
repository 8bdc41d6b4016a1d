"""Unambiguous comparison of two squeezed vacuum states.

Truncated Fock-space construction of the interferometer output, ideal and
loss-smeared photon-counting POVMs, the conditional probabilities and
reliability of the comparison, a symplectic covariance-matrix cross-check,
and brute-force oracles. The hot kernels run compiled (Cython) when the
extension is available and fall back to numpy otherwise; see
``sqcomp.backend_name``.
"""

from ._backend import backend_name
from .comparator import (
    ComparisonResult,
    Efficiency,
    NoErrorReport,
    PovmElement,
    ideal_povm,
    overlap,
    p_eta_same,
    p_two_hypotheses,
    p_universal,
    p_zero,
    p_zero_eta,
    reliability,
    single_detector_povm,
    small_r_approx,
    smeared_povm,
    verify_no_error,
)
from .errors import (
    CostGuardExceeded,
    DegenerateDenominator,
    PhaseMismatch,
    SeriesDivergence,
    SqcompError,
    TruncationTooSmall,
)
from .fock import (
    FockOperator,
    JointFockState,
    SqueezeParam,
    Truncation,
    joint_prob,
    output_state,
    required_cutoff,
    squeeze_matrix,
    squeeze_tanh,
    squeezed_vacuum,
    twb_state,
)

__version__ = "0.1.0"

__all__ = [
    "backend_name",
    "ComparisonResult",
    "Efficiency",
    "NoErrorReport",
    "PovmElement",
    "ideal_povm",
    "overlap",
    "p_eta_same",
    "p_two_hypotheses",
    "p_universal",
    "p_zero",
    "p_zero_eta",
    "reliability",
    "single_detector_povm",
    "small_r_approx",
    "smeared_povm",
    "verify_no_error",
    "CostGuardExceeded",
    "DegenerateDenominator",
    "PhaseMismatch",
    "SeriesDivergence",
    "SqcompError",
    "TruncationTooSmall",
    "FockOperator",
    "JointFockState",
    "SqueezeParam",
    "Truncation",
    "joint_prob",
    "output_state",
    "required_cutoff",
    "squeeze_matrix",
    "squeeze_tanh",
    "squeezed_vacuum",
    "twb_state",
    "__version__",
]
