"""Sum-capacity bounds for synchronous binary-input, binary-signature CDMA.

Finite-size lower/upper bounds, their large-system limits, the replica
fixed point, and brute-force oracles that cross-validate all of them, plus a
CLI that sweeps parameters and emits figure-ready CSV.
"""

from .asymptotic import (
    LoadPoint,
    SaddleSearch,
    TanakaSolution,
    asympt_lower_gaussian,
    asympt_upper,
    d1_approx,
    noiseless_limit,
    tanaka_capacity,
)
from .errors import (
    CapacityToolError,
    ConvergenceError,
    DomainError,
    QuadratureError,
    ResourceLimitError,
    UnsupportedNoiseError,
)
from .finite_bounds import (
    BoundValue,
    GammaSearch,
    SystemSize,
    conjectured_upper,
    noiseless_lower,
    noisy_lower_envelope,
    noisy_lower_gamma,
)
from .noise import EbN0, NoiseModel, density, diff_entropy, g_gamma, g_gamma_quad, mixture_entropy
from .numerics import (
    LogNum,
    QuadratureConfig,
    adaptive_quad,
    binary_entropy,
    hermite_expectation,
    log_binomial,
    log_sum_exp,
    q_function,
)
from .oracle import (
    ExactCapacity,
    McEstimate,
    SignatureMatrix,
    bpsk_reference,
    exact_noiseless_capacity,
    mc_mutual_information,
    output_entropy,
)

__version__ = "0.1.0"
