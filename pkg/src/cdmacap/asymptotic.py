"""Large-system limits of the capacity bounds (bits per user).

With n, m -> infinity at fixed load beta = n/m, the binomial sums of the
finite bounds concentrate and the lower bound becomes a saddle problem

    1 - inf_gamma sup_t [ H(t) + (gamma*log2(e) - log2(1 + (gamma/s2)(s2 + 4*t*beta))) / (2*beta) ]

for Gaussian noise of variance s2.  A Donsker-Varadhan argument caps how much
any member of the underlying family can improve on the single-sup expression
implemented by `d1_approx`, which is therefore both a dominance check and a
cheap approximation.  The upper bound degenerates to the Shannon-like
min(1, log2(1 + beta/s2)/(2*beta)) (Gaussian) or a convolution entropy
(uniform).  In the noiseless regime n/(m log2 n) -> zeta the lower and upper
limits coincide at min(1, 1/(2*zeta)).

`tanaka_capacity` evaluates the replica-symmetric fixed point

    lam = 1/(s2 + beta(1 - m_rep)),   m_rep = E tanh(sqrt(lam) Z + lam)

by damped iteration from both ends of [0, 1); where two distinct fixed points
exist both are reported and no selection rule is imposed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, DomainError, UnsupportedNoiseError
from .finite_bounds import GammaSearch
from .noise import GAUSSIAN, NoiseModel, diff_entropy
from .numerics import (
    DEFAULT_QUADRATURE,
    LN2,
    LOG2E,
    QuadratureConfig,
    adaptive_quad,
    binary_entropy,
    binary_entropy_vec,
    golden_section_max,
    hermite_expectation,
    q_function,
)

_TANAKA_DAMPING = 0.5
_TANAKA_TOL = 1e-12
_TANAKA_MAX_ITER = 10_000


@dataclass(frozen=True)
class LoadPoint:
    """Asymptotic operating point: exactly one of beta = n/m or zeta = n/(m log2 n)."""

    beta: float | None = None
    zeta: float | None = None

    def __post_init__(self):
        if (self.beta is None) == (self.zeta is None):
            raise DomainError("LoadPoint requires exactly one of beta, zeta")
        value = self.beta if self.beta is not None else self.zeta
        if value <= 0.0:
            raise DomainError(f"load must be positive, got {value}")

    @classmethod
    def from_beta(cls, beta: float) -> "LoadPoint":
        return cls(beta=beta)

    @classmethod
    def from_zeta(cls, zeta: float) -> "LoadPoint":
        return cls(zeta=zeta)


@dataclass(frozen=True)
class SaddleSearch:
    """Grids for the sup over t in [0,1] and the inf over gamma."""

    t_grid_size: int = 2049
    gamma: GammaSearch = field(default_factory=GammaSearch)
    refine_iters: int = 40

    def __post_init__(self):
        if self.t_grid_size < 3:
            raise DomainError("t_grid_size must be >= 3")


@dataclass(frozen=True)
class TanakaSolution:
    """Replica fixed point: lam, overlap m_rep, capacity per user (bits)."""

    lam: float
    m_rep: float
    c_per_user: float
    iterations: int
    converged: bool
    second_branch: "TanakaSolution | None" = None


def noiseless_limit(zeta: float) -> float:
    """Per-user capacity limit min(1, 1/(2 zeta)) in the noiseless regime.

    Lower and upper limits coincide here, so the value is exact.
    """
    if zeta <= 0.0:
        raise DomainError(f"noiseless_limit requires zeta > 0, got {zeta}")
    return min(1.0, 1.0 / (2.0 * zeta))


def _sup_over_t(vec_f, scalar_f, search: SaddleSearch) -> float:
    """Max of a bracket over t in [0,1]: dense grid plus golden refinement.

    Endpoints are always on the grid; the sup frequently sits at t = 0 or at
    a point where the entropy slope is unbounded, so derivative-based search
    is avoided on purpose.
    """
    t = np.linspace(0.0, 1.0, search.t_grid_size)
    values = vec_f(t)
    i = int(np.argmax(values))
    best = float(values[i])
    lo = float(t[max(i - 1, 0)])
    hi = float(t[min(i + 1, len(t) - 1)])
    if hi > lo:
        _, refined = golden_section_max(scalar_f, lo, hi, search.refine_iters)
        best = max(best, refined)
    return best


def asympt_lower_gaussian(load: LoadPoint, sigma2: float,
                          search: SaddleSearch | None = None) -> float:
    """Gaussian asymptotic lower bound via the (gamma, t) saddle search."""
    if load.beta is None:
        raise DomainError("asympt_lower_gaussian needs a beta load point")
    if sigma2 <= 0.0:
        raise DomainError(f"sigma2 must be positive, got {sigma2}")
    beta = load.beta
    search = search or SaddleSearch()

    def sup_for(gamma: float) -> float:
        def vec(t):
            return binary_entropy_vec(t) + (
                gamma * LOG2E - np.log2(1.0 + (gamma / sigma2) * (sigma2 + 4.0 * t * beta))
            ) / (2.0 * beta)

        def scalar(t):
            return binary_entropy(t) + (
                gamma * LOG2E - math.log2(1.0 + (gamma / sigma2) * (sigma2 + 4.0 * t * beta))
            ) / (2.0 * beta)

        return _sup_over_t(vec, scalar, search)

    grid = np.asarray(search.gamma.grid, dtype=float)
    sups = np.array([sup_for(g) for g in grid])
    i = int(np.argmin(sups))
    best = float(sups[i])
    lo = math.log(grid[max(i - 1, 0)])
    hi = math.log(grid[min(i + 1, len(grid) - 1)])
    if hi > lo:
        _, neg = golden_section_max(lambda x: -sup_for(math.exp(x)), lo, hi,
                                    search.refine_iters)
        best = min(best, -neg)
    return min(max(1.0 - best, 0.0), 1.0)


def d1_approx(load: LoadPoint, sigma2: float,
              search: SaddleSearch | None = None) -> float:
    """Single-sup Donsker-Varadhan expression: dominates the saddle bound.

    Cheap to evaluate and, in practice, within a few hundredths of a bit of
    the full saddle search.
    """
    if load.beta is None:
        raise DomainError("d1_approx needs a beta load point")
    if sigma2 <= 0.0:
        raise DomainError(f"sigma2 must be positive, got {sigma2}")
    beta = load.beta
    search = search or SaddleSearch()
    coeff = LOG2E / (2.0 * beta)

    def vec(t):
        r = 4.0 * t * beta
        return binary_entropy_vec(t) + coeff * (r / (sigma2 + r) - np.log1p(r / sigma2))

    def scalar(t):
        r = 4.0 * t * beta
        return binary_entropy(t) + coeff * (r / (sigma2 + r) - math.log1p(r / sigma2))

    sup = _sup_over_t(vec, scalar, search)
    return min(max(1.0 - sup, 0.0), 1.0)


def asympt_upper(load: LoadPoint, model: NoiseModel,
                 cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Asymptotic conjectured upper bound min(1, (h(N1 + sqrt(beta) Z) - h(N1)) / beta).

    Gaussian noise reduces to the closed form log2(1 + beta/sigma2)/(2 beta);
    uniform noise needs one quadrature of the Gaussian-smoothed box density
    [Q((x-a)/sqrt(beta)) - Q((x+a)/sqrt(beta))] / (2a).
    """
    if load.beta is None:
        raise DomainError("asympt_upper needs a beta load point")
    beta = load.beta
    if model.is_noiseless:
        raise UnsupportedNoiseError("asympt_upper is defined for noisy models; "
                                    "use noiseless_limit in the zeta regime")
    if model.kind == GAUSSIAN:
        value = math.log2(1.0 + beta / model.sigma2) / (2.0 * beta)
        return min(1.0, value)

    a = model.a
    root_beta = math.sqrt(beta)

    def smoothed(x: float) -> float:
        return (q_function((x - a) / root_beta) - q_function((x + a) / root_beta)) / (2.0 * a)

    def integrand(x: float) -> float:
        p = smoothed(x)
        return 0.0 if p <= 0.0 else -p * math.log2(p)

    half_width = a + 12.0 * root_beta
    h_out = adaptive_quad(integrand, -half_width, half_width, cfg)
    value = (h_out - diff_entropy(model)) / beta
    return min(1.0, max(0.0, value))


def _ln_cosh(x: np.ndarray) -> np.ndarray:
    """ln cosh(x), stable for large |x|."""
    ax = np.abs(x)
    return ax + np.log1p(np.exp(-2.0 * ax)) - LN2


def _tanaka_map(m_rep: float, beta: float, sigma2: float,
                cfg: QuadratureConfig) -> tuple[float, float]:
    lam = 1.0 / (sigma2 + beta * (1.0 - m_rep))
    root = math.sqrt(lam)
    new_m = hermite_expectation(lambda z: np.tanh(root * z + lam), cfg)
    # The overlap is strictly below 1, but at very high SNR the quadrature
    # can round it up; keep it a hair under so lam stays finite.
    return min(max(new_m, 0.0), 1.0 - 1e-16), lam


def _tanaka_solve(m0: float, beta: float, sigma2: float,
                  cfg: QuadratureConfig) -> tuple[float, int, bool]:
    m_rep = m0
    for iteration in range(1, _TANAKA_MAX_ITER + 1):
        target, _ = _tanaka_map(m_rep, beta, sigma2, cfg)
        m_next = (1.0 - _TANAKA_DAMPING) * m_rep + _TANAKA_DAMPING * target
        delta = abs(m_next - m_rep)
        m_rep = m_next
        if delta < _TANAKA_TOL:
            return m_rep, iteration, True
    return m_rep, _TANAKA_MAX_ITER, False


def _tanaka_solution(m_rep: float, iterations: int, converged: bool,
                     beta: float, sigma2: float,
                     cfg: QuadratureConfig) -> TanakaSolution:
    lam = 1.0 / (sigma2 + beta * (1.0 - m_rep))
    root = math.sqrt(lam)
    e_ln_cosh = hermite_expectation(lambda z: _ln_cosh(root * z + lam), cfg)
    g = 0.5 * lam * (1.0 + m_rep) - e_ln_cosh
    c_nats = math.log1p(beta * (1.0 - m_rep) / sigma2) / (2.0 * beta) + g
    return TanakaSolution(lam=lam, m_rep=m_rep, c_per_user=c_nats / LN2,
                          iterations=iterations, converged=converged)


def physical_branch(solution: TanakaSolution) -> TanakaSolution:
    """The reported branch whose value is a feasible binary-input capacity.

    Per-user capacity cannot exceed 1 bit for +-1 inputs, yet in the
    coexistence region the low-overlap replica branch can evaluate above 1.
    This helper prefers the headline branch and falls back to the alternate
    one only when the headline is infeasible; it applies no free-energy
    comparison.
    """
    if solution.c_per_user <= 1.0 + 1e-9 or solution.second_branch is None:
        return solution
    alt = solution.second_branch
    return alt if alt.c_per_user < solution.c_per_user else solution


def tanaka_capacity(load: LoadPoint, sigma2: float,
                    cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> TanakaSolution:
    """Replica-symmetric fixed point, iterated from both ends of [0, 1).

    Damped iteration (factor 0.5) runs from m0 = 0 and m0 = 1 - 1e-6.  If the
    two starts disagree by more than 1e-6 the channel sits in a coexistence
    region; both solutions are reported, with the m0 = 0 branch as the
    headline value.  No free-energy selection rule is applied.
    """
    if load.beta is None:
        raise DomainError("tanaka_capacity needs a beta load point")
    if sigma2 <= 0.0:
        raise DomainError(f"sigma2 must be positive, got {sigma2}")
    beta = load.beta

    low = _tanaka_solve(0.0, beta, sigma2, cfg)
    high = _tanaka_solve(1.0 - 1e-6, beta, sigma2, cfg)
    if not (low[2] or high[2]):
        raise ConvergenceError(
            "replica fixed point did not converge from either start",
            diagnostics={"beta": beta, "sigma2": sigma2,
                         "m_from_low": low[0], "m_from_high": high[0],
                         "iterations": _TANAKA_MAX_ITER},
        )

    primary, secondary = (low, high) if low[2] else (high, low)
    solution = _tanaka_solution(primary[0], primary[1], primary[2], beta, sigma2, cfg)
    if secondary[2] and abs(secondary[0] - primary[0]) > 1e-6:
        branch = _tanaka_solution(secondary[0], secondary[1], secondary[2],
                                  beta, sigma2, cfg)
        solution = TanakaSolution(lam=solution.lam, m_rep=solution.m_rep,
                                  c_per_user=solution.c_per_user,
                                  iterations=solution.iterations,
                                  converged=solution.converged,
                                  second_branch=branch)
    return solution
