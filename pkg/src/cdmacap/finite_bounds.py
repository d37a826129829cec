"""Finite-size (m, n) sum-capacity bounds for binary-signature CDMA.

Lower bounds come from averaging the uniform-input mutual information over
random +-1 signature matrices; the max over matrices can only be larger.  For
the noiseless channel this gives

    n - log2( sum_{j<=n/2} C(n, 2j) * (C(2j, j) / 4^j)^m )

and for additive noise a one-parameter family indexed by gamma > 0 whose
terms involve g_gamma evaluated on the interference lattice (4j - 2k)/sqrt(m).
The supremum of the family over gamma (the envelope) is the reported lower
bound.  The conjectured upper bound is m times the per-chip mixture-entropy
gain min(n, m*(h(out) - h(noise))); in the noiseless case it is a true bound.

All binomial-weighted sums accumulate in natural-log space with a fixed term
order; bits conversion happens once, in BoundValue construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np
from scipy.special import gammaln

from .errors import DomainError, UnsupportedNoiseError
from .noise import GAUSSIAN, UNIFORM, NoiseModel, diff_entropy, g_gamma_quad, mixture_entropy
from .numerics import (
    DEFAULT_QUADRATURE,
    LN2,
    QuadratureConfig,
    golden_section_max,
    log_binomial_table,
    log_sum_exp_arr,
)

KIND_LOWER = "lower"
KIND_CONJECTURED_UPPER = "conjectured_upper"
KIND_TRUE_UPPER = "true_upper"
KIND_EXACT = "exact"
KIND_ESTIMATE = "estimate"

EQ6_DERIVED = "derived"   # overlap support:  psi((4j-2k) / (2a sqrt(m)))
EQ6_PRINTED = "printed"   # twice the slope:  psi((4j-2k) / (a sqrt(m)))


@dataclass(frozen=True)
class SystemSize:
    """Finite channel dimensions: m chips per symbol, n users."""

    m: int
    n: int

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise DomainError(f"SystemSize requires m, n >= 1, got ({self.m}, {self.n})")


@dataclass(frozen=True)
class GammaSearch:
    """Grid + golden-section refinement spec for the envelope over gamma."""

    grid: tuple = field(default_factory=lambda: tuple(np.geomspace(1e-4, 1e3, 64)))
    refine_iters: int = 40

    def __post_init__(self):
        if len(self.grid) == 0:
            raise DomainError("gamma grid must be nonempty")
        arr = np.asarray(self.grid, dtype=float)
        if np.any(arr <= 0.0) or np.any(np.diff(arr) <= 0.0):
            raise DomainError("gamma grid must be strictly positive and increasing")


@dataclass(frozen=True)
class BoundValue:
    """A computed bound in bits, clamped to the physical range [0, n].

    The unclamped value is kept in meta["raw_bits_total"]; very noisy or
    heavily overloaded settings can drive the family members negative, where
    the bound is simply vacuous.
    """

    bits_total: float
    bits_per_user: float
    kind: str
    meta: Mapping

    @classmethod
    def build(cls, raw_bits_total: float, size: SystemSize, kind: str, **meta) -> "BoundValue":
        raw = float(raw_bits_total)
        clamped = min(max(raw, 0.0), float(size.n))
        record = {"raw_bits_total": raw, "m": size.m, "n": size.n}
        record.update(meta)
        return cls(clamped, clamped / size.n, kind, record)


def _log_binom_triangle(n: int) -> np.ndarray:
    """(n+1) x (n+1) array of ln C(k, j) for j <= k, -inf above the diagonal."""
    kk = np.arange(n + 1, dtype=float)[:, None]
    jj = np.arange(n + 1, dtype=float)[None, :]
    with np.errstate(invalid="ignore"):
        tri = gammaln(kk + 1.0) - gammaln(jj + 1.0) - gammaln(kk - jj + 1.0)
    return np.where(jj <= kk, tri, -np.inf)


def noiseless_lower(size: SystemSize) -> BoundValue:
    """Random-signature averaging lower bound for the noiseless channel."""
    m, n = size.m, size.n
    j = np.arange(n // 2 + 1)
    log_c_n_2j = log_binomial_table(n)[2 * j]
    # ln( C(2j, j) / 2^(2j) ), the per-chip collision probability of two
    # inputs differing in 2j positions.
    log_collision = gammaln(2.0 * j + 1.0) - 2.0 * gammaln(j + 1.0) - 2.0 * j * LN2
    total = log_sum_exp_arr(log_c_n_2j + m * log_collision)
    raw = n - total / LN2
    return BoundValue.build(raw, size, KIND_LOWER, noise="none")


def _gaussian_family_raw(size: SystemSize, sigma2: float, gamma: float) -> float:
    """Closed-form Gaussian family member, raw bits (may be negative)."""
    m, n = size.m, size.n
    kk = np.arange(n + 1, dtype=float)[:, None]
    jj = np.arange(n + 1, dtype=float)[None, :]
    d = 2.0 * jj - kk
    scale = -2.0 * (gamma / (1.0 + gamma)) / (sigma2 * m)
    inner = (
        _log_binom_triangle(n)
        - kk * LN2
        + scale * d * d
        - 0.5 * math.log1p(gamma)
    )
    per_k = log_sum_exp_arr(inner, axis=1)
    total = log_sum_exp_arr(log_binomial_table(n) + m * per_k)
    return n - m * gamma / (2.0 * LN2) - total / LN2


def _uniform_family_raw(size: SystemSize, a: float, gamma: float, eq6_mode: str) -> float:
    """Uniform-noise family member, raw bits.  gamma cancels; kept for the API."""
    if eq6_mode not in (EQ6_DERIVED, EQ6_PRINTED):
        raise DomainError(f"unknown eq6 mode {eq6_mode!r}")
    m, n = size.m, size.n
    denom = (2.0 * a) if eq6_mode == EQ6_DERIVED else a
    kk = np.arange(n + 1, dtype=float)[:, None]
    jj = np.arange(n + 1, dtype=float)[None, :]
    u = (4.0 * jj - 2.0 * kk) / (denom * math.sqrt(m))
    psi = np.maximum(0.0, 1.0 - np.abs(u))
    with np.errstate(divide="ignore"):
        inner = _log_binom_triangle(n) - kk * LN2 + np.log(psi)
    per_k = log_sum_exp_arr(inner, axis=1)
    total = log_sum_exp_arr(log_binomial_table(n) + m * per_k)
    return n - total / LN2


def _generic_family_raw(size: SystemSize, model: NoiseModel, gamma: float,
                        cfg: QuadratureConfig) -> float:
    """Family member assembled from h(f) and quadrature-evaluated g_gamma.

    Independent cross-check route for the closed forms; g_gamma is evaluated
    numerically at the lattice offsets 2*i/sqrt(m) (it is symmetric in t).
    """
    m, n = size.m, size.n
    sqrt_m = math.sqrt(m)
    log_g = np.empty(n + 1)
    for i in range(n + 1):
        value = g_gamma_quad(model, 2.0 * i / sqrt_m, gamma, cfg)
        log_g[i] = math.log(value) if value > 0.0 else -math.inf
    kk = np.arange(n + 1)[:, None]
    jj = np.arange(n + 1)[None, :]
    # |2j - k| <= n on the valid triangle; cells above the diagonal are -inf.
    idx = np.minimum(np.abs(2 * jj - kk), n)
    inner = _log_binom_triangle(n) - kk * LN2 + log_g[idx]
    per_k = log_sum_exp_arr(inner, axis=1)
    total = log_sum_exp_arr(log_binomial_table(n) + m * per_k)
    return n - m * gamma * diff_entropy(model) - total / LN2


def noisy_lower_gamma(size: SystemSize, model: NoiseModel, gamma: float, *,
                      eq6_mode: str = EQ6_DERIVED, method: str = "closed",
                      cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> BoundValue:
    """One member of the noisy lower-bound family, indexed by gamma > 0.

    gamma = 0 is rejected: it yields the vacuous bound 0 and would put a flat
    spot at the edge of the envelope search.
    """
    if model.is_noiseless:
        raise UnsupportedNoiseError("the gamma family needs a noise density; "
                                    "use noiseless_lower for the noiseless channel")
    if gamma <= 0.0:
        raise DomainError(f"noisy_lower_gamma requires gamma > 0, got {gamma}")

    if method == "generic":
        raw = _generic_family_raw(size, model, gamma, cfg)
    elif method != "closed":
        raise DomainError(f"unknown method {method!r}")
    elif model.kind == GAUSSIAN:
        raw = _gaussian_family_raw(size, model.sigma2, gamma)
    else:
        raw = _uniform_family_raw(size, model.a, gamma, eq6_mode)

    meta = {"gamma": gamma, "noise": model.label, "method": method}
    if model.kind == UNIFORM:
        meta["eq6_mode"] = eq6_mode
    return BoundValue.build(raw, size, KIND_LOWER, **meta)


def noisy_lower_envelope(size: SystemSize, model: NoiseModel,
                         search: GammaSearch | None = None, *,
                         eq6_mode: str = EQ6_DERIVED) -> BoundValue:
    """Supremum of the gamma family: grid scan plus golden-section refinement.

    For uniform noise the family is constant in gamma, so the envelope is any
    member (gamma = 1 is reported).
    """
    if model.is_noiseless:
        raise UnsupportedNoiseError("envelope is defined for noisy models only")
    search = search or GammaSearch()

    if model.kind == UNIFORM:
        member = noisy_lower_gamma(size, model, 1.0, eq6_mode=eq6_mode)
        meta = dict(member.meta)
        raw = meta.pop("raw_bits_total")
        meta.pop("m"), meta.pop("n")
        meta["envelope"] = True
        return BoundValue.build(raw, size, KIND_LOWER, **meta)

    sigma2 = model.sigma2
    objective = lambda log_gamma: _gaussian_family_raw(size, sigma2, math.exp(log_gamma))

    grid = np.asarray(search.grid, dtype=float)
    values = np.array([_gaussian_family_raw(size, sigma2, g) for g in grid])
    best = int(np.argmax(values))
    best_gamma, best_raw = float(grid[best]), float(values[best])

    lo = math.log(grid[max(best - 1, 0)])
    hi = math.log(grid[min(best + 1, len(grid) - 1)])
    if hi > lo:
        x, fx = golden_section_max(objective, lo, hi, search.refine_iters)
        if fx > best_raw:
            best_gamma, best_raw = math.exp(x), fx

    return BoundValue.build(best_raw, size, KIND_LOWER,
                            gamma=best_gamma, envelope=True, noise=model.label)


def conjectured_upper(size: SystemSize, model: NoiseModel,
                      cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> BoundValue:
    """Mixture-entropy upper bound min(n, m*(h(out) - h(noise))).

    Proven for the noiseless channel (reported as true_upper); for noisy
    symmetric densities it rests on the uniform-input conjecture and is
    reported as conjectured_upper.
    """
    m, n = size.m, size.n
    if model.is_noiseless:
        raw = min(float(n), m * mixture_entropy(model, m, n, cfg))
        return BoundValue.build(raw, size, KIND_TRUE_UPPER, noise=model.label)
    gain = mixture_entropy(model, m, n, cfg) - diff_entropy(model)
    raw = min(float(n), m * gain)
    return BoundValue.build(raw, size, KIND_CONJECTURED_UPPER, noise=model.label)
