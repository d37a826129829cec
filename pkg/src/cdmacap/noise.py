"""Additive-noise models and the noise functionals the capacity bounds consume.

Three families are supported: noiseless, Gaussian(sigma^2) and Uniform on
[-a, a].  Each is symmetric about zero, which the mixture-entropy upper bound
requires.  The per-chip channel output is a binomial lattice of means
(2j - n)/sqrt(m) convolved with the noise density, so everything downstream
needs only four functionals of the model: the density f, its differential
entropy h(f), the correlation integral g_gamma(t) = int f(t+x) f(x)^gamma dx,
and the entropy of the binomial-mixture output density.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, UnsupportedNoiseError
from .numerics import (
    DEFAULT_QUADRATURE,
    LN2,
    QuadratureConfig,
    adaptive_quad,
    log_binomial_table,
    log_sum_exp_arr,
)

NOISELESS = "none"
GAUSSIAN = "gaussian"
UNIFORM = "uniform"


@dataclass(frozen=True)
class NoiseModel:
    """Tagged choice of per-chip noise distribution (immutable)."""

    kind: str
    sigma2: float | None = None  # Gaussian variance
    a: float | None = None       # Uniform half-width

    def __post_init__(self):
        if self.kind == NOISELESS:
            if self.sigma2 is not None or self.a is not None:
                raise DomainError("noiseless model takes no parameters")
        elif self.kind == GAUSSIAN:
            if self.sigma2 is None or self.sigma2 <= 0.0:
                raise DomainError(f"gaussian noise requires sigma2 > 0, got {self.sigma2}")
        elif self.kind == UNIFORM:
            if self.a is None or self.a <= 0.0:
                raise DomainError(f"uniform noise requires a > 0, got {self.a}")
        else:
            raise DomainError(f"unknown noise kind {self.kind!r}")

    @classmethod
    def noiseless(cls) -> "NoiseModel":
        return cls(NOISELESS)

    @classmethod
    def gaussian(cls, sigma2: float) -> "NoiseModel":
        return cls(GAUSSIAN, sigma2=sigma2)

    @classmethod
    def uniform(cls, a: float) -> "NoiseModel":
        return cls(UNIFORM, a=a)

    @classmethod
    def from_flag(cls, text: str) -> "NoiseModel":
        """Parse the CLI grammar: none | gaussian:<sigma2> | uniform:<a>."""
        name, _, arg = text.partition(":")
        name = name.strip().lower()
        if name == NOISELESS:
            if arg:
                raise DomainError("noise 'none' takes no parameter")
            return cls.noiseless()
        if name in (GAUSSIAN, UNIFORM):
            try:
                value = float(arg)
            except ValueError:
                raise DomainError(f"noise spec {text!r} needs a numeric parameter") from None
            return cls.gaussian(value) if name == GAUSSIAN else cls.uniform(value)
        raise DomainError(f"unknown noise spec {text!r}")

    @property
    def label(self) -> str:
        if self.kind == GAUSSIAN:
            return f"gaussian:{self.sigma2:g}"
        if self.kind == UNIFORM:
            return f"uniform:{self.a:g}"
        return NOISELESS

    @property
    def is_noiseless(self) -> bool:
        return self.kind == NOISELESS


@dataclass(frozen=True)
class EbN0:
    """Per-bit SNR in dB; maps to Gaussian variance via sigma2 = 1/(2 * 10^(db/10))."""

    db: float

    @property
    def sigma2(self) -> float:
        return 1.0 / (2.0 * 10.0 ** (self.db / 10.0))

    def to_model(self) -> NoiseModel:
        return NoiseModel.gaussian(self.sigma2)


def _require_noisy(model: NoiseModel, op: str) -> None:
    if model.is_noiseless:
        raise UnsupportedNoiseError(f"{op} is undefined for the noiseless model")


def density(model: NoiseModel, x: float) -> float:
    """Noise pdf f(x)."""
    _require_noisy(model, "density")
    if model.kind == GAUSSIAN:
        s2 = model.sigma2
        return math.exp(-x * x / (2.0 * s2)) / math.sqrt(2.0 * math.pi * s2)
    a = model.a
    return 1.0 / (2.0 * a) if abs(x) <= a else 0.0


def diff_entropy(model: NoiseModel) -> float:
    """Differential entropy h(f) in bits (closed form)."""
    _require_noisy(model, "diff_entropy")
    if model.kind == GAUSSIAN:
        return 0.5 * math.log2(2.0 * math.pi * math.e * model.sigma2)
    return math.log2(2.0 * model.a)


def g_gamma(model: NoiseModel, t: float, gamma: float) -> float:
    """Correlation functional g_gamma(t) = int f(t+x) f(x)^gamma dx, closed form.

    gamma = 0 returns exactly 1 for every model (the integral reduces to
    int f = 1).
    """
    _require_noisy(model, "g_gamma")
    if gamma < 0.0:
        raise DomainError(f"g_gamma requires gamma >= 0, got {gamma}")
    if gamma == 0.0:
        return 1.0
    if model.kind == GAUSSIAN:
        s2 = model.sigma2
        return (
            (2.0 * math.pi * s2) ** (-gamma / 2.0)
            / math.sqrt(1.0 + gamma)
            * math.exp(-gamma * t * t / (2.0 * s2 * (1.0 + gamma)))
        )
    a = model.a
    return (2.0 * a) ** (-gamma) * max(0.0, 1.0 - abs(t) / (2.0 * a))


def g_gamma_quad(model: NoiseModel, t: float, gamma: float,
                 cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """g_gamma by adaptive quadrature of the raw density product.

    Cross-check path for the closed forms; never used on the fast path.  The
    absolute tolerance is rescaled to the integrand's peak so the result is
    accurate in a relative sense even when the integral is very small.
    """
    _require_noisy(model, "g_gamma_quad")
    if gamma < 0.0:
        raise DomainError(f"g_gamma_quad requires gamma >= 0, got {gamma}")
    if gamma == 0.0:
        return 1.0

    if model.kind == UNIFORM:
        a = model.a
        lo = max(-a, -a - t)
        hi = min(a, a - t)
        if hi <= lo:
            return 0.0
        integrand = lambda x: density(model, t + x) * density(model, x) ** gamma
        # Keep Simpson's endpoint samples strictly inside the support overlap:
        # t + (a - t) can round a hair past the edge and fake a jump there.
        pad = 1e-9 * (hi - lo)
        body = adaptive_quad(integrand, lo + pad, hi - pad, cfg)
        return body + pad * (integrand(lo + 2 * pad) + integrand(hi - 2 * pad))

    # Gaussian: the product is itself a Gaussian bump centered at
    # -t/(1+gamma) with standard deviation sigma/sqrt(1+gamma).
    sigma = math.sqrt(model.sigma2)
    center = -t / (1.0 + gamma)
    width = sigma / math.sqrt(1.0 + gamma)
    lo, hi = center - 12.0 * width, center + 12.0 * width

    def integrand(x: float) -> float:
        fx = density(model, x)
        return density(model, t + x) * fx ** gamma if fx > 0.0 else 0.0

    peak = max(integrand(center), 1e-300)
    scaled = QuadratureConfig(
        hermite_order=cfg.hermite_order,
        adaptive_tol=cfg.adaptive_tol * peak * width,
        max_depth=cfg.max_depth,
    )
    return adaptive_quad(integrand, lo, hi, scaled)


def _binomial_weights_log(n: int) -> np.ndarray:
    """ln of C(n, j) / 2^n for j = 0..n."""
    return log_binomial_table(n) - n * LN2


def _binomial_shannon_entropy(n: int) -> float:
    """Shannon entropy, in bits, of Binomial(n, 1/2) (accumulated in log space)."""
    log_p = _binomial_weights_log(n)
    # p * log2 p computed as exp(ln p) * ln p / ln 2; underflowed tails drop out.
    return float(-np.sum(np.exp(log_p) * log_p) / LN2)


def mixture_entropy(model: NoiseModel, m: int, n: int,
                    cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Entropy of the per-chip output density in bits.

    The output of one chip is the lattice sum of n equiprobable +-1/sqrt(m)
    contributions plus one noise draw, i.e. a 2^-n-binomial mixture of n+1
    shifted noise densities.

    * Noiseless: Shannon entropy of Binomial(n, 1/2) (independent of m).
    * Gaussian:  differential entropy by adaptive quadrature, integrated
      segment-by-segment between adjacent mixture means so the n+1 narrow
      peaks cannot be stepped over.
    * Uniform:   exact; the mixture is piecewise constant, so the entropy is
      accumulated over the sorted breakpoints (2j - n)/sqrt(m) +- a.
    """
    if m < 1 or n < 1:
        raise DomainError(f"mixture_entropy requires m, n >= 1, got ({m}, {n})")
    if model.is_noiseless:
        return _binomial_shannon_entropy(n)

    means = (2.0 * np.arange(n + 1) - n) / math.sqrt(m)
    log_w = _binomial_weights_log(n)

    if model.kind == UNIFORM:
        a = model.a
        weights = np.exp(log_w)
        breaks = np.unique(np.concatenate([means - a, means + a]))
        mids = 0.5 * (breaks[:-1] + breaks[1:])
        lengths = np.diff(breaks)
        covered = np.abs(mids[:, None] - means[None, :]) < a
        dens = covered @ weights / (2.0 * a)
        mask = dens > 0.0
        return float(-np.sum(dens[mask] * lengths[mask] * np.log2(dens[mask])))

    sigma2 = model.sigma2
    sigma = math.sqrt(sigma2)
    norm = math.log(sigma * math.sqrt(2.0 * math.pi))

    def integrand(x: float) -> float:
        d = x - means
        log_f = log_sum_exp_arr(log_w - d * d / (2.0 * sigma2)) - norm
        p = math.exp(log_f)
        return 0.0 if p == 0.0 else -p * log_f / LN2

    lo = float(means[0]) - 10.0 * sigma
    hi = float(means[-1]) + 10.0 * sigma
    edges = np.concatenate([[lo], means, [hi]])
    return float(sum(adaptive_quad(integrand, float(a_), float(b_), cfg)
                     for a_, b_ in zip(edges[:-1], edges[1:])))
