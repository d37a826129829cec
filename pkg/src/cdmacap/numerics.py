"""Numerically stable scalar kernels shared by every capacity bound.

All internal arithmetic is done in natural log (nats); conversion to bits
happens exactly once, where a bound value is assembled.  The hazards this
module guards against:

* binomial coefficients up to C(10^6, k)            -> log-gamma,
* sums of wildly scaled nonnegative terms            -> log-sum-exp,
* standard-normal expectations (tanh, ln-cosh, ...)  -> Gauss-Hermite,
* integrands with many narrow peaks                  -> adaptive Simpson
                                                        with a depth cap.

Every function here is pure; there is no shared mutable state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial.hermite import hermgauss
from scipy.special import gammaln, logsumexp

from .errors import DomainError, QuadratureError

LN2 = math.log(2.0)
LOG2E = 1.0 / LN2

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class LogNum:
    """A nonnegative real stored as its natural log; -inf encodes zero.

    Sums of LogNum values must go through :func:`log_sum_exp`; the magnitude
    itself is only exponentiated on explicit request via :meth:`value`.
    """

    log_value: float

    @classmethod
    def from_value(cls, value: float) -> "LogNum":
        if value < 0.0:
            raise DomainError(f"LogNum requires a nonnegative value, got {value}")
        return cls(-math.inf) if value == 0.0 else cls(math.log(value))

    def value(self) -> float:
        return math.exp(self.log_value)

    def __mul__(self, other: "LogNum") -> "LogNum":
        return LogNum(self.log_value + other.log_value)

    def __pow__(self, exponent: float) -> "LogNum":
        if self.log_value == -math.inf and exponent == 0:
            return LogNum(0.0)
        return LogNum(self.log_value * exponent)


LOG_ZERO = LogNum(-math.inf)
LOG_ONE = LogNum(0.0)


@dataclass(frozen=True)
class QuadratureConfig:
    """Shared knobs for the two quadrature engines."""

    hermite_order: int = 61
    adaptive_tol: float = 1e-10
    max_depth: int = 50

    def __post_init__(self):
        if self.hermite_order < 2:
            raise DomainError("hermite_order must be >= 2")
        if self.adaptive_tol <= 0.0:
            raise DomainError("adaptive_tol must be positive")
        if self.max_depth < 1:
            raise DomainError("max_depth must be >= 1")


DEFAULT_QUADRATURE = QuadratureConfig()


def log_binomial(n: int, k: int) -> LogNum:
    """ln C(n, k) via log-gamma.

    Exact zero for k in {0, n}, and exactly symmetric under k -> n - k
    (the two gamma terms commute).
    """
    if n < 0 or k < 0:
        raise DomainError(f"log_binomial requires nonnegative arguments, got ({n}, {k})")
    if k > n:
        raise DomainError(f"log_binomial requires k <= n, got ({n}, {k})")
    return LogNum(math.lgamma(n + 1) - (math.lgamma(k + 1) + math.lgamma(n - k + 1)))


def log_binomial_table(n: int) -> np.ndarray:
    """Vector of ln C(n, k) for k = 0..n."""
    if n < 0:
        raise DomainError(f"log_binomial_table requires n >= 0, got {n}")
    k = np.arange(n + 1)
    return gammaln(n + 1.0) - gammaln(k + 1.0) - gammaln(n - k + 1.0)


def log_sum_exp(terms: Sequence[LogNum]) -> LogNum:
    """ln sum(exp(t_i)) over a nonempty sequence of LogNum.

    The shifted exponentials are sorted before accumulation, so the result is
    exactly permutation-invariant (required for deterministic parallel
    assembly of bound sums).
    """
    logs = np.array([t.log_value for t in terms], dtype=float)
    if logs.size == 0:
        raise DomainError("log_sum_exp requires a nonempty sequence")
    if logs.size == 1:
        return LogNum(float(logs[0]))
    top = float(logs.max())
    if top == -math.inf:
        return LOG_ZERO
    shifted = np.sort(np.exp(logs - top))
    return LogNum(top + math.log(float(shifted.sum())))


def log_sum_exp_arr(values: np.ndarray, axis=None):
    """Array log-sum-exp (fixed traversal order, -inf blocks allowed)."""
    return logsumexp(values, axis=axis)


def binary_entropy(t: float) -> float:
    """Binary entropy H(t) in bits, with 0 log 0 := 0."""
    if t < 0.0 or t > 1.0:
        raise DomainError(f"binary_entropy requires t in [0, 1], got {t}")
    if t == 0.0 or t == 1.0:
        return 0.0
    return -(t * math.log2(t) + (1.0 - t) * math.log2(1.0 - t))


def binary_entropy_vec(t: np.ndarray) -> np.ndarray:
    """Vectorized binary entropy in bits over t in [0, 1]."""
    t = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        h = -(t * np.log2(t) + (1.0 - t) * np.log2(1.0 - t))
    return np.where((t == 0.0) | (t == 1.0), 0.0, h)


def q_function(x: float) -> float:
    """Gaussian tail probability P(Z > x) for Z ~ N(0, 1)."""
    return 0.5 * math.erfc(x / math.sqrt(2.0))


@lru_cache(maxsize=32)
def _hermite_rule(order: int):
    # hermgauss targets integral exp(-x^2) g(x) dx; substitute z = sqrt(2) x
    # so that sum(w) = 1 and sum(w * f(z)) approximates E[f(Z)], Z ~ N(0,1).
    x, w = hermgauss(order)
    return np.sqrt(2.0) * x, w / math.sqrt(math.pi)


def hermite_expectation(g: Callable[[np.ndarray], np.ndarray],
                        cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """E[g(Z)] for Z ~ N(0,1) by Gauss-Hermite quadrature.

    Exact for polynomials of degree < 2 * hermite_order.  `g` may be a numpy
    ufunc-style callable or a plain scalar function.
    """
    z, w = _hermite_rule(cfg.hermite_order)
    try:
        vals = np.asarray(g(z), dtype=float)
        if vals.ndim == 0:
            vals = np.full_like(z, float(vals))
        elif vals.shape != z.shape:
            raise ValueError
    except (TypeError, ValueError):
        vals = np.array([float(g(float(zi))) for zi in z])
    return float(np.dot(w, vals))


def adaptive_quad(f: Callable[[float], float], a: float, b: float,
                  cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Integral of f over [a, b] by adaptive Simpson within cfg.adaptive_tol.

    Raises QuadratureError (carrying the best partial estimate) if any
    subinterval still misses its tolerance share at cfg.max_depth.
    """
    if not a < b:
        raise DomainError(f"adaptive_quad requires a < b, got [{a}, {b}]")

    def simpson(lo, hi, flo, fmid, fhi):
        return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi)

    mid = 0.5 * (a + b)
    fa, fm, fb = f(a), f(mid), f(b)
    whole = simpson(a, b, fa, fm, fb)

    total = 0.0
    failed = False
    # Stack entries: (a, b, fa, fm, fb, S(a,b), tol, depth).
    stack = [(a, b, fa, fm, fb, whole, cfg.adaptive_tol, 0)]
    while stack:
        lo, hi, flo, fmid, fhi, s, tol, depth = stack.pop()
        m1 = 0.5 * (lo + hi)
        lm = 0.5 * (lo + m1)
        rm = 0.5 * (m1 + hi)
        flm, frm = f(lm), f(rm)
        s_left = simpson(lo, m1, flo, flm, fmid)
        s_right = simpson(m1, hi, fmid, frm, fhi)
        err = s_left + s_right - s
        if abs(err) <= 15.0 * tol:
            total += s_left + s_right + err / 15.0
        elif depth >= cfg.max_depth:
            total += s_left + s_right + err / 15.0
            failed = True
        else:
            half = 0.5 * tol
            stack.append((lo, m1, flo, flm, fmid, s_left, half, depth + 1))
            stack.append((m1, hi, fmid, frm, fhi, s_right, half, depth + 1))
    if failed:
        raise QuadratureError(
            f"adaptive Simpson hit max_depth={cfg.max_depth} on [{a}, {b}]",
            partial=total,
        )
    return total


def golden_section_max(f: Callable[[float], float], lo: float, hi: float,
                       iters: int) -> tuple[float, float]:
    """Golden-section refinement of a 1-D maximum on [lo, hi].

    Returns the best (x, f(x)) among all evaluated points; callers keep
    whatever coarse-grid optimum they already hold and take the max.
    """
    if hi < lo:
        lo, hi = hi, lo
    c = hi - _INV_PHI * (hi - lo)
    d = lo + _INV_PHI * (hi - lo)
    fc, fd = f(c), f(d)
    best_x, best_f = (c, fc) if fc >= fd else (d, fd)
    for _ in range(iters):
        if fc > fd:
            hi, d, fd = d, c, fc
            c = hi - _INV_PHI * (hi - lo)
            fc = f(c)
            if fc > best_f:
                best_x, best_f = c, fc
        else:
            lo, c, fc = c, d, fd
            d = lo + _INV_PHI * (hi - lo)
            fd = f(d)
            if fd > best_f:
                best_x, best_f = d, fd
    return best_x, best_f
