"""Noise models: densities, entropies, the correlation functional, mixtures."""

import math

import numpy as np
import pytest

from cdmacap.errors import DomainError, UnsupportedNoiseError
from cdmacap.finite_bounds import SystemSize, conjectured_upper
from cdmacap.noise import (
    EbN0,
    NoiseModel,
    density,
    diff_entropy,
    g_gamma,
    g_gamma_quad,
    mixture_entropy,
)
from cdmacap.numerics import adaptive_quad
from cdmacap.oracle import SignatureMatrix, mc_mutual_information


class TestNoiseModel:
    def test_parameter_validation(self):
        with pytest.raises(DomainError):
            NoiseModel.gaussian(0.0)
        with pytest.raises(DomainError):
            NoiseModel.uniform(-1.0)
        with pytest.raises(DomainError):
            NoiseModel("delta")

    def test_flag_grammar(self):
        assert NoiseModel.from_flag("none").is_noiseless
        assert NoiseModel.from_flag("gaussian:2.5").sigma2 == 2.5
        assert NoiseModel.from_flag("uniform:0.25").a == 0.25
        with pytest.raises(DomainError):
            NoiseModel.from_flag("gaussian:abc")
        with pytest.raises(DomainError):
            NoiseModel.from_flag("laplace:1")

    def test_flag_round_trip(self):
        for flag in ("none", "gaussian:0.5", "uniform:1"):
            assert NoiseModel.from_flag(flag).label == flag

    def test_ebn0_conversion(self):
        # 0 dB -> sigma2 = 1/2; each +10 dB divides the variance by 10.
        assert EbN0(0.0).sigma2 == pytest.approx(0.5, rel=1e-15)
        assert EbN0(10.0).sigma2 == pytest.approx(0.05, rel=1e-15)
        assert EbN0(8.0).to_model().kind == "gaussian"


class TestDensity:
    def test_gaussian_at_origin(self):
        assert density(NoiseModel.gaussian(1.0), 0.0) == pytest.approx(0.398942, abs=1e-6)

    def test_uniform_inside_and_outside(self):
        u = NoiseModel.uniform(1.0)
        assert density(u, 0.5) == 0.5
        assert density(u, 2.0) == 0.0

    def test_noiseless_unsupported(self):
        with pytest.raises(UnsupportedNoiseError):
            density(NoiseModel.noiseless(), 0.0)

    def test_normalization_by_quadrature(self):
        rng = np.random.default_rng(10)
        for _ in range(5):
            g = NoiseModel.gaussian(float(rng.uniform(0.05, 4.0)))
            total = adaptive_quad(lambda x: density(g, x),
                                  -12 * math.sqrt(g.sigma2), 12 * math.sqrt(g.sigma2))
            assert total == pytest.approx(1.0, abs=1e-9)
            u = NoiseModel.uniform(float(rng.uniform(0.1, 3.0)))
            total = adaptive_quad(lambda x: density(u, x), -u.a, u.a)
            assert total == pytest.approx(1.0, abs=1e-9)

    def test_symmetry(self):
        rng = np.random.default_rng(11)
        for model in (NoiseModel.gaussian(0.7), NoiseModel.uniform(1.3)):
            for x in rng.uniform(-3, 3, size=20):
                assert density(model, float(x)) == density(model, float(-x))


class TestDiffEntropy:
    def test_unit_gaussian(self):
        assert diff_entropy(NoiseModel.gaussian(1.0)) == pytest.approx(2.047095, abs=1e-6)

    def test_unit_width_uniform(self):
        assert diff_entropy(NoiseModel.uniform(0.5)) == 0.0

    def test_uniform_width_two(self):
        assert diff_entropy(NoiseModel.uniform(1.0)) == 1.0

    def test_noiseless_unsupported(self):
        with pytest.raises(UnsupportedNoiseError):
            diff_entropy(NoiseModel.noiseless())


class TestGGamma:
    def test_gamma_zero_is_one(self):
        for model in (NoiseModel.gaussian(0.3), NoiseModel.uniform(2.0)):
            for t in (0.0, 1.5, -4.0):
                assert g_gamma(model, t, 0.0) == 1.0

    def test_gaussian_product_integral(self):
        got = g_gamma(NoiseModel.gaussian(1.0), 0.0, 1.0)
        assert got == pytest.approx(1.0 / (2.0 * math.sqrt(math.pi)), rel=1e-12)

    def test_uniform_zero_overlap(self):
        assert g_gamma(NoiseModel.uniform(1.0), 2.0, 1.0) == 0.0

    def test_negative_gamma_rejected(self):
        with pytest.raises(DomainError):
            g_gamma(NoiseModel.gaussian(1.0), 0.0, -0.5)

    def test_noiseless_unsupported(self):
        with pytest.raises(UnsupportedNoiseError):
            g_gamma(NoiseModel.noiseless(), 0.0, 1.0)

    def test_quadrature_matches_closed_forms(self):
        rng = np.random.default_rng(12)
        for _ in range(100):
            if rng.uniform() < 0.5:
                model = NoiseModel.gaussian(float(rng.uniform(0.05, 4.0)))
            else:
                model = NoiseModel.uniform(float(rng.uniform(0.1, 3.0)))
            t = float(rng.uniform(-5.0, 5.0))
            gamma = float(rng.uniform(0.0, 10.0))
            assert g_gamma_quad(model, t, gamma) == pytest.approx(
                g_gamma(model, t, gamma), abs=1e-8)

    def test_symmetric_in_t(self):
        model = NoiseModel.gaussian(0.8)
        assert g_gamma(model, 1.7, 2.0) == g_gamma(model, -1.7, 2.0)


class TestMixtureEntropy:
    def test_noiseless_single_user(self):
        for m in (1, 5, 64):
            assert mixture_entropy(NoiseModel.noiseless(), m, 1) == pytest.approx(1.0, abs=1e-12)

    def test_noiseless_two_users(self):
        # Binomial(2, 1/2) point masses {1/4, 1/2, 1/4}.
        assert mixture_entropy(NoiseModel.noiseless(), 3, 2) == pytest.approx(1.5, abs=1e-12)

    def test_noiseless_independent_of_m(self):
        values = {mixture_entropy(NoiseModel.noiseless(), m, 9) for m in (1, 2, 17)}
        assert len(values) == 1

    def test_gaussian_wide_noise_approaches_noise_entropy(self):
        model = NoiseModel.gaussian(1e6)
        gap = mixture_entropy(model, 4, 6) - diff_entropy(model)
        assert 0.0 <= gap < 1e-3

    def test_uniform_exact_matches_quadrature(self):
        rng = np.random.default_rng(13)
        for _ in range(5):
            m = int(rng.integers(1, 17))
            n = int(rng.integers(1, 13))
            a = float(rng.uniform(0.1, 3.0))
            model = NoiseModel.uniform(a)
            exact = mixture_entropy(model, m, n)
            quad = _uniform_mixture_entropy_by_quadrature(model, m, n)
            assert exact == pytest.approx(quad, abs=1e-6)

    def test_single_user_gaussian_matches_mc_mutual_information(self):
        # With one chip and one user the mixture-entropy gain IS the uniform
        # input mutual information; the Monte Carlo estimator is independent.
        model = NoiseModel.gaussian(1.0)
        gain = mixture_entropy(model, 1, 1) - diff_entropy(model)
        est = mc_mutual_information(SignatureMatrix.from_array([[1]]), model,
                                    150_000, seed=99)
        assert abs(gain - est.mean) <= 3.0 * est.std_error

    def test_invalid_sizes(self):
        with pytest.raises(DomainError):
            mixture_entropy(NoiseModel.gaussian(1.0), 0, 3)


def _uniform_mixture_entropy_by_quadrature(model, m, n):
    """Independent route: integrate -f log2 f between the known breakpoints."""
    means = (2.0 * np.arange(n + 1) - n) / math.sqrt(m)
    weights = np.exp(_log_weights(n))
    breaks = np.unique(np.concatenate([means - model.a, means + model.a]))

    def f_tilde(x):
        inside = np.abs(x - means) <= model.a
        return float(weights[inside].sum() / (2.0 * model.a))

    def integrand(x):
        p = f_tilde(x)
        return 0.0 if p <= 0.0 else -p * math.log2(p)

    total = 0.0
    for lo, hi in zip(breaks[:-1], breaks[1:]):
        width = hi - lo
        if width > 1e-12:
            # Nudge the endpoints inward: f is constant on the open segment
            # but jumps exactly at the breakpoints where Simpson samples.
            pad = 1e-9 * width
            total += adaptive_quad(integrand, float(lo + pad), float(hi - pad))
            total += (integrand(float(lo + 2 * pad)) + integrand(float(hi - 2 * pad))) * pad
    return total


def _log_weights(n):
    from cdmacap.numerics import LN2, log_binomial_table
    return log_binomial_table(n) - n * LN2


class TestUpperBoundConsistency:
    def test_noiseless_upper_uses_discrete_entropy(self):
        bound = conjectured_upper(SystemSize(1, 2), NoiseModel.noiseless())
        assert bound.bits_total == pytest.approx(1.5, abs=1e-12)
        assert bound.kind == "true_upper"
