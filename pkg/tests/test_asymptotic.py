"""Large-system limits: saddle searches, the replica fixed point, orderings."""

import math

import pytest

from cdmacap.asymptotic import (
    LoadPoint,
    SaddleSearch,
    asympt_lower_gaussian,
    asympt_upper,
    d1_approx,
    noiseless_limit,
    physical_branch,
    tanaka_capacity,
)
from cdmacap.errors import DomainError, UnsupportedNoiseError
from cdmacap.finite_bounds import SystemSize, noisy_lower_envelope
from cdmacap.noise import EbN0, NoiseModel
from cdmacap.oracle import bpsk_reference


class TestLoadPoint:
    def test_exactly_one_regime(self):
        with pytest.raises(DomainError):
            LoadPoint()
        with pytest.raises(DomainError):
            LoadPoint(beta=1.0, zeta=1.0)
        with pytest.raises(DomainError):
            LoadPoint(beta=-1.0)

    def test_constructors(self):
        assert LoadPoint.from_beta(2.0).beta == 2.0
        assert LoadPoint.from_zeta(0.5).zeta == 0.5


class TestNoiselessLimit:
    def test_below_threshold(self):
        assert noiseless_limit(0.25) == 1.0

    def test_boundary(self):
        assert noiseless_limit(0.5) == 1.0

    def test_closed_form(self):
        assert noiseless_limit(1.0) == 0.5

    def test_domain(self):
        with pytest.raises(DomainError):
            noiseless_limit(0.0)

    def test_lower_and_upper_limits_coincide(self):
        # The same expression serves as lower and upper limit at every zeta.
        for zeta in (0.1, 0.5, 0.7, 2.0, 10.0):
            assert noiseless_limit(zeta) == min(1.0, 1.0 / (2.0 * zeta))


class TestAsymptoticLower:
    def test_range(self):
        value = asympt_lower_gaussian(LoadPoint.from_beta(2.0), 0.25)
        assert 0.0 <= value <= 1.0

    def test_infinite_noise_vacuous(self):
        assert asympt_lower_gaussian(LoadPoint.from_beta(2.0), 1e9) == pytest.approx(
            0.0, abs=1e-6)

    def test_needs_beta(self):
        with pytest.raises(DomainError):
            asympt_lower_gaussian(LoadPoint.from_zeta(1.0), 0.5)

    def test_dominated_by_single_sup_expression(self):
        for beta in (0.5, 1.0, 2.0, 4.0, 8.0):
            for sigma2 in (0.1, 0.5, 2.0):
                load = LoadPoint.from_beta(beta)
                assert asympt_lower_gaussian(load, sigma2) <= d1_approx(load, sigma2) + 1e-6


class TestD1Approx:
    def test_infinite_noise(self):
        assert d1_approx(LoadPoint.from_beta(2.0), 1e9) == pytest.approx(0.0, abs=1e-6)

    def test_extreme_overload(self):
        assert d1_approx(LoadPoint.from_beta(1e9), 1.0) == pytest.approx(0.0, abs=1e-6)

    def test_close_to_saddle_value(self):
        for beta in (0.5, 2.0, 8.0):
            for db in (0.0, 8.0, 16.0):
                load = LoadPoint.from_beta(beta)
                sigma2 = EbN0(db).sigma2
                assert abs(d1_approx(load, sigma2)
                           - asympt_lower_gaussian(load, sigma2)) < 0.05


class TestAsymptoticUpper:
    def test_gaussian_closed_form(self):
        value = asympt_upper(LoadPoint.from_beta(1.0), NoiseModel.gaussian(0.5))
        assert value == pytest.approx(0.5 * math.log2(3.0), abs=1e-12)
        assert value == pytest.approx(0.792481, abs=1e-6)

    def test_cap_at_one(self):
        assert asympt_upper(LoadPoint.from_beta(0.1), NoiseModel.gaussian(0.05)) == 1.0

    def test_low_load_limit(self):
        value = asympt_upper(LoadPoint.from_beta(1e-6), NoiseModel.gaussian(1.0))
        assert value == pytest.approx(math.log2(math.e) / 2.0, abs=1e-5)

    def test_noiseless_rejected(self):
        with pytest.raises(UnsupportedNoiseError):
            asympt_upper(LoadPoint.from_beta(1.0), NoiseModel.noiseless())

    def test_uniform_entropy_sandwich(self):
        # h(N + sqrt(beta) Z) lies between the Gaussian part alone and the
        # max-entropy Gaussian of matched total variance.
        beta = 2.0
        a = 1.0
        value = asympt_upper(LoadPoint.from_beta(beta), NoiseModel.uniform(a))
        h_noise = math.log2(2.0 * a)
        lo = (0.5 * math.log2(2 * math.pi * math.e * beta) - h_noise) / beta
        hi = (0.5 * math.log2(2 * math.pi * math.e * (beta + a * a / 3.0)) - h_noise) / beta
        assert lo - 1e-9 <= value <= hi + 1e-9

    def test_outputs_in_unit_interval(self):
        for beta in (0.5, 1.0, 2.0, 4.0, 8.0):
            for db in (0.0, 4.0, 8.0, 12.0, 16.0):
                load = LoadPoint.from_beta(beta)
                model = NoiseModel.gaussian(EbN0(db).sigma2)
                assert 0.0 <= asympt_upper(load, model) <= 1.0
                assert 0.0 <= asympt_lower_gaussian(load, EbN0(db).sigma2) <= 1.0


class TestAsymptoticSandwich:
    def test_lower_below_upper_on_grid(self):
        for beta in (0.5, 1.0, 2.0, 4.0, 8.0):
            for db in (0.0, 4.0, 8.0, 12.0, 16.0):
                sigma2 = EbN0(db).sigma2
                load = LoadPoint.from_beta(beta)
                lower = asympt_lower_gaussian(load, sigma2)
                upper = asympt_upper(load, NoiseModel.gaussian(sigma2))
                assert lower <= upper + 1e-9


class TestTanaka:
    def test_vanishing_snr_limit(self):
        solution = tanaka_capacity(LoadPoint.from_beta(1.0), 1e6)
        assert solution.converged
        assert solution.m_rep < 1e-3
        closed = 0.5 * math.log2(1.0 + 1e-6)
        assert solution.c_per_user == pytest.approx(closed, abs=1e-6)

    def test_lambda_consistency(self):
        solution = tanaka_capacity(LoadPoint.from_beta(2.0), 0.25)
        expected = 1.0 / (0.25 + 2.0 * (1.0 - solution.m_rep))
        assert solution.lam == pytest.approx(expected, abs=1e-10)

    def test_overlap_in_unit_interval(self):
        for beta in (0.5, 2.0, 8.0):
            for db in (0.0, 8.0, 16.0):
                solution = tanaka_capacity(LoadPoint.from_beta(beta), EbN0(db).sigma2)
                assert 0.0 <= solution.m_rep < 1.0
                branch = solution.second_branch
                if branch is not None:
                    assert 0.0 <= branch.m_rep < 1.0

    def test_high_load_ratio_approaches_one(self):
        ratios = []
        for beta in (8.0, 32.0, 128.0):
            load = LoadPoint.from_beta(beta)
            solution = tanaka_capacity(load, 0.25)
            upper = asympt_upper(load, NoiseModel.gaussian(0.25))
            ratios.append(solution.c_per_user / upper)
        assert ratios[0] < ratios[1] < ratios[2]
        assert abs(ratios[2] - 1.0) < 0.05

    def test_upper_bounds_orthogonal_baseline(self):
        for beta in (0.5, 1.0):
            for db in (0.0, 4.0, 8.0):
                sigma2 = EbN0(db).sigma2
                solution = tanaka_capacity(LoadPoint.from_beta(beta), sigma2)
                assert solution.c_per_user >= bpsk_reference(sigma2) - 0.01

    def test_between_asymptotic_bounds_at_high_load(self):
        for beta in (2.0, 4.0, 8.0):
            for db in (4.0, 8.0, 16.0):
                sigma2 = EbN0(db).sigma2
                load = LoadPoint.from_beta(beta)
                value = physical_branch(tanaka_capacity(load, sigma2)).c_per_user
                lower = asympt_lower_gaussian(load, sigma2)
                upper = asympt_upper(load, NoiseModel.gaussian(sigma2))
                assert lower <= value <= upper + 0.02

    def test_physical_branch_feasible(self):
        # Coexistence point: the low-overlap branch evaluates above 1 bit.
        solution = tanaka_capacity(LoadPoint.from_beta(2.0), EbN0(8.0).sigma2)
        assert solution.second_branch is not None
        assert solution.c_per_user > 1.0
        assert physical_branch(solution).c_per_user <= 1.0 + 1e-9

    def test_domain(self):
        with pytest.raises(DomainError):
            tanaka_capacity(LoadPoint.from_zeta(1.0), 0.5)
        with pytest.raises(DomainError):
            tanaka_capacity(LoadPoint.from_beta(1.0), -0.5)


class TestFiniteToAsymptotic:
    def test_envelope_approaches_limit(self):
        db = 8.0
        sigma2 = EbN0(db).sigma2
        limit = asympt_lower_gaussian(LoadPoint.from_beta(2.0), sigma2)
        model = NoiseModel.gaussian(sigma2)
        gaps = [abs(noisy_lower_envelope(SystemSize(m, 2 * m), model).bits_per_user - limit)
                for m in (8, 16, 32, 64)]
        assert gaps[-1] < 0.02
        assert gaps[-1] <= gaps[0]


class TestSaddleSearch:
    def test_validation(self):
        with pytest.raises(DomainError):
            SaddleSearch(t_grid_size=2)
