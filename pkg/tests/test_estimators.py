import math
import os

import numpy as np
import pytest

from weibias import (
    CensoredSample,
    CorrectionOvershootError,
    InsufficientDataError,
    NoSolutionError,
    SingularityError,
    WeibullParams,
    apply_censoring,
    bias_censored,
    bias_complete,
    fit_ml,
    fit_mlc,
    fit_mmle,
    fit_ross,
    lambda_from_shape,
    load_recidivism_subsample,
    load_sample,
    load_type1_voltages,
    load_type2_voltages,
    ml_score,
    mlc_score,
    sample,
    scale_bias_factors,
    shape_bias_factor,
)
from weibias.estimators import SHAPE_BIAS_CONST

from oracles import bisect_root, gamma_deriv_quad, grid_golden_shape

FULL_RECIDIVISM = os.path.join(os.path.dirname(__file__), "data", "recidivism_full.csv")


def _random_censored(rng, n=30, k=1.5, lam=1.0, p=0.6):
    raw = sample(WeibullParams(k, lam), n, rng)
    c = lam * (-math.log1p(-p)) ** (1.0 / k)
    s = apply_censoring(raw, c)
    return s if s.d >= 2 else _random_censored(rng, n, k, lam, p)


class TestFitMl:
    def test_type1_voltages(self):
        rep = fit_ml(load_type1_voltages())
        assert rep.params.shape_k == pytest.approx(9.38, abs=0.01)
        assert rep.params.scale_lambda == pytest.approx(47.78, abs=0.01)
        assert rep.converged

    def test_type2_voltages(self):
        rep = fit_ml(load_type2_voltages())
        assert rep.params.shape_k == pytest.approx(9.14, abs=0.01)
        assert rep.params.scale_lambda == pytest.approx(59.12, abs=0.01)

    def test_recidivism_subsample(self):
        rep = fit_ml(load_recidivism_subsample())
        assert rep.params.shape_k == pytest.approx(1.72, abs=0.01)

    def test_small_sample_against_grid_oracle(self):
        rep = fit_ml(CensoredSample.complete([1.0, 2.0, 3.0]))
        # frozen from the grid + golden-section likelihood maximizer
        assert rep.params.shape_k == pytest.approx(2.738573238598, abs=1e-6)
        assert rep.params.scale_lambda == pytest.approx(2.258586254160, abs=1e-6)

    def test_grid_oracle_agreement_100_samples(self):
        rng = np.random.default_rng(2024)
        for _ in range(100):
            n = int(rng.integers(5, 60))
            k = float(rng.uniform(0.3, 12.0))
            lam = float(rng.uniform(0.2, 5.0))
            s = sample(WeibullParams(k, lam), n, rng)
            rep = fit_ml(s)
            assert rep.params.shape_k == pytest.approx(
                grid_golden_shape(s.values), abs=1e-6, rel=1e-6)

    def test_identical_values_degenerate(self):
        with pytest.raises(NoSolutionError):
            fit_ml(CensoredSample.complete([2.0, 2.0, 2.0]))

    def test_all_censored_degenerate(self):
        s = CensoredSample(values=[1.0, 1.0], indicators=[0, 0], censor_time=1.0)
        with pytest.raises(NoSolutionError):
            fit_ml(s)

    def test_single_point_complete_rejected(self):
        with pytest.raises(InsufficientDataError):
            fit_ml(CensoredSample.complete([1.0]))

    def test_censored_single_event_works(self):
        s = CensoredSample(values=[0.6, 2.0, 2.0], indicators=[1, 0, 0], censor_time=2.0)
        rep = fit_ml(s)
        assert rep.params.shape_k > 0.0 and rep.converged

    def test_residual_below_tolerance(self):
        rep = fit_ml(load_type1_voltages())
        assert abs(ml_score(load_type1_voltages(), rep.params.shape_k)) * rep.params.shape_k <= 1e-8

    def test_scale_from_shape_consistency(self):
        s = load_type2_voltages()
        rep = fit_ml(s)
        assert rep.params.scale_lambda == pytest.approx(
            lambda_from_shape(s, rep.params.shape_k), rel=1e-14)


class TestFitRoss:
    def test_factor_small_n(self):
        s = sample(WeibullParams(1.0, 1.0), 10, np.random.default_rng(1))
        ml = fit_ml(s)
        ross = fit_ross(s)
        assert ross.params.shape_k / ml.params.shape_k == pytest.approx(8.0 / 9.32, rel=1e-12)

    def test_factor_value_at_unit_shape(self):
        assert 8.0 / 9.32 == pytest.approx(0.85837, abs=1e-5)

    def test_large_n_factor_vanishes(self):
        s = sample(WeibullParams(2.0, 1.0), 1_000_000, np.random.default_rng(5))
        ml = fit_ml(s)
        ross = fit_ross(s)
        assert abs(ross.params.shape_k / ml.params.shape_k - 1.0) <= 2e-6

    def test_type1_value(self):
        ml = fit_ml(load_type1_voltages())
        ross = fit_ross(load_type1_voltages())
        assert ross.params.shape_k == pytest.approx(18.0 / 19.32 * ml.params.shape_k, rel=1e-12)

    def test_censored_unsupported(self):
        with pytest.raises(InsufficientDataError):
            fit_ross(_random_censored(np.random.default_rng(9)))


class TestFitMlc:
    def test_three_point_sample_vs_bisection_oracle(self):
        values = [1.0, math.e, math.e**2]
        s = CensoredSample.complete(values)
        rep = fit_mlc(s)
        oracle = bisect_root(lambda k: mlc_score(s, k), 1e-3, 1e3)
        assert rep.params.shape_k == pytest.approx(oracle, rel=1e-9)
        assert rep.params.shape_k == pytest.approx(0.737678293310, abs=1e-6)

    def test_single_event_precondition(self):
        s = CensoredSample(values=[0.6, 2.0, 2.0], indicators=[1, 0, 0], censor_time=2.0)
        with pytest.raises(InsufficientDataError):
            fit_mlc(s)

    def test_complete_needs_three(self):
        with pytest.raises(InsufficientDataError):
            fit_mlc(CensoredSample.complete([1.0, 2.0]))

    def test_large_sample_agrees_with_ml(self):
        s = sample(WeibullParams(1.3, 1.0), 1_000_000, np.random.default_rng(17))
        assert abs(fit_mlc(s).params.shape_k - fit_ml(s).params.shape_k) <= 1e-4


class TestBiasComplete:
    def test_shape_bias_at_unit(self):
        adj = bias_complete(WeibullParams(1.0, 1.0), 10)
        assert adj.bias_k == pytest.approx(SHAPE_BIAS_CONST / 10.0, rel=1e-15)
        assert adj.bias_k == pytest.approx(0.13795, abs=1e-5)

    def test_scale_bias_matches_rounded_constants(self):
        adj = bias_complete(WeibullParams(1.0, 1.0), 10)
        assert adj.bias_lambda == pytest.approx(0.5543 / 10.0 - 0.3698 / 10.0, abs=2e-4)

    def test_scaling_structure(self):
        base = bias_complete(WeibullParams(1.0, 1.0), 10)
        assert bias_complete(WeibullParams(3.0, 1.0), 10).bias_k == pytest.approx(
            3.0 * base.bias_k, rel=1e-14)
        assert bias_complete(WeibullParams(1.0, 1.0), 40).bias_k == pytest.approx(
            base.bias_k / 4.0, rel=1e-14)


class TestBiasCensored:
    def test_complete_limit(self):
        assert shape_bias_factor(1.0 - 1e-12) == pytest.approx(1.3795, abs=1e-3)

    def test_blowup_towards_full_censoring(self):
        assert shape_bias_factor(0.01) > shape_bias_factor(0.1) > shape_bias_factor(0.3)

    def test_frozen_half_value(self):
        # composed from quadrature-oracle gamma_j at z_c = log 2
        assert shape_bias_factor(0.5) == pytest.approx(3.51277586471753486, rel=1e-10)

    def test_oracle_composition_at_half(self):
        z = math.log(2.0)
        g1, g2, g3 = (gamma_deriv_quad(j, z) for j in (1, 2, 3))
        expected = (-3 * (2 * g1 + g2) * g1 * 0.5 + (6 * g2 + g3) * 0.25 + 2 * g1**3) / (
            2 * (g1 * g1 - g2 * 0.5) ** 2)
        assert shape_bias_factor(0.5) == pytest.approx(expected, rel=1e-10)

    def test_converges_to_complete_bias(self):
        params = WeibullParams(2.0, 1.5)
        censored = bias_censored(params, 25, 1.0 - 1e-10)
        complete = bias_complete(params, 25)
        assert censored.bias_k == pytest.approx(complete.bias_k, rel=1e-6)
        assert censored.bias_lambda == pytest.approx(complete.bias_lambda, rel=1e-6, abs=1e-12)

    @pytest.mark.parametrize("p", [0.0, 1.0, -0.3, 1.5])
    def test_domain(self, p):
        with pytest.raises(ValueError):
            bias_censored(WeibullParams(1.0, 1.0), 10, p)

    def test_singularity_guard_near_zero(self):
        with pytest.raises(SingularityError):
            shape_bias_factor(1e-8)

    def test_positive_on_grid(self):
        for p in np.linspace(0.02, 0.999, 60):
            assert shape_bias_factor(float(p)) > 0.0


class TestFitMmle:
    def test_type1_mmle(self):
        rep = fit_mmle(load_type1_voltages())
        assert rep.params.shape_k == pytest.approx(8.74, abs=0.01)
        assert rep.p_hat is None

    def test_type2_mmle(self):
        rep = fit_mmle(load_type2_voltages())
        assert rep.params.shape_k == pytest.approx(8.51, abs=0.01)

    def test_complete_arithmetic(self):
        ml = fit_ml(load_type1_voltages())
        rep = fit_mmle(load_type1_voltages())
        assert rep.params.shape_k == pytest.approx(
            ml.params.shape_k * (1.0 - SHAPE_BIAS_CONST / 20.0), rel=1e-12)

    @pytest.mark.parametrize("plugin,expected_p", [("model", 0.249632), ("d_over_n", 0.25)])
    def test_recidivism_subsample_plugins(self, plugin, expected_p):
        s = load_recidivism_subsample()
        rep = fit_mmle(s, p_plugin=plugin)
        assert rep.p_hat == pytest.approx(expected_p, abs=1e-6)
        # wiring check: k_tilde = k_ML (1 - f(p_hat)/n) with f composed from
        # the quadrature-oracle gamma_j
        ml = fit_ml(s)
        z = -math.log1p(-rep.p_hat)
        g1, g2, g3 = (gamma_deriv_quad(j, z) for j in (1, 2, 3))
        f = (-3 * (2 * g1 + g2) * g1 * rep.p_hat + (6 * g2 + g3) * rep.p_hat**2 + 2 * g1**3) / (
            2 * (g1 * g1 - g2 * rep.p_hat) ** 2)
        assert rep.params.shape_k == pytest.approx(
            ml.params.shape_k * (1.0 - f / s.n), rel=1e-9)

    def test_recidivism_subsample_values(self):
        # faithful first-order corrections at both plug-ins (see ledger: the
        # often-quoted 1.39 for this subsample matches MLC, not this formula)
        assert fit_mmle(load_recidivism_subsample(), "model").params.shape_k == pytest.approx(
            1.0705, abs=0.002)
        assert fit_mmle(load_recidivism_subsample(), "d_over_n").params.shape_k == pytest.approx(
            1.0715, abs=0.002)

    def test_shrinks_shape_always(self):
        rng = np.random.default_rng(77)
        for _ in range(40):
            s = _random_censored(rng, n=25, k=float(rng.uniform(0.5, 8.0)), p=float(rng.uniform(0.3, 0.95)))
            ml = fit_ml(s)
            mm = fit_mmle(s)
            assert mm.params.shape_k < ml.params.shape_k
            assert 0.0 < mm.p_hat <= 1.0

    def test_overshoot_error(self):
        # two events just under a distant censoring time: tiny p_hat makes the
        # correction factor f/n exceed 1
        s = CensoredSample(values=[1.0, 1.11, 40.0, 40.0, 40.0],
                           indicators=[1, 1, 0, 0, 0], censor_time=40.0)
        with pytest.raises(CorrectionOvershootError):
            fit_mmle(s)

    def test_bad_plugin_name(self):
        with pytest.raises(ValueError):
            fit_mmle(load_recidivism_subsample(), p_plugin="true")

    @pytest.mark.skipif(not os.path.exists(FULL_RECIDIVISM),
                        reason="full recidivism data not bundled; place it at tests/data/recidivism_full.csv")
    def test_full_recidivism(self):
        s = load_sample(FULL_RECIDIVISM)
        ml = fit_ml(s)
        assert ml.params.shape_k == pytest.approx(1.37, abs=0.01)
        assert ml.params.scale_lambda == pytest.approx(123.68, abs=0.05)
        mm = fit_mmle(s)
        assert mm.params.shape_k == pytest.approx(1.35, abs=0.01)


class TestScoreProperties:
    def test_root_bracketing_sign(self):
        rng = np.random.default_rng(31)
        for _ in range(25):
            s = _random_censored(rng, n=int(rng.integers(8, 50)),
                                 k=float(rng.uniform(0.5, 6.0)), p=float(rng.uniform(0.4, 0.95)))
            k_ml = fit_ml(s).params.shape_k
            assert ml_score(s, k_ml * (1 - 1e-3)) > 0.0 > ml_score(s, k_ml * (1 + 1e-3))
            if s.d >= 2:
                k_mlc = fit_mlc(s).params.shape_k
                assert mlc_score(s, k_mlc * (1 - 1e-3)) > 0.0 > mlc_score(s, k_mlc * (1 + 1e-3))

    @pytest.mark.parametrize("scale", [0.01, 7.0, 2300.0])
    def test_scale_invariance_of_shape(self, scale):
        rng = np.random.default_rng(13)
        s = _random_censored(rng, n=35, k=2.2, p=0.7)
        scaled = CensoredSample(values=s.values * scale, indicators=s.indicators,
                                censor_time=s.censor_time * scale)
        for fit in (fit_ml, fit_mlc, fit_mmle):
            a = fit(s)
            b = fit(scaled)
            assert b.params.shape_k == pytest.approx(a.params.shape_k, rel=1e-8)
            assert b.params.scale_lambda == pytest.approx(a.params.scale_lambda * scale, rel=1e-8)
