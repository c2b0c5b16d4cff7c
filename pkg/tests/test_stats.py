import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from compact_rcs.errors import (DegenerateFitError, DomainError, FitFailureError, InsufficientDataError,
                                NoModelError)
from compact_rcs.stats import (FITTING_SCALE, FitResult, ModelRanking, RcsSamples, aic, fit_gev,
                               fit_lognormal, fit_rayleigh, gev_initial_guess, gev_loglik, nelder_mead,
                               ranking_report, select_model)


def gev_sample(rng, xi, mu, sigma, n):
    """Inverse-CDF GEV sampler: F(x) = exp(-(1 + xi z)^(-1/xi))."""
    u = rng.uniform(size=n)
    if abs(xi) < 1e-9:
        return mu - sigma * np.log(-np.log(u))
    return mu + sigma * ((-np.log(u)) ** (-xi) - 1.0) / xi


def rayleigh_density_loglik(x, b):
    return sum(math.log(v / b**2) - v * v / (2 * b * b) for v in x)


positive_samples = st.lists(st.floats(1e-3, 1e3), min_size=2, max_size=40).filter(
    lambda v: max(v) > min(v) * (1 + 1e-9))


class TestSamples:
    @pytest.mark.parametrize("values", [[1.0], [1.0, 0.0], [1.0, -2.0], [1.0, float("nan")], [1.0, float("inf")]])
    def test_invalid(self, values):
        with pytest.raises(DomainError):
            RcsSamples(values)

    def test_count(self):
        assert RcsSamples([1, 2, 3]).count == 3


class TestAic:
    def test_examples(self):
        assert aic(0.0, 1) == 2.0
        assert aic(-100.0, 3) == 206.0

    def test_bad_k(self):
        with pytest.raises(DomainError):
            aic(0.0, 0)

    def test_rayleigh_hand_evaluation(self):
        b = math.sqrt(0.5)
        ll = 4 * (0 - 2 * math.log(b) - 1)
        r = fit_rayleigh([1, 1, 1, 1])
        assert r.loglik == pytest.approx(ll, rel=1e-14)
        assert r.aic == pytest.approx(-2 * ll + 2, rel=1e-14)


class TestLognormal:
    def test_two_point(self):
        r = fit_lognormal([1, math.e**2, 1, math.e**2])
        assert r.params["mu"] == pytest.approx(1.0, rel=1e-14)
        assert r.params["s"] ** 2 == pytest.approx(1.0, rel=1e-14)
        assert r.k == 2

    def test_degenerate(self):
        with pytest.raises(DegenerateFitError):
            fit_lognormal([0.3] * 5)

    def test_monte_carlo(self):
        x = np.random.default_rng(101).lognormal(0.5, 0.3, 10_000)
        r = fit_lognormal(x)
        assert abs(r.params["mu"] - 0.5) <= 0.02
        assert abs(r.params["s"] - 0.3) <= 0.02

    @settings(max_examples=60)
    @given(positive_samples, st.floats(1e-3, 1e3))
    def test_multiplicative_equivariance(self, values, c):
        a = fit_lognormal(values)
        b = fit_lognormal([v * c for v in values])
        assert b.params["mu"] == pytest.approx(a.params["mu"] + math.log(c), abs=1e-9)
        assert b.params["s"] == pytest.approx(a.params["s"], rel=1e-6, abs=1e-12)


class TestRayleigh:
    def test_closed_forms(self):
        assert fit_rayleigh([1, 1, 1, 1]).params["b"] == pytest.approx(0.70711, abs=5e-6)
        assert fit_rayleigh([2, 2]).params["b"] == pytest.approx(1.41421, abs=5e-6)
        assert fit_rayleigh([1, 1]).k == 1

    def test_loglik_against_density(self, rng):
        x = rng.rayleigh(0.3, 50)
        r = fit_rayleigh(x)
        assert r.loglik == pytest.approx(rayleigh_density_loglik(x, r.params["b"]), rel=1e-12)

    def test_monte_carlo(self):
        r = fit_rayleigh(np.random.default_rng(202).rayleigh(0.2, 10_000))
        assert abs(r.params["b"] / 0.2 - 1) <= 0.02

    @settings(max_examples=60)
    @given(positive_samples, st.floats(1e-3, 1e3))
    def test_scale_equivariance(self, values, c):
        a = fit_rayleigh(values)
        b = fit_rayleigh([v * c for v in values])
        assert b.params["b"] == pytest.approx(c * a.params["b"], rel=1e-12)
        assert b.loglik == pytest.approx(a.loglik - len(values) * math.log(c), rel=1e-9, abs=1e-9)
        # AIC moves by exactly +2N ln c, so the ordering of scaled copies follows c
        assert b.aic - a.aic == pytest.approx(2 * len(values) * math.log(c), rel=1e-9, abs=1e-9)


class TestGev:
    def test_insufficient(self):
        with pytest.raises(InsufficientDataError):
            fit_gev(np.arange(1.0, 10.0))

    def test_degenerate(self):
        with pytest.raises(DegenerateFitError):
            fit_gev(np.ones(20))

    def test_rejects_nonfinite(self):
        with pytest.raises(DomainError):
            fit_gev([1.0] * 11 + [float("nan")])

    def test_gumbel_limit(self):
        x = gev_sample(np.random.default_rng(303), 0.0, 0.0, 1.0, 10_000)
        assert abs(fit_gev(x).params["xi"]) < 0.05

    def test_recovers_parameters(self):
        x = gev_sample(np.random.default_rng(404), 0.1, 0.0, 1.0, 10_000)
        p = fit_gev(x).params
        assert abs(p["xi"] - 0.1) <= 0.05
        assert abs(p["mu"]) <= 0.05
        assert abs(p["sigma"] - 1.0) <= 0.05

    def test_improves_on_start(self, rng):
        x = gev_sample(rng, 0.2, 0.05, 0.02, 180)
        r = fit_gev(x)
        xi0, mu0, s0 = gev_initial_guess(x)
        assert r.loglik >= gev_loglik(x, xi0, mu0, s0)

    def test_start_is_feasible(self, rng):
        for xi in (-0.3, 0.0, 0.4):
            x = gev_sample(rng, xi, 1.0, 0.5, 50)
            assert math.isfinite(gev_loglik(x, *gev_initial_guess(x)))

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.floats(-0.4, 0.5), st.integers(10, 200))
    def test_support_constraint_holds(self, seed, xi, n):
        x = gev_sample(np.random.default_rng(seed), xi, 0.05, 0.02, n)
        p = fit_gev(x).params
        assert p["sigma"] > 0
        assert np.all(1 + p["xi"] * (x - p["mu"]) / p["sigma"] > 0)

    def test_matches_scipy(self, rng):
        stats = pytest.importorskip("scipy.stats")
        x = gev_sample(rng, 0.15, 2.0, 0.5, 500)
        r = fit_gev(x)
        c, loc, scale = stats.genextreme.fit(x)
        ref = float(np.sum(stats.genextreme.logpdf(x, c, loc, scale)))
        assert r.loglik >= ref - 1e-6
        assert r.loglik == pytest.approx(float(np.sum(stats.genextreme.logpdf(
            x, -r.params["xi"], r.params["mu"], r.params["sigma"]))), rel=1e-10)

    def test_deterministic(self, rng):
        x = gev_sample(rng, 0.2, 0.05, 0.02, 180)
        assert fit_gev(x) == fit_gev(x)


class TestNelderMead:
    def test_quadratic(self):
        theta, f, _ = nelder_mead(lambda v: (v[0] - 1) ** 2 + 3 * (v[1] + 2) ** 2, np.zeros(2), np.ones(2))
        np.testing.assert_allclose(theta, [1, -2], atol=1e-4)
        assert f < 1e-8

    def test_rosenbrock(self):
        fun = lambda v: (1 - v[0]) ** 2 + 100 * (v[1] - v[0] ** 2) ** 2
        theta, _, _ = nelder_mead(fun, np.array([-1.2, 1.0]), np.array([0.1, 0.1]), ftol=1e-14, max_iter=5000)
        np.testing.assert_allclose(theta, [1, 1], atol=1e-3)

    def test_non_convergence_carries_best(self):
        with pytest.raises(FitFailureError) as ei:
            nelder_mead(lambda v: float(np.sum(v**2)), np.full(3, 10.0), np.ones(3), ftol=0.0, max_iter=5)
        assert ei.value.best is not None and np.isfinite(ei.value.best_value)

    def test_infeasible_start(self):
        with pytest.raises(FitFailureError):
            nelder_mead(lambda v: math.inf, np.zeros(2), np.ones(2))


class TestSelection:
    def test_ranking_sorted_and_consistent(self, rng):
        x = rng.rayleigh(0.15, 180)
        ranking = select_model(x)
        aics = [r.aic for r in ranking.results]
        assert aics == sorted(aics)
        for r in ranking.results:
            assert r.aic == -2 * r.loglik + 2 * r.k
        assert {r.model: r.k for r in ranking.results} == {"lognormal": 2, "rayleigh": 1, "gev": 3}

    def test_tie_break(self):
        a = FitResult("zeta", {}, -1.0, 1)
        b = FitResult("alpha", {}, -0.0, 2)   # aic 4 vs 4
        c = FitResult("beta", {}, -1.0, 1)
        ranking = ModelRanking([b, a, c])
        assert [r.model for r in ranking.results] == ["beta", "zeta", "alpha"]

    def test_skips_failing_family(self):
        ranking = select_model(np.linspace(0.1, 0.5, 5))
        assert "gev" in ranking.skipped and "InsufficientDataError" in ranking.skipped["gev"]
        assert len(ranking.results) == 2

    def test_no_model(self):
        with pytest.raises(NoModelError):
            select_model([0.5, 0.5, 0.5], models=["lognormal", "gev"])

    def test_unknown_model(self):
        with pytest.raises(DomainError):
            select_model([0.1, 0.2], models=["weibull"])

    def test_deterministic(self, rng):
        x = rng.lognormal(-2, 0.5, 180)
        assert ranking_report(select_model(x), 180) == ranking_report(select_model(x), 180)

    def test_report(self, rng):
        x = rng.lognormal(-2, 0.5, 8)
        rep = ranking_report(select_model(x), 8)
        assert rep["fitting_scale"] == FITTING_SCALE == "linear_m2"
        assert rep["n_samples"] == 8
        assert rep["models"]["gev"]["status"] == "skipped"
        assert set(rep["models"]["lognormal"]) == {"params", "loglik", "K", "aic", "status"}
        assert rep["best"] == rep["ranking"][0]

    def test_lognormal_data_prefers_lognormal(self):
        x = np.random.default_rng(5).lognormal(-3, 1.0, 180)
        assert select_model(x).best.model == "lognormal"
