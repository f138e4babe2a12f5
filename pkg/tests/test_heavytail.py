"""Tail fitting, bootstrap goodness of fit, Vuong comparison, zeta."""

import numpy as np
import pytest
from scipy.special import zeta as scipy_zeta

from cocimap.errors import (
    DegenerateInput,
    NonPositiveSample,
    SharedSupportViolation,
)
from cocimap.heavytail import (
    TailFit,
    fit_lognormal_tail,
    fit_power_law,
    gof_bootstrap,
    power_law_cdf,
    power_law_pmf,
    sample_power_law,
    vuong_compare,
    zeta_hurwitz,
)


class TestZeta:
    def test_against_scipy_grid(self):
        s = np.concatenate((np.linspace(1.0001, 5, 60),
                            np.linspace(5, 39, 40)))
        for a in (1.0, 2.0, 3.0, 17.0, 1e3, 1e6):
            mine = zeta_hurwitz(s, a)
            ref = scipy_zeta(s, a)
            np.testing.assert_allclose(mine, ref, rtol=1e-12)

    def test_scalar_returns_float(self):
        assert isinstance(zeta_hurwitz(2.5, 3.0), float)

    def test_domain_checks(self):
        with pytest.raises(ValueError):
            zeta_hurwitz(1.0, 2.0)
        with pytest.raises(ValueError):
            zeta_hurwitz(2.0, 0.5)


class TestPowerLawFit:
    def test_recovery_ten_seeds(self):
        estimates = []
        for seed in range(10):
            rng = np.random.default_rng(seed)
            data = sample_power_law(2.5, 1, 5000, rng)
            fit = fit_power_law(data)
            assert fit.xmin in (1, 2)
            estimates.append(fit.alpha)
        assert abs(float(np.median(estimates)) - 2.5) < 0.1

    def test_degenerate_rejected(self):
        with pytest.raises(DegenerateInput):
            fit_power_law([1, 1, 1, 1])

    def test_nonpositive_rejected(self):
        with pytest.raises(NonPositiveSample):
            fit_power_law([1, 2, 0, 4])
        with pytest.raises(NonPositiveSample):
            fit_power_law([1.5, 2.5])

    def test_deterministic(self):
        rng = np.random.default_rng(8)
        data = sample_power_law(2.2, 2, 2000, rng)
        f1, f2 = fit_power_law(data), fit_power_law(data)
        assert f1 == f2

    def test_pmf_sums_to_one(self):
        for alpha, xmin in ((2.5, 1), (1.8, 3), (3.5, 2)):
            xs = np.arange(xmin, 10**6, dtype=np.float64)
            partial = power_law_pmf(alpha, xmin, xs).sum()
            survival_rest = (zeta_hurwitz(alpha, 10.0**6)
                             / zeta_hurwitz(alpha, float(xmin)))
            assert partial + survival_rest == pytest.approx(1.0, abs=1e-8)

    def test_cdf_monotone_in_unit_interval(self):
        xs = np.arange(1, 2000)
        cdf = power_law_cdf(2.5, 1, xs)
        assert np.all(np.diff(cdf) > 0)
        assert 0 < cdf[0] < 1 and cdf[-1] < 1

    def test_ks_in_unit_interval(self):
        rng = np.random.default_rng(3)
        for _ in range(5):
            data = sample_power_law(2.0, 1, 500, rng)
            fit = fit_power_law(data)
            assert 0.0 <= fit.ks_stat <= 1.0

    def test_xmin_keeps_tail_of_50(self):
        rng = np.random.default_rng(12)
        data = sample_power_law(2.5, 1, 5000, rng)
        fit = fit_power_law(data)
        assert fit.n_tail >= 50

    def test_consistency_across_sizes(self):
        medians = []
        for n in (500, 5000, 50000):
            errs = []
            for seed in range(10):
                rng = np.random.default_rng(seed)
                data = sample_power_law(2.5, 1, n, rng)
                errs.append(abs(fit_power_law(data).alpha - 2.5))
            medians.append(float(np.median(errs)))
        assert medians[0] > medians[1] > medians[2]


class TestSampler:
    def test_matches_cdf(self):
        rng = np.random.default_rng(0)
        data = sample_power_law(2.5, 1, 200_000, rng)
        for x in (1, 2, 5, 20):
            emp = float((data <= x).mean())
            assert emp == pytest.approx(float(power_law_cdf(2.5, 1, x)),
                                        abs=5e-3)

    def test_respects_xmin(self):
        rng = np.random.default_rng(1)
        data = sample_power_law(2.0, 7, 10_000, rng)
        assert data.min() >= 7


class TestGof:
    def test_determinism_across_workers(self):
        rng = np.random.default_rng(0)
        data = sample_power_law(2.5, 1, 1500, rng)
        fit = fit_power_law(data)
        a = gof_bootstrap(fit, data, n_sims=100, seed=9, workers=1)
        b = gof_bootstrap(fit, data, n_sims=100, seed=9, workers=2)
        assert a.p_value == b.p_value
        assert a.n_bootstrap == 100 and a.seed == 9

    def test_seed_mandatory(self):
        rng = np.random.default_rng(0)
        data = sample_power_law(2.5, 1, 1000, rng)
        fit = fit_power_law(data)
        with pytest.raises(ValueError):
            gof_bootstrap(fit, data, n_sims=100, seed=None)

    def test_nsims_floor(self):
        rng = np.random.default_rng(0)
        data = sample_power_law(2.5, 1, 1000, rng)
        fit = fit_power_law(data)
        with pytest.raises(ValueError):
            gof_bootstrap(fit, data, n_sims=50, seed=1)

    def test_model_generated_data_scores_well(self):
        rng = np.random.default_rng(5)
        data = sample_power_law(2.5, 1, 2000, rng)
        fit = fit_power_law(data)
        gof = gof_bootstrap(fit, data, n_sims=100, seed=17, workers=2)
        assert gof.p_value >= 0.1


class TestLogNormal:
    def test_recovery(self):
        rng = np.random.default_rng(1)
        data = np.ceil(np.exp(rng.normal(1.0, 1.0, size=5000))).astype(np.int64)
        fit = fit_lognormal_tail(data, 1)
        assert abs(fit.mu - 1.0) < 0.1
        assert abs(fit.sigma - 1.0) < 0.1

    def test_two_distinct_values(self):
        fit = fit_lognormal_tail([2, 2, 3, 3, 3], 2)
        assert fit.sigma > 0

    def test_constant_tail_rejected(self):
        with pytest.raises(DegenerateInput):
            fit_lognormal_tail([5, 5, 5, 5], 5)

    def test_tail_respects_xmin(self):
        rng = np.random.default_rng(2)
        data = np.ceil(np.exp(rng.normal(1.0, 0.8, size=3000))).astype(np.int64)
        fit = fit_lognormal_tail(data, 3)
        assert fit.xmin == 3
        assert fit.n_tail == int((data >= 3).sum())


class TestCdfExport:
    def test_power_law_rows(self):
        from cocimap.heavytail import empirical_vs_fitted_cdf
        rng = np.random.default_rng(7)
        data = sample_power_law(2.5, 1, 800, rng)
        fit = fit_power_law(data)
        rows = empirical_vs_fitted_cdf(fit, data)
        values = [r[0] for r in rows]
        assert values == sorted(values)
        emp = [r[1] for r in rows]
        assert emp == sorted(emp) and emp[-1] == pytest.approx(1.0)
        assert all(0.0 <= r[2] <= 1.0 for r in rows)

    def test_lognormal_rows(self):
        from cocimap.heavytail import empirical_vs_fitted_cdf
        rng = np.random.default_rng(7)
        data = np.ceil(np.exp(rng.normal(1.0, 1.0, size=800))).astype(np.int64)
        fit = fit_lognormal_tail(data, 2)
        rows = empirical_vs_fitted_cdf(fit, data)
        assert all(0.0 <= r[2] <= 1.0 for r in rows)
        assert rows[-1][1] == pytest.approx(1.0)


class TestVuong:
    def test_identical_likelihoods_indistinguishable(self):
        # same per-point log-likelihood for every sample: ratios are
        # constant, the statistic degenerates to 0
        fit_pl = TailFit(model="power_law", xmin=1, n_tail=4,
                         log_likelihood=-1.0, ks_stat=0.1, alpha=2.0)
        fit_ln = TailFit(model="log_normal", xmin=1, n_tail=4,
                         log_likelihood=-1.0, ks_stat=0.1, mu=0.0, sigma=1.0)
        samples = [3, 3, 3, 3]  # constant tail -> zero-variance ratios
        res = vuong_compare(fit_pl, fit_ln, samples)
        assert res.statistic == 0.0
        assert res.p_value == 1.0
        assert res.preferred == "indistinguishable"

    def test_xmin_mismatch_rejected(self):
        fit_pl = TailFit(model="power_law", xmin=1, n_tail=10,
                         log_likelihood=0.0, ks_stat=0.1, alpha=2.0)
        fit_ln = TailFit(model="log_normal", xmin=2, n_tail=10,
                         log_likelihood=0.0, ks_stat=0.1, mu=0.0, sigma=1.0)
        with pytest.raises(SharedSupportViolation):
            vuong_compare(fit_pl, fit_ln, [1, 2, 3])

    def test_pure_power_law_preferred_at_scale(self):
        rng = np.random.default_rng(0)
        data = sample_power_law(2.5, 1, 20000, rng)
        pl = fit_power_law(data)
        ln = fit_lognormal_tail(data, pl.xmin)
        res = vuong_compare(pl, ln, data)
        assert res.preferred == "power_law"
        assert res.p_value < 0.05

    def test_antisymmetry(self):
        rng = np.random.default_rng(4)
        data = sample_power_law(2.2, 1, 3000, rng)
        pl = fit_power_law(data)
        ln = fit_lognormal_tail(data, pl.xmin)
        forward = vuong_compare(pl, ln, data)
        # swapping the roles flips the statistic's sign: recompute the
        # ratios with the models exchanged
        import math
        arr = data[data >= pl.xmin].astype(np.float64)
        from cocimap.heavytail import _lognormal_log_pmf
        log_pl = (-pl.alpha * np.log(arr)
                  - math.log(float(zeta_hurwitz(pl.alpha, float(pl.xmin)))))
        log_ln = _lognormal_log_pmf(arr, ln.mu, ln.sigma, ln.xmin)
        reversed_stat = float((log_ln - log_pl).mean() * math.sqrt(arr.size)
                              / (log_ln - log_pl).std(ddof=1))
        assert reversed_stat == pytest.approx(-forward.statistic, rel=1e-12)
