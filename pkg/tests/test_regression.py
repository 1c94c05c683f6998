import copy
import math

import numpy as np
import pytest
from scipy.stats import ks_2samp

from irtbound.errors import ConfigurationError, InvalidInputError
from irtbound.mcmc import McmcConfig, sample_abilities
from irtbound.model import AbilitySpace, ItemParameters, icc
from irtbound.priors import Prior
from irtbound.regression import RegressionSpec, fit_regression, transform_name, unit_change_factor
from irtbound.simulation import CovariateDesign, SimulationDesign, shared_dispersion_items, simulate

REAL = AbilitySpace.real_line()
CFG = McmcConfig(chains=2, iterations=1500, burn_in=500, thin=2, seed=21)


def items_for(space=REAL, n_items=15):
    zb = np.linspace(-2, 2, n_items)
    return shared_dispersion_items(space, space.inverse(zb), 1.0)


def simulate_regression(X, coef, sigma2=1.0, space=REAL, seed=0, items=None):
    items = items or items_for(space)
    design = SimulationDesign(space, X.shape[0], items, seed=seed, covariates=CovariateDesign(X, coef, sigma2))
    _, resp = simulate(design)
    return resp, items


class TestUnitChangeFactor:
    def test_zero_coefficient(self):
        assert unit_change_factor(1.3, 0.0) == 1.0

    def test_positive_coefficient_raises_probability(self):
        item = ItemParameters(1.0, 0.0, 0.2)
        f = unit_change_factor(item.a, 0.4)
        assert f < 1
        assert icc(0.4, item, REAL) > icc(0.0, item, REAL)

    def test_halving(self):
        assert unit_change_factor(1.0, math.log(2) / 1.7, 1.7) == pytest.approx(0.5, rel=1e-15)

    def test_odds_interpretation(self):
        # the factor scales exp(-D a (theta - b)) for a unit step in theta
        a, coef = 0.8, -0.3
        term = lambda t: math.exp(-1.7 * a * (t - 0.5))  # noqa: E731
        assert term(1.0 + coef) / term(1.0) == pytest.approx(unit_change_factor(a, coef), rel=1e-14)


class TestRegressionSpec:
    def test_rank_deficient(self):
        X = np.column_stack([np.ones(10), np.arange(10.0), 2 * np.arange(10.0)])
        with pytest.raises(InvalidInputError, match="rank deficient"):
            RegressionSpec(X, REAL, items_for())

    def test_transform_mismatch(self):
        with pytest.raises(ConfigurationError):
            RegressionSpec(np.ones((5, 1)), AbilitySpace.positive(), items_for(), h="identity")

    @pytest.mark.parametrize(
        "space, name",
        [(REAL, "identity"), (AbilitySpace.positive(), "log"), (AbilitySpace.bounded(5.0, "probit"), "probit")],
    )
    def test_transform_names(self, space, name):
        assert transform_name(space) == name

    def test_row_mismatch(self):
        resp, items = simulate_regression(np.ones((50, 1)), [0.0])
        with pytest.raises(InvalidInputError):
            fit_regression(resp, RegressionSpec(np.ones((40, 1)), REAL, items), CFG)


def test_intercept_only_recovery():
    n = 1500
    X = np.ones((n, 1))
    resp, items = simulate_regression(X, [0.3], seed=1)
    res = fit_regression(resp, RegressionSpec(X, REAL, items), CFG)
    assert abs(res.coef.mean() - 0.3) < 0.1
    assert abs(res.sigma2.mean() - 1.0) < 0.25


def test_fixed_items_untouched():
    n = 200
    X = np.ones((n, 1))
    resp, items = simulate_regression(X, [0.0], seed=2)
    before = copy.deepcopy(items)
    res = fit_regression(resp, RegressionSpec(X, REAL, items), CFG)
    assert list(res.items) == before
    assert all(a.a == b.a and a.b == b.b and a.c == b.c for a, b in zip(res.items, before))


def test_deterministic():
    X = np.column_stack([np.ones(100), np.arange(100) % 2])
    resp, items = simulate_regression(X, [0.0, 0.5], seed=3)
    r1 = fit_regression(resp, RegressionSpec(X, REAL, items), CFG)
    r2 = fit_regression(resp, RegressionSpec(X, REAL, items), CFG)
    assert np.array_equal(r1.coef, r2.coef)
    assert r1.dic == r2.dic


def test_covariate_effect_has_right_sign():
    n = 1000
    x = np.random.default_rng(4).integers(0, 2, n).astype(float)
    X = np.column_stack([np.ones(n), x])
    resp, items = simulate_regression(X, [0.0, 0.8], seed=4)
    res = fit_regression(resp, RegressionSpec(X, REAL, items), CFG)
    slope = res.coef[..., 1].ravel()
    assert np.quantile(slope, 0.025) > 0
    theta = res.theta_draws().mean(axis=(0, 1))
    assert theta[x == 1].mean() > theta[x == 0].mean()


def test_bounded_space_draws_inside():
    space = AbilitySpace.bounded(5.0)
    n = 300
    X = np.ones((n, 1))
    resp, items = simulate_regression(X, [0.0], space=space, seed=5, items=items_for(space))
    res = fit_regression(resp, RegressionSpec(X, space, items), CFG)
    theta = res.theta_draws()
    assert np.all((theta > 0) & (theta < 5))


def test_matches_fixed_item_scoring():
    # with sigma2 near 1 and coef near 0, the regression posterior of the
    # abilities is close to scoring under a N(0, 1) prior
    n = 800
    X = np.ones((n, 1))
    resp, items = simulate_regression(X, [0.0], seed=6)
    res = fit_regression(resp, RegressionSpec(X, REAL, items), CFG)
    reg = res.theta_draws().mean(axis=(0, 1))
    ref = sample_abilities(resp, items, REAL, Prior.normal(0, 1), CFG).mean(axis=(0, 1))
    assert ks_2samp(reg, ref).statistic < 0.1
    assert np.corrcoef(reg, ref)[0, 1] > 0.98


def test_summary_and_rhat():
    X = np.ones((200, 1))
    resp, items = simulate_regression(X, [0.0], seed=7)
    res = fit_regression(resp, RegressionSpec(X, REAL, items), CFG)
    s = res.summary()
    assert s["coef"]["rhat"].shape == (1,)
    assert s["coef"]["rhat"][0] < 1.2
    assert res.p_d > 0
