import numpy as np
import pytest

from irtbound.errors import ConfigurationError, DomainError
from irtbound.mcmc import McmcConfig, ModelSpec, fit
from irtbound.model import AbilitySpace, ItemParameters, icc, logit, sigmoid
from irtbound.priors import Prior
from irtbound.simulation import (
    CovariateDesign,
    SimulationDesign,
    recovery_report,
    shared_dispersion_items,
    simulate,
)

REAL = AbilitySpace.real_line()
POS = AbilitySpace.positive()
BND = AbilitySpace.bounded(5.0)


def test_guessing_near_one_gives_all_correct():
    items = [ItemParameters(1.0, 0.0, 1 - 1e-9)] * 3
    _, resp = simulate(SimulationDesign(REAL, 5000, items, seed=0))
    assert resp.u.mean(axis=0) == pytest.approx([1.0] * 3, abs=1e-3)


def test_ability_at_difficulty_gives_half():
    n = 10000
    items = [ItemParameters(1.2, 0.4), ItemParameters(0.6, 0.4)]
    design = SimulationDesign(REAL, n, items, seed=1, abilities=np.full(n, 0.4))
    _, resp = simulate(design)
    assert np.all(np.abs(resp.u.mean(axis=0) - 0.5) < 0.015)


def test_bounded_marginal_proportions():
    # E[sigmoid(0.6 logit(theta/5) - logit(b/5))] over theta ~ U(0, 5), by mpmath quadrature
    expected = [0.862107345295406, 0.667005763818984, 0.5, 0.332994236181016, 0.137892654704594]
    items = shared_dispersion_items(BND, np.linspace(0.5, 4.5, 5), 0.6)
    _, resp = simulate(SimulationDesign(BND, 10000, items, seed=2))
    assert np.all(np.abs(resp.u.mean(axis=0) - expected) < 0.02)


def test_deterministic():
    items = shared_dispersion_items(REAL, np.linspace(-1, 1, 4), 1.0)
    t1, r1 = simulate(SimulationDesign(REAL, 300, items, seed=9))
    t2, r2 = simulate(SimulationDesign(REAL, 300, items, seed=9))
    assert np.array_equal(t1, t2)
    assert np.array_equal(r1.u, r2.u)


def test_normal_abilities_moments():
    n = 20000
    theta, _ = simulate(SimulationDesign(REAL, n, [ItemParameters(1, 0)] * 2, seed=3))
    assert abs(theta.mean()) < 4 / np.sqrt(n)
    assert abs(theta.std() - 1) < 4 / np.sqrt(n)


def test_uniform_abilities_inside():
    theta, _ = simulate(SimulationDesign(BND, 5000, [ItemParameters(1, 2.5)] * 2, seed=4))
    assert np.all((theta > 0) & (theta < 5))
    assert abs(theta.mean() - 2.5) < 0.1


def test_real_and_half_line_round_trip():
    b = np.linspace(-1.5, 1.5, 6)
    real = [ItemParameters(0.9, float(v), 0.1) for v in b]
    pos = [ItemParameters(0.9, float(np.exp(v)), 0.1) for v in b]
    t_real, r_real = simulate(SimulationDesign(REAL, 2000, real, seed=5, ability=Prior.normal(0, 1)))
    t_pos, r_pos = simulate(SimulationDesign(POS, 2000, pos, seed=5, ability=Prior.lognormal(0, 1)))
    assert np.allclose(np.exp(t_real), t_pos, rtol=1e-12)
    assert np.array_equal(r_real.u, r_pos.u)


def test_covariate_design():
    n = 4000
    X = np.column_stack([np.ones(n), np.random.default_rng(0).integers(0, 2, n)])
    design = SimulationDesign(REAL, n, [ItemParameters(1, 0)] * 2, seed=6,
                              covariates=CovariateDesign(X, [0.5, -1.0], 0.25))
    theta, _ = simulate(design)
    coef = np.linalg.lstsq(X, theta, rcond=None)[0]
    assert coef == pytest.approx([0.5, -1.0], abs=0.05)


def test_small_design_returns_array():
    _, u = simulate(SimulationDesign(REAL, 1, [ItemParameters(1, 0)], seed=0))
    assert isinstance(u, np.ndarray) and u.shape == (1, 1)


def test_design_validation():
    with pytest.raises(ConfigurationError):
        SimulationDesign(REAL, 10, [ItemParameters(1, 0)], seed=None)
    with pytest.raises(DomainError):
        SimulationDesign(POS, 10, [ItemParameters(1, -1.0)], seed=0)
    with pytest.raises(ConfigurationError):
        SimulationDesign(REAL, 10, [ItemParameters(1, 0)], seed=0, ability=Prior.uniform(0, 5))


def test_shared_dispersion_equivalence():
    # curve form reproduces beta * g(theta) - g(b)
    beta, b = 0.7, np.array([0.8, 2.0, 3.5])
    items = shared_dispersion_items(BND, b, beta)
    theta = np.array([0.5, 2.2, 4.1])
    for it, bi in zip(items, b):
        expected = sigmoid(beta * logit(theta / 5) - logit(bi / 5))
        assert np.allclose(icc(theta, it, BND), expected, atol=1e-14)


@pytest.fixture(scope="module")
def fitted():
    items = shared_dispersion_items(REAL, np.linspace(-1.5, 1.5, 8), 1.0)
    design = SimulationDesign(REAL, 600, items, seed=8)
    theta, resp = simulate(design)
    res = fit(resp, ModelSpec(REAL), cfg=McmcConfig(chains=2, iterations=1200, burn_in=400, thin=2, seed=1))
    return design, theta, res


class TestRecovery:
    def test_own_truth(self, fitted):
        design, theta, res = fitted
        rep = recovery_report(design, res, theta)
        assert rep["difficulty"]["correlation"] > 0.98
        assert 0.85 <= rep["ability"]["coverage"] <= 1.0
        assert rep["dispersion"]["coverage"] in (0.0, 1.0)
        assert rep["ability"]["correlation"] > 0.6

    def test_shuffled_truth(self, fitted):
        design, _, res = fitted
        perm = [3, 6, 0, 5, 2, 7, 1, 4]
        shuffled = SimulationDesign(REAL, design.n, [design.items[k] for k in perm], seed=8)
        rep = recovery_report(shuffled, res)
        assert abs(rep["difficulty"]["correlation"]) < 0.3
