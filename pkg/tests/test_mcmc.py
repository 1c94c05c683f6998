import math

import numpy as np
import pytest

from irtbound.diagnostics import gelman_rubin, summarize
from irtbound.errors import ConfigurationError, InvalidInputError, ParseError
from irtbound.mcmc import (
    FREE,
    PER_ITEM,
    McmcConfig,
    ModelSpec,
    PosteriorSamples,
    _Chain,
    dic,
    fit,
    log_likelihood,
    sample_abilities,
)
from irtbound.model import AbilitySpace, ItemParameters, icc
from irtbound.priors import Prior, PriorSpec
from irtbound.simulation import SimulationDesign, shared_dispersion_items, simulate

REAL = AbilitySpace.real_line()
POS = AbilitySpace.positive()
BND = AbilitySpace.bounded(5.0)
QUICK = McmcConfig(chains=2, iterations=300, burn_in=100, thin=2, seed=11)


def small_data(space=REAL, n=150, n_items=6, seed=1, beta=1.0):
    zb = np.linspace(-1.5, 1.5, n_items)
    items = shared_dispersion_items(space, space.inverse(zb), beta, 1.7)
    _, resp = simulate(SimulationDesign(space, n, items, seed=seed))
    return resp, items


class TestLogLikelihood:
    def test_single_cell_at_difficulty(self):
        ll = log_likelihood(np.array([[1]]), [0.0], [ItemParameters(1.0, 0.0)], ModelSpec(REAL))
        assert ll == pytest.approx(math.log(0.5), abs=1e-15)

    def test_all_cells_at_difficulty(self):
        n, n_items = 7, 4
        u = np.random.default_rng(0).integers(0, 2, (n, n_items))
        items = [ItemParameters(1.3, 0.2)] * n_items
        ll = log_likelihood(u, np.full(n, 0.2), items, ModelSpec(REAL))
        assert ll == pytest.approx(n * n_items * math.log(0.5), abs=1e-12)

    @pytest.mark.parametrize("space", [REAL, POS, BND], ids=lambda s: s.describe())
    def test_against_cell_loop(self, space):
        rng = np.random.default_rng(5)
        theta = space.inverse(rng.normal(size=5))
        items = [ItemParameters(rng.uniform(0.5, 2), float(space.inverse(rng.normal())), rng.uniform(0, 0.3)) for _ in range(3)]
        u = rng.integers(0, 2, (5, 3))
        oracle = 0.0
        for j in range(5):
            for i in range(3):
                p = float(icc(float(theta[j]), items[i], space))
                oracle += math.log(p) if u[j, i] else math.log(1 - p)
        assert log_likelihood(u, theta, items, ModelSpec(space)) == pytest.approx(oracle, abs=1e-10)

    def test_dimension_mismatch(self):
        with pytest.raises(InvalidInputError):
            log_likelihood(np.zeros((3, 2)), [0.0, 0.0], [ItemParameters(1, 0)] * 2, ModelSpec(REAL))


class TestGelmanRubin:
    def test_constant_chains(self):
        assert gelman_rubin(np.full((4, 50), 2.5)) == pytest.approx(1.0)

    def test_same_distribution(self):
        x = np.random.default_rng(0).normal(size=(4, 1000))
        assert gelman_rubin(x) < 1.1

    def test_offset_chain(self):
        x = np.random.default_rng(0).normal(size=(4, 1000))
        x[0] += 10
        assert gelman_rubin(x) > 1.1

    def test_single_chain(self):
        assert gelman_rubin(np.zeros((1, 100))) is None

    def test_too_few_draws(self):
        with pytest.raises(InvalidInputError):
            gelman_rubin(np.zeros((2, 5)))

    def test_frozen_chains_differ(self):
        x = np.zeros((2, 20))
        x[1] = 1.0
        assert gelman_rubin(x) == np.inf

    def test_vector_parameters(self):
        x = np.random.default_rng(1).normal(size=(3, 200, 4))
        assert gelman_rubin(x).shape == (4,)

    def test_textbook_formula(self):
        # between/within decomposition written out longhand
        x = np.random.default_rng(2).normal(size=(3, 40))
        m, n = x.shape
        means = x.mean(axis=1)
        B = n * np.sum((means - means.mean()) ** 2) / (m - 1)
        W = np.mean([np.sum((c - c.mean()) ** 2) / (n - 1) for c in x])
        expected = math.sqrt(((n - 1) / n * W + B / n) / W)
        assert gelman_rubin(x) == pytest.approx(expected, rel=1e-12)


def test_summarize_quantiles():
    x = np.arange(200, dtype=float).reshape(2, 100)
    s = summarize(x)
    assert s["mean"] == pytest.approx(99.5)
    assert s["q50"] == pytest.approx(99.5)


class TestDic:
    def test_zero_variance_gives_zero_complexity(self):
        resp, items = small_data(n=20, n_items=4)
        draws = {
            "theta": np.zeros((2, 15, 20)),
            "b": np.tile(np.array([b.b for b in items]) / 1.0, (2, 15, 1)),
            "beta": np.full((2, 15), 1.7),
        }
        value, p_d, d_bar, d_hat = dic(PosteriorSamples(draws), resp, ModelSpec(REAL))
        assert p_d == 0.0
        assert value == d_bar == d_hat

    def test_complexity_positive_after_fit(self):
        resp, _ = small_data()
        res = fit(resp, ModelSpec(REAL), cfg=QUICK)
        assert res.p_d > 0
        assert res.dic == pytest.approx(res.mean_deviance + res.p_d)


class TestConfig:
    def test_retained_count(self):
        assert McmcConfig(iterations=10000, burn_in=2000, thin=5).n_retained == 1600

    @pytest.mark.parametrize("kw", [{"chains": 0}, {"thin": 0}, {"iterations": 100, "burn_in": 100},
                                    {"iterations": 10, "burn_in": 5, "thin": 10}])
    def test_invalid(self, kw):
        with pytest.raises(ConfigurationError):
            McmcConfig(**kw)

    def test_model_modes(self):
        with pytest.raises(ConfigurationError):
            ModelSpec(REAL, slope_mode="x")


class TestSampler:
    def test_deterministic(self):
        resp, _ = small_data()
        r1 = fit(resp, ModelSpec(REAL), cfg=QUICK)
        r2 = fit(resp, ModelSpec(REAL), cfg=QUICK)
        for k in r1.samples.draws:
            assert np.array_equal(r1.samples.draws[k], r2.samples.draws[k])
        assert r1.dic == r2.dic

    def test_seed_changes_draws(self):
        resp, _ = small_data()
        r1 = fit(resp, ModelSpec(REAL), cfg=QUICK)
        r2 = fit(resp, ModelSpec(REAL), cfg=McmcConfig(chains=2, iterations=300, burn_in=100, thin=2, seed=12))
        assert not np.array_equal(r1.samples.draws["b"], r2.samples.draws["b"])

    @pytest.mark.parametrize("space", [REAL, POS, BND], ids=lambda s: s.describe())
    def test_zero_sum_and_recentering(self, space):
        resp, _ = small_data(space)
        spec = ModelSpec(space)
        chain = _Chain(resp.u.astype(float), spec, PriorSpec.for_space(space), QUICK, np.random.default_rng(0))
        for _ in range(5):
            chain.sweep(False)
            assert abs(chain.zb.mean()) < 1e-10
        # shifting g(b) by m and g(theta) by m/beta leaves the likelihood unchanged
        before = chain.ll.sum()
        chain.zb = chain.zb + 0.3
        chain.zt = chain.zt + 0.3 / math.exp(chain.log_beta)
        chain._recenter()
        after = chain._loglik(chain.zt, chain.zb, chain._slope(), chain._c()).sum()
        assert after == pytest.approx(before, abs=1e-8)

    @pytest.mark.parametrize("space", [POS, BND, AbilitySpace.bounded(5.0, "probit")], ids=lambda s: s.describe())
    def test_draws_stay_in_domain(self, space):
        resp, _ = small_data(space)
        res = fit(resp, ModelSpec(space), cfg=QUICK)
        for k in ("theta", "b"):
            assert np.all(space.contains(res.samples.draws[k]))

    def test_per_item_free_guessing(self):
        resp, _ = small_data(n=200)
        res = fit(resp, ModelSpec(REAL, slope_mode=PER_ITEM, guessing_mode=FREE), cfg=QUICK)
        c = res.samples.draws["c"]
        assert c.shape == (2, QUICK.n_retained, 6)
        assert np.all((c > 0) & (c < 1))
        assert np.all(res.samples.draws["a"] > 0)
        assert len(res.item_parameters()) == 6

    def test_curve_form_conversion(self):
        resp, _ = small_data()
        res = fit(resp, ModelSpec(REAL), cfg=QUICK)
        a, b = res.icc_form_draws()
        beta = res.samples.draws["beta"]
        assert np.allclose(a, beta[..., None] / 1.7)
        assert np.allclose(b, res.samples.draws["b"] / beta[..., None])

    def test_degenerate_item_warns(self):
        resp, _ = small_data()
        u = resp.u.copy()
        u[:, 0] = 1
        res = fit(u, ModelSpec(REAL), cfg=QUICK)
        assert len(res.warnings) == 1 and "i1" in res.warnings[0]

    @pytest.mark.parametrize("shape", [(0, 3), (3, 0), (1, 3)])
    def test_empty_inputs(self, shape):
        with pytest.raises((InvalidInputError, ParseError)):
            fit(np.zeros(shape, dtype=int), ModelSpec(REAL), cfg=QUICK)

    def test_prior_space_mismatch(self):
        resp, _ = small_data()
        bad = PriorSpec(b=Prior("lognormal", 1.64, 1.0), theta=Prior("normal", 0.0, 1.0))
        with pytest.raises(ConfigurationError):
            fit(resp, ModelSpec(REAL), bad, QUICK)

    def test_posterior_shrinks_with_n(self):
        sds = []
        for n in (100, 800):
            resp, _ = small_data(n=n, seed=4)
            res = fit(resp, ModelSpec(REAL), cfg=QUICK)
            sds.append(res.samples.draws["b"].std(axis=(0, 1)).mean())
        assert sds[1] < sds[0]


def test_sample_abilities_shape_and_order():
    resp, items = small_data(n=60, n_items=10)
    cfg = McmcConfig(chains=2, iterations=400, burn_in=100, thin=1, seed=3)
    draws = sample_abilities(resp, items, REAL, Prior("normal", 0.0, 1.0), cfg)
    assert draws.shape == (2, 300, 60)
    score = resp.u.sum(axis=1)
    post = draws.mean(axis=(0, 1))
    assert np.corrcoef(score, post)[0, 1] > 0.9
