"""Metropolis-within-Gibbs estimation of item and ability parameters.

Two slope parametrizations are supported. With a shared dispersion
``beta`` the linear predictor is ``beta * g(theta_j) - g(b_i)`` (guessing
fixed at 0 gives the classical, log-scale and bounded Rasch-type models).
With per-item slopes it is ``D * a_i * (g(theta_j) - g(b_i))``.

Every block is updated by a random walk on the transformed scale: ``g``
for abilities and difficulties, ``log`` for ``beta`` and ``a_i``, ``logit``
for ``c_i``. Proposal scales adapt during burn-in and are frozen after.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

import numpy as np

from .data import ResponseMatrix, as_response_matrix
from .diagnostics import gelman_rubin, summarize
from .errors import ConfigurationError, InitializationError, InvalidInputError
from .model import AbilitySpace, ItemParameters, SpaceKind, icc
from .priors import PriorSpec

log = logging.getLogger(__name__)

SHARED = "shared"
PER_ITEM = "per-item"
FIXED = "fixed"
FREE = "free"

ACCEPT_LOW, ACCEPT_HIGH = 0.20, 0.45

DEFAULT_SCALES = {"theta": 0.8, "b": 0.15, "beta": 0.05, "a": 0.1, "c": 0.3}


@dataclass(frozen=True)
class ModelSpec:
    space: AbilitySpace
    slope_mode: str = SHARED
    guessing_mode: str = FIXED
    D: float = 1.7

    def __post_init__(self):
        if self.slope_mode not in (SHARED, PER_ITEM):
            raise ConfigurationError(f"slope_mode must be {SHARED!r} or {PER_ITEM!r}")
        if self.guessing_mode not in (FIXED, FREE):
            raise ConfigurationError(f"guessing_mode must be {FIXED!r} or {FREE!r}")
        if not (math.isfinite(self.D) and self.D > 0):
            raise ConfigurationError(f"D must be > 0, got {self.D!r}")

    def blocks(self) -> tuple[str, ...]:
        slope = ("beta",) if self.slope_mode == SHARED else ("a",)
        guess = ("c",) if self.guessing_mode == FREE else ()
        return ("theta", "b") + slope + guess

    def to_dict(self) -> dict:
        return {
            "space": self.space.to_dict(),
            "slope_mode": self.slope_mode,
            "guessing_mode": self.guessing_mode,
            "D": self.D,
        }


@dataclass(frozen=True)
class McmcConfig:
    chains: int = 4
    iterations: int = 10000
    burn_in: int = 2000
    thin: int = 5
    seed: int | None = None
    proposal_scales: Mapping[str, float] = field(default_factory=lambda: dict(DEFAULT_SCALES))
    adapt_interval: int = 50
    init_jitter: float = 0.5

    def __post_init__(self):
        if self.chains < 1:
            raise ConfigurationError("chains must be >= 1")
        if self.thin < 1:
            raise ConfigurationError("thin must be >= 1")
        if self.burn_in < 0 or self.iterations <= self.burn_in:
            raise ConfigurationError(
                f"iterations ({self.iterations}) must exceed burn_in ({self.burn_in})"
            )
        if self.n_retained < 1:
            raise ConfigurationError("schedule retains no draws")
        if self.adapt_interval < 1:
            raise ConfigurationError("adapt_interval must be >= 1")
        for k, v in self.proposal_scales.items():
            if not v > 0:
                raise ConfigurationError(f"proposal scale for {k!r} must be > 0")

    @property
    def n_retained(self) -> int:
        """Retained draws per chain."""
        return (self.iterations - self.burn_in) // self.thin

    def with_seed(self) -> "McmcConfig":
        """Return a copy with a concrete seed, drawing fresh entropy if unset."""
        if self.seed is not None:
            return self
        return replace(self, seed=int(np.random.SeedSequence().entropy % (2**63)))

    def scale(self, block: str) -> float:
        return float(self.proposal_scales.get(block, DEFAULT_SCALES[block]))

    def to_dict(self) -> dict:
        return {
            "chains": self.chains,
            "iterations": self.iterations,
            "burn_in": self.burn_in,
            "thin": self.thin,
            "seed": self.seed,
        }


@dataclass
class PosteriorSamples:
    """Retained draws, ``draws[name]`` shaped ``(chains, draws[, k])``."""

    draws: dict[str, np.ndarray]
    acceptance: dict[str, float] = field(default_factory=dict)

    @property
    def n_chains(self) -> int:
        return next(iter(self.draws.values())).shape[0]

    @property
    def n_draws(self) -> int:
        return next(iter(self.draws.values())).shape[1]

    def rhat(self) -> dict[str, np.ndarray | None]:
        return {k: gelman_rubin(v) for k, v in self.draws.items()}

    def summary(self) -> dict[str, dict[str, np.ndarray]]:
        out = {}
        rhat = self.rhat()
        for k, v in self.draws.items():
            s = summarize(v)
            s["rhat"] = rhat[k]
            out[k] = s
        return out

    def max_rhat(self) -> float | None:
        vals = [np.max(r) for r in self.rhat().values() if r is not None]
        return float(max(vals)) if vals else None


@dataclass
class FitResult:
    samples: PosteriorSamples
    spec: ModelSpec
    priors: PriorSpec
    config: McmcConfig
    response: ResponseMatrix
    dic: float
    mean_deviance: float
    deviance_at_mean: float
    p_d: float
    warnings: list[str] = field(default_factory=list)

    def posterior_mean(self, name: str) -> np.ndarray:
        return self.samples.draws[name].mean(axis=(0, 1))

    def abilities(self) -> np.ndarray:
        return self.posterior_mean("theta")

    def icc_form_draws(self) -> tuple[np.ndarray, np.ndarray]:
        """Per-draw ``(a, b)`` in curve form, shaped ``(chains, draws, items)``.

        For a shared dispersion ``beta * g(theta) - g(b)`` equals
        ``D a (g(theta) - g(b*))`` with ``a = beta / D`` and
        ``g(b*) = g(b) / beta``.
        """
        space, d = self.spec.space, self.samples.draws
        if self.spec.slope_mode == PER_ITEM:
            return d["a"], d["b"]
        beta = d["beta"][..., None]
        zb = space.transform(d["b"]) / beta
        a = np.broadcast_to(beta / self.spec.D, zb.shape)
        return a, space.inverse(zb)

    def item_parameters(self) -> list[ItemParameters]:
        """Posterior point estimates as curve-form item parameters.

        Slopes are posterior means; difficulties are ``g^-1`` of the
        posterior mean on the transformed scale, which keeps them inside
        the domain.
        """
        space = self.spec.space
        a, b = self.icc_form_draws()
        a_hat = a.mean(axis=(0, 1))
        b_hat = space.inverse(space.transform(b).mean(axis=(0, 1)))
        if self.spec.guessing_mode == FREE:
            c_hat = self.posterior_mean("c")
        else:
            c_hat = np.zeros_like(a_hat)
        return [
            ItemParameters(float(ai), float(bi), float(ci), self.spec.D)
            for ai, bi, ci in zip(np.atleast_1d(a_hat), np.atleast_1d(b_hat), np.atleast_1d(c_hat))
        ]


# --------------------------------------------------------------------------
# Likelihood
# --------------------------------------------------------------------------


def _softplus(x):
    """``log(1 + exp(x))`` without overflow; faster than ``np.logaddexp``."""
    out = np.exp(-np.abs(x))
    np.log1p(out, out=out)
    out += np.maximum(x, 0.0)
    return out


def _eta(z_theta, z_b, spec: ModelSpec, slope):
    if spec.slope_mode == SHARED:
        return slope * z_theta[:, None] - z_b[None, :]
    return (spec.D * slope)[None, :] * (z_theta[:, None] - z_b[None, :])


def _cell_loglik(u, eta, c=None):
    if c is None:
        return u * eta - _softplus(eta)
    log1m_c = np.log1p(-c)
    log_p = np.logaddexp(np.log(c), log1m_c - _softplus(-eta))
    log_q = log1m_c - _softplus(eta)
    return np.where(u > 0, log_p, log_q)


def log_likelihood(u, theta, items: Sequence[ItemParameters], spec: ModelSpec) -> float:
    """Bernoulli log-likelihood of the responses under curve-form items."""
    u = u.u if isinstance(u, ResponseMatrix) else np.asarray(u)
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    if u.ndim != 2 or u.shape != (theta.size, len(items)):
        raise InvalidInputError(
            f"dimension mismatch: responses {u.shape}, {theta.size} abilities, {len(items)} items"
        )
    spec.space.check(theta)
    total = 0.0
    for i, item in enumerate(items):
        p = np.asarray(icc(theta, item, spec.space))
        col = u[:, i]
        cell = np.where(col > 0, np.log(p), np.log1p(-p))
        total += float(cell.sum())
    return total


def _deviance(u, params: dict, spec: ModelSpec) -> float:
    """-2 log-likelihood with parameters given on their natural scales."""
    space = spec.space
    slope = params["beta"] if spec.slope_mode == SHARED else params["a"]
    eta = _eta(space.transform(params["theta"]), space.transform(params["b"]), spec, slope)
    ll = _cell_loglik(u, eta, params.get("c"))
    return -2.0 * float(ll.sum())


def _to_transformed(name: str, x, space: AbilitySpace):
    if name in ("theta", "b"):
        return space.transform(x)
    if name in ("beta", "a"):
        return np.log(x)
    return np.log(x) - np.log1p(-x)


def _from_transformed(name: str, z, space: AbilitySpace):
    if name in ("theta", "b"):
        return space.inverse(z)
    if name in ("beta", "a"):
        return np.exp(z)
    return 1.0 / (1.0 + np.exp(-z))


def _constant_or_mean(x: np.ndarray, axis) -> np.ndarray:
    first = x[(0,) * len(axis)] if isinstance(axis, tuple) else x[0]
    if np.all(x == first):
        return np.array(first, copy=True)
    return x.mean(axis=axis)


def dic(samples: PosteriorSamples, u, spec: ModelSpec) -> tuple[float, float, float, float]:
    """Deviance information criterion.

    Returns ``(DIC, p_D, mean deviance, deviance at posterior mean)``. The
    posterior mean is taken on each block's transformed scale.
    """
    u = np.asarray(as_response_matrix(u).u, dtype=float)
    space = spec.space
    names = [k for k in spec.blocks() if k in samples.draws]
    if samples.n_draws == 0:
        raise InvalidInputError("posterior samples are empty")

    devs = np.empty((samples.n_chains, samples.n_draws))
    for ch in range(samples.n_chains):
        for t in range(samples.n_draws):
            devs[ch, t] = _deviance(u, {k: samples.draws[k][ch, t] for k in names}, spec)

    at_mean = {}
    for k in names:
        z = _to_transformed(k, samples.draws[k], space)
        at_mean[k] = _from_transformed(k, _constant_or_mean(z, (0, 1)), space)
    d_hat = _deviance(u, at_mean, spec)
    d_bar = float(_constant_or_mean(devs, (0, 1)))
    p_d = d_bar - d_hat
    return d_bar + p_d, p_d, d_bar, d_hat


# --------------------------------------------------------------------------
# Sampler
# --------------------------------------------------------------------------


def _standardize(x):
    sd = x.std()
    return (x - x.mean()) / sd if sd > 0 else np.zeros_like(x)


def _logit(p):
    return np.log(p) - np.log1p(-p)


class _Adapter:
    """Per-element random-walk scale, tuned on batch acceptance during burn-in."""

    def __init__(self, scale: float, size: int):
        self.log_scale = np.full(size, math.log(scale))
        self.batch = np.zeros(size)
        self.total = np.zeros(size)
        self.k = 0

    @property
    def scale(self):
        return np.exp(self.log_scale)

    def record(self, accepted, tuning: bool):
        if tuning:
            self.batch += accepted
        else:
            self.total += accepted

    def adapt(self, interval: int):
        self.k += 1
        rate = self.batch / interval
        step = min(0.5, 2.0 / math.sqrt(self.k))
        self.log_scale += np.where(rate > ACCEPT_HIGH, step, 0.0) - np.where(rate < ACCEPT_LOW, step, 0.0)
        self.batch[:] = 0.0


class _Chain:
    def __init__(self, u, spec: ModelSpec, priors: PriorSpec, cfg: McmcConfig, rng):
        self.u, self.spec, self.priors, self.cfg, self.rng = u, spec, priors, cfg, rng
        self.space = spec.space
        n, n_items = u.shape
        jitter = cfg.init_jitter

        self.zt = initial_abilities(u) + jitter * rng.standard_normal(n)
        p_item = (u.sum(axis=0) + 0.5) / (n + 1.0)
        self.zb = _standardize(_logit(1.0 - p_item)) + jitter * rng.standard_normal(n_items)
        self.log_beta = 0.0
        self.log_a = np.zeros(n_items)
        self.logit_c = np.full(n_items, _logit(0.1)) if spec.guessing_mode == FREE else None
        self._recenter()

        self.adapters = {
            "theta": _Adapter(cfg.scale("theta"), n),
            "b": _Adapter(cfg.scale("b"), n_items),
            "beta": _Adapter(cfg.scale("beta"), 1),
            "a": _Adapter(cfg.scale("a"), n_items),
            "c": _Adapter(cfg.scale("c"), n_items),
        }
        self.ll = self._loglik(self.zt, self.zb, self._slope(), self._c())
        if not np.all(np.isfinite(self.ll)):
            raise InitializationError("log-likelihood is not finite at the initial values")

    # state helpers
    def _slope(self, log_beta=None, log_a=None):
        if self.spec.slope_mode == SHARED:
            return math.exp(self.log_beta if log_beta is None else log_beta)
        return np.exp(self.log_a if log_a is None else log_a)

    def _c(self, logit_c=None):
        if self.spec.guessing_mode == FIXED:
            return None
        z = self.logit_c if logit_c is None else logit_c
        return 1.0 / (1.0 + np.exp(-z))

    def _loglik(self, zt, zb, slope, c):
        return _cell_loglik(self.u, _eta(zt, zb, self.spec, slope), c)

    def _interior(self, z):
        if self.space.kind is SpaceKind.REAL_LINE:
            return np.ones(z.shape, dtype=bool)
        return self.space.contains(self.space.inverse(z))

    def _recenter(self):
        if not self.priors.zero_sum_difficulties:
            return
        m = self.zb.mean()
        self.zb = self.zb - m
        shift = m / math.exp(self.log_beta) if self.spec.slope_mode == SHARED else m
        self.zt = self.zt - shift

    def _accept(self, delta, ok):
        return (np.log(self.rng.random(delta.shape)) < delta) & ok

    # block updates
    def update_theta(self, tuning):
        ad = self.adapters["theta"]
        prop = self.zt + ad.scale * self.rng.standard_normal(self.zt.shape)
        ll_p = self._loglik(prop, self.zb, self._slope(), self._c())
        prior = self.priors.theta
        delta = (
            ll_p.sum(axis=1) - self.ll.sum(axis=1)
            + prior.log_density_transformed(prop, self.space)
            - prior.log_density_transformed(self.zt, self.space)
        )
        acc = self._accept(np.nan_to_num(delta, nan=-np.inf), self._interior(prop))
        self.zt = np.where(acc, prop, self.zt)
        self.ll = np.where(acc[:, None], ll_p, self.ll)
        ad.record(acc, tuning)

    def update_b(self, tuning):
        ad = self.adapters["b"]
        prop = self.zb + ad.scale * self.rng.standard_normal(self.zb.shape)
        ll_p = self._loglik(self.zt, prop, self._slope(), self._c())
        prior = self.priors.b
        delta = (
            ll_p.sum(axis=0) - self.ll.sum(axis=0)
            + prior.log_density_transformed(prop, self.space)
            - prior.log_density_transformed(self.zb, self.space)
        )
        acc = self._accept(np.nan_to_num(delta, nan=-np.inf), self._interior(prop))
        self.zb = np.where(acc, prop, self.zb)
        self.ll = np.where(acc[None, :], ll_p, self.ll)
        ad.record(acc, tuning)

    def update_beta(self, tuning):
        ad = self.adapters["beta"]
        prop = self.log_beta + float(ad.scale[0]) * self.rng.standard_normal()
        ll_p = self._loglik(self.zt, self.zb, math.exp(prop), self._c())
        prec = self.priors.beta_precision

        def log_prior(lb):
            # half-normal on beta plus the log-scale Jacobian
            return -0.5 * prec * math.exp(2.0 * lb) + lb

        delta = float(ll_p.sum() - self.ll.sum()) + log_prior(prop) - log_prior(self.log_beta)
        acc = bool(math.log(self.rng.random()) < delta) if math.isfinite(delta) else False
        if acc:
            self.log_beta = prop
            self.ll = ll_p
        ad.record(np.array([acc], dtype=float), tuning)

    def update_a(self, tuning):
        ad = self.adapters["a"]
        prop = self.log_a + ad.scale * self.rng.standard_normal(self.log_a.shape)
        ll_p = self._loglik(self.zt, self.zb, np.exp(prop), self._c())
        prior = self.priors.a
        delta = (
            ll_p.sum(axis=0) - self.ll.sum(axis=0)
            - 0.5 * prior.p2 * ((prop - prior.p1) ** 2 - (self.log_a - prior.p1) ** 2)
        )
        acc = self._accept(np.nan_to_num(delta, nan=-np.inf), True)
        self.log_a = np.where(acc, prop, self.log_a)
        self.ll = np.where(acc[None, :], ll_p, self.ll)
        ad.record(acc, tuning)

    def update_c(self, tuning):
        ad = self.adapters["c"]
        prop = self.logit_c + ad.scale * self.rng.standard_normal(self.logit_c.shape)
        ll_p = self._loglik(self.zt, self.zb, self._slope(), self._c(prop))
        al, be = self.priors.c_alpha, self.priors.c_beta

        def log_prior(z):
            # beta prior on c with the logit Jacobian: al*log(c) + be*log(1-c)
            return -al * np.logaddexp(0.0, -z) - be * np.logaddexp(0.0, z)

        delta = ll_p.sum(axis=0) - self.ll.sum(axis=0) + log_prior(prop) - log_prior(self.logit_c)
        acc = self._accept(np.nan_to_num(delta, nan=-np.inf), True)
        self.logit_c = np.where(acc, prop, self.logit_c)
        self.ll = np.where(acc[None, :], ll_p, self.ll)
        ad.record(acc, tuning)

    def sweep(self, tuning):
        self.update_theta(tuning)
        self.update_b(tuning)
        if self.spec.slope_mode == SHARED:
            self.update_beta(tuning)
        else:
            self.update_a(tuning)
        if self.spec.guessing_mode == FREE:
            self.update_c(tuning)
        self._recenter()

    def snapshot(self) -> dict[str, np.ndarray]:
        out = {
            "theta": np.asarray(self.space.inverse(self.zt)),
            "b": np.asarray(self.space.inverse(self.zb)),
        }
        if self.spec.slope_mode == SHARED:
            out["beta"] = np.asarray(math.exp(self.log_beta))
        else:
            out["a"] = np.exp(self.log_a)
        if self.spec.guessing_mode == FREE:
            out["c"] = self._c()
        return out


def _run_chain(u, spec, priors, cfg: McmcConfig, seed_seq) -> tuple[dict, dict]:
    rng = np.random.default_rng(seed_seq)
    chain = _Chain(u, spec, priors, cfg, rng)
    blocks = spec.blocks()
    store = {}
    k = 0
    for t in range(1, cfg.iterations + 1):
        tuning = t <= cfg.burn_in
        chain.sweep(tuning)
        if tuning and t % cfg.adapt_interval == 0:
            for name in blocks:
                chain.adapters[name].adapt(cfg.adapt_interval)
        if not tuning and (t - cfg.burn_in) % cfg.thin == 0:
            snap = chain.snapshot()
            if not store:
                store = {name: np.empty((cfg.n_retained,) + snap[name].shape) for name in blocks}
            for name in blocks:
                store[name][k] = snap[name]
            k += 1
    n_post = cfg.iterations - cfg.burn_in
    acceptance = {name: float(chain.adapters[name].total.mean() / n_post) for name in blocks}
    return store, acceptance


def fit(u, spec: ModelSpec, priors: PriorSpec | None = None, cfg: McmcConfig | None = None) -> FitResult:
    """Sample the joint posterior of abilities, difficulties and slopes.

    Chains are seeded from ``cfg.seed`` via ``SeedSequence.spawn`` and
    differ only in seed and jittered initial values, so the same inputs
    always produce the same draws.
    """
    response = as_response_matrix(u)
    priors = priors or PriorSpec.for_space(spec.space)
    priors.validate(spec.space)
    cfg = (cfg or McmcConfig()).with_seed()

    warnings = [
        f"item {iid} has identical responses from every subject; its difficulty is only weakly identified"
        for iid in response.degenerate_items()
    ]
    for w in warnings:
        log.warning(w)

    uf = response.u.astype(float)
    seeds = np.random.SeedSequence(cfg.seed).spawn(cfg.chains)
    per_chain = [_run_chain(uf, spec, priors, cfg, s) for s in seeds]
    draws = {name: np.stack([c[0][name] for c in per_chain]) for name in spec.blocks()}
    acceptance = {
        name: float(np.mean([c[1][name] for c in per_chain])) for name in spec.blocks()
    }
    samples = PosteriorSamples(draws, acceptance)
    dic_value, p_d, d_bar, d_hat = dic(samples, response, spec)
    return FitResult(
        samples=samples,
        spec=spec,
        priors=priors,
        config=cfg,
        response=response,
        dic=dic_value,
        mean_deviance=d_bar,
        deviance_at_mean=d_hat,
        p_d=p_d,
        warnings=warnings,
    )


# --------------------------------------------------------------------------
# Abilities under fixed items
# --------------------------------------------------------------------------


class FixedItems:
    """Curve-form items frozen for scoring: slopes ``D a``, ``g(b)`` and ``c``."""

    def __init__(self, items: Sequence[ItemParameters], space: AbilitySpace):
        if not items:
            raise InvalidInputError("need at least one item")
        for item in items:
            item.validate(space)
        self.items = tuple(items)
        self.space = space
        self.slope = np.array([it.D * it.a for it in items])
        self.zb = np.asarray(space.transform(np.array([it.b for it in items])), dtype=float)
        c = np.array([it.c for it in items])
        self.c = c if np.any(c > 0) else None

    def __len__(self):
        return len(self.items)

    def cell_loglik(self, u, z_theta):
        eta = (z_theta[:, None] - self.zb[None, :]) * self.slope[None, :]
        return _cell_loglik(u, eta, self.c)

    def interior(self, z):
        if self.space.kind is SpaceKind.REAL_LINE:
            return np.ones(z.shape, dtype=bool)
        return self.space.contains(self.space.inverse(z))


def initial_abilities(u) -> np.ndarray:
    """Standardized logit of each subject's smoothed proportion correct."""
    score = (u.sum(axis=1) + 0.5) / (u.shape[1] + 1.0)
    return _standardize(_logit(score))


def sample_abilities(u, items: Sequence[ItemParameters], space: AbilitySpace, prior, cfg: McmcConfig) -> np.ndarray:
    """Posterior ability draws with item parameters held fixed.

    Returns an array shaped ``(chains, draws, subjects)`` on the natural scale.
    """
    u = np.asarray(as_response_matrix(u).u, dtype=float)
    fixed = FixedItems(items, space)
    if u.shape[1] != len(fixed):
        raise InvalidInputError("item count does not match the response matrix")
    prior.check_space(space, "ability")
    cfg = cfg.with_seed()
    out = np.empty((cfg.chains, cfg.n_retained, u.shape[0]))
    for ch, seq in enumerate(np.random.SeedSequence(cfg.seed).spawn(cfg.chains)):
        rng = np.random.default_rng(seq)
        z = initial_abilities(u) + cfg.init_jitter * rng.standard_normal(u.shape[0])
        if space.kind is SpaceKind.POSITIVE_HALF_LINE and prior.family == "lognormal":
            z = z / math.sqrt(prior.p2) + prior.p1
        ll = fixed.cell_loglik(u, z).sum(axis=1)
        ad = _Adapter(cfg.scale("theta"), u.shape[0])
        k = 0
        for t in range(1, cfg.iterations + 1):
            tuning = t <= cfg.burn_in
            prop = z + ad.scale * rng.standard_normal(z.shape)
            ll_p = fixed.cell_loglik(u, prop).sum(axis=1)
            delta = ll_p - ll + prior.log_density_transformed(prop, space) - prior.log_density_transformed(z, space)
            acc = (np.log(rng.random(z.shape)) < np.nan_to_num(delta, nan=-np.inf)) & fixed.interior(prop)
            z = np.where(acc, prop, z)
            ll = np.where(acc, ll_p, ll)
            ad.record(acc, tuning)
            if tuning and t % cfg.adapt_interval == 0:
                ad.adapt(cfg.adapt_interval)
            if not tuning and (t - cfg.burn_in) % cfg.thin == 0:
                out[ch, k] = space.inverse(z)
                k += 1
    return out
