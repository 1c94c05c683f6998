"""Latent regression: transformed abilities as a linear function of covariates.

With items frozen from an earlier calibration, the model is::

    h(theta_j) = x_j' beta + e_j,   e_j ~ N(0, sigma2)

where ``h`` is the ability space's transform. Abilities are updated by
random-walk Metropolis; ``beta`` and the residual precision ``1/sigma2``
have conjugate normal and gamma full conditionals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .data import as_response_matrix
from .diagnostics import gelman_rubin, summarize
from .errors import ConfigurationError, InvalidInputError
from .mcmc import FixedItems, McmcConfig, _Adapter, initial_abilities
from .model import AbilitySpace, ItemParameters, SpaceKind

_TRANSFORMS = {
    SpaceKind.REAL_LINE: "identity",
    SpaceKind.POSITIVE_HALF_LINE: "log",
}


def transform_name(space: AbilitySpace) -> str:
    """Name of ``h`` for a space: identity, log, or the bounded link."""
    return _TRANSFORMS.get(space.kind) or space.link.value


@dataclass(frozen=True)
class RegressionSpec:
    X: np.ndarray
    space: AbilitySpace
    fixed_items: Sequence[ItemParameters]
    h: str | None = None
    coef_precision: float = 1e-5
    gamma_shape: float = 1e-4
    gamma_rate: float = 1e-4
    covariate_names: tuple[str, ...] = ()

    def __post_init__(self):
        X = np.asarray(self.X, dtype=float)
        if X.ndim == 1:
            X = X[:, None]
        if X.ndim != 2 or not np.all(np.isfinite(X)):
            raise InvalidInputError("covariate matrix must be a finite 2-D array")
        if np.linalg.matrix_rank(X) < X.shape[1]:
            raise InvalidInputError(
                f"covariate matrix ({X.shape[0]} x {X.shape[1]}) is rank deficient"
            )
        object.__setattr__(self, "X", X)
        expected = transform_name(self.space)
        if self.h is None:
            object.__setattr__(self, "h", expected)
        elif self.h != expected:
            raise ConfigurationError(
                f"transform {self.h!r} does not match the {self.space.describe()} space (expects {expected!r})"
            )
        names = tuple(self.covariate_names) or tuple(f"x{k}" for k in range(X.shape[1]))
        if len(names) != X.shape[1]:
            raise InvalidInputError("covariate_names must match the columns of X")
        object.__setattr__(self, "covariate_names", names)
        object.__setattr__(self, "fixed_items", tuple(self.fixed_items))
        if not (self.coef_precision > 0 and self.gamma_shape > 0 and self.gamma_rate > 0):
            raise ConfigurationError("prior hyperparameters must be > 0")


@dataclass
class RegressionResult:
    coef: np.ndarray          # (chains, draws, r)
    sigma2: np.ndarray        # (chains, draws)
    residuals: np.ndarray     # (chains, draws, n)
    spec: RegressionSpec
    config: McmcConfig
    dic: float
    p_d: float
    mean_deviance: float
    deviance_at_mean: float
    acceptance: float
    items: tuple[ItemParameters, ...] = field(default=())

    def theta_draws(self) -> np.ndarray:
        z = np.einsum("cdk,nk->cdn", self.coef, self.spec.X) + self.residuals
        return np.asarray(self.spec.space.inverse(z))

    def summary(self) -> dict[str, dict[str, np.ndarray]]:
        out = {}
        for name, draws in (("coef", self.coef), ("sigma2", self.sigma2)):
            s = summarize(draws)
            s["rhat"] = gelman_rubin(draws) if self.config.chains > 1 else None
            out[name] = s
        return out


def unit_change_factor(a: float, coef: float, D: float = 1.7) -> float:
    """Odds-scale factor ``exp(-D a coef)`` for a unit increase in one covariate.

    A factor below 1 shrinks the ``exp(-D a (...))`` term of the curve, so
    positive coefficients raise the response probability.
    """
    if not (a > 0 and D > 0):
        raise InvalidInputError("a and D must be > 0")
    return math.exp(-D * a * coef)


def _run_chain(u, spec: RegressionSpec, fixed: FixedItems, cfg: McmcConfig, seed_seq):
    rng = np.random.default_rng(seed_seq)
    X = spec.X
    n, r = X.shape
    xtx = X.T @ X
    prior_prec = spec.coef_precision * np.eye(r)

    z = initial_abilities(u) + cfg.init_jitter * rng.standard_normal(n)
    coef = np.linalg.lstsq(X, z, rcond=None)[0]
    tau = 1.0 / max(float(np.var(z - X @ coef)), 1e-3)
    ll = fixed.cell_loglik(u, z).sum(axis=1)
    ad = _Adapter(cfg.scale("theta"), n)

    m = cfg.n_retained
    coef_out = np.empty((m, r))
    sig_out = np.empty(m)
    eps_out = np.empty((m, n))
    dev_out = np.empty(m)
    z_sum = np.zeros(n)
    k = 0
    for t in range(1, cfg.iterations + 1):
        tuning = t <= cfg.burn_in

        mu = X @ coef
        prop = z + ad.scale * rng.standard_normal(n)
        ll_p = fixed.cell_loglik(u, prop).sum(axis=1)
        delta = ll_p - ll - 0.5 * tau * ((prop - mu) ** 2 - (z - mu) ** 2)
        acc = (np.log(rng.random(n)) < np.nan_to_num(delta, nan=-np.inf)) & fixed.interior(prop)
        z = np.where(acc, prop, z)
        ll = np.where(acc, ll_p, ll)
        ad.record(acc, tuning)

        prec = tau * xtx + prior_prec
        chol = np.linalg.cholesky(prec)
        mean = np.linalg.solve(prec, tau * (X.T @ z))
        coef = mean + np.linalg.solve(chol.T, rng.standard_normal(r))

        resid = z - X @ coef
        rate = spec.gamma_rate + 0.5 * float(resid @ resid)
        tau = rng.gamma(spec.gamma_shape + 0.5 * n, 1.0 / rate)

        if tuning and t % cfg.adapt_interval == 0:
            ad.adapt(cfg.adapt_interval)
        if not tuning and (t - cfg.burn_in) % cfg.thin == 0:
            coef_out[k] = coef
            sig_out[k] = 1.0 / tau
            eps_out[k] = resid
            dev_out[k] = -2.0 * float(ll.sum())
            z_sum += z
            k += 1
    acceptance = float(ad.total.mean() / (cfg.iterations - cfg.burn_in))
    return coef_out, sig_out, eps_out, dev_out, z_sum / m, acceptance


def fit_regression(u, spec: RegressionSpec, cfg: McmcConfig | None = None) -> RegressionResult:
    """Sample ``(beta, sigma2, residuals)`` with the items held fixed."""
    response = as_response_matrix(u)
    uf = response.u.astype(float)
    n, n_items = uf.shape
    if spec.X.shape[0] != n:
        raise InvalidInputError(f"covariate rows ({spec.X.shape[0]}) do not match subjects ({n})")
    if len(spec.fixed_items) != n_items:
        raise InvalidInputError(f"{len(spec.fixed_items)} fixed items for {n_items} response columns")
    fixed = FixedItems(spec.fixed_items, spec.space)
    cfg = (cfg or McmcConfig()).with_seed()

    seeds = np.random.SeedSequence(cfg.seed).spawn(cfg.chains)
    runs = [_run_chain(uf, spec, fixed, cfg, s) for s in seeds]
    coef = np.stack([r[0] for r in runs])
    sigma2 = np.stack([r[1] for r in runs])
    eps = np.stack([r[2] for r in runs])
    devs = np.stack([r[3] for r in runs])
    z_bar = np.mean([r[4] for r in runs], axis=0)

    d_bar = float(devs.mean())
    d_hat = -2.0 * float(fixed.cell_loglik(uf, z_bar).sum())
    p_d = d_bar - d_hat
    return RegressionResult(
        coef=coef,
        sigma2=sigma2,
        residuals=eps,
        spec=spec,
        config=cfg,
        dic=d_bar + p_d,
        p_d=p_d,
        mean_deviance=d_bar,
        deviance_at_mean=d_hat,
        acceptance=float(np.mean([r[5] for r in runs])),
        items=spec.fixed_items,
    )
