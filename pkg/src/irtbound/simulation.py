"""Synthetic abilities and responses from known parameters, plus recovery summaries."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .data import ResponseMatrix
from .errors import ConfigurationError, InvalidInputError
from .mcmc import PER_ITEM, SHARED, FitResult
from .model import AbilitySpace, ItemParameters, icc
from .priors import Prior, default_ability_prior


@dataclass(frozen=True)
class CovariateDesign:
    """Abilities generated as ``g(theta) = X @ coef + N(0, sigma2)``."""

    X: np.ndarray
    coef: Sequence[float]
    sigma2: float = 1.0

    def __post_init__(self):
        X = np.atleast_2d(np.asarray(self.X, dtype=float))
        if X.shape[1] != len(self.coef):
            raise ConfigurationError(f"X has {X.shape[1]} columns but {len(self.coef)} coefficients")
        if not self.sigma2 > 0:
            raise ConfigurationError("sigma2 must be > 0")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "coef", tuple(float(v) for v in self.coef))


@dataclass(frozen=True)
class SimulationDesign:
    space: AbilitySpace
    n: int
    items: Sequence[ItemParameters]
    seed: int
    ability: Prior | None = None
    covariates: CovariateDesign | None = None
    abilities: np.ndarray | None = None

    def __post_init__(self):
        if self.seed is None:
            raise ConfigurationError("a simulation design needs an explicit seed")
        if self.n < 1 or not self.items:
            raise InvalidInputError("design needs at least one subject and one item")
        for item in self.items:
            item.validate(self.space)
        if self.ability is None:
            object.__setattr__(self, "ability", default_ability_prior(self.space))
        self.ability.check_space(self.space, "ability")
        if self.covariates is not None and self.covariates.X.shape[0] != self.n:
            raise ConfigurationError("covariate matrix rows must equal n")
        if self.abilities is not None:
            theta = self.space.check(np.asarray(self.abilities, dtype=float))
            if theta.shape != (self.n,):
                raise ConfigurationError("fixed abilities must have length n")


def shared_dispersion_items(
    space: AbilitySpace, b: Sequence[float], beta: float, D: float = 1.7
) -> list[ItemParameters]:
    """Curve-form items equivalent to ``logit P = beta * g(theta) - g(b_i)``."""
    zb = np.asarray(space.transform(np.asarray(b, dtype=float))) / beta
    return [ItemParameters(beta / D, float(bi), 0.0, D) for bi in np.atleast_1d(space.inverse(zb))]


def probability_matrix(theta, items: Sequence[ItemParameters], space: AbilitySpace) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    return np.column_stack([icc(theta, item, space) for item in items])


def simulate(design: SimulationDesign) -> tuple[np.ndarray, ResponseMatrix | np.ndarray]:
    """Draw abilities, then Bernoulli responses in row-major (subject, item) order.

    Returns a :class:`ResponseMatrix`, or a bare array when the design is too
    small for one (a single subject or item).
    """
    space = design.space
    rng = np.random.default_rng(design.seed)
    if design.abilities is not None:
        theta = np.asarray(design.abilities, dtype=float).copy()
    elif design.covariates is not None:
        cov = design.covariates
        z = cov.X @ np.asarray(cov.coef) + rng.normal(0.0, np.sqrt(cov.sigma2), design.n)
        theta = np.asarray(space.inverse(z))
    else:
        theta = design.ability.sample(rng, design.n)
    theta = space.check(theta)

    p = probability_matrix(theta, design.items, space)
    u = (rng.random(p.shape) < p).astype(np.int8)
    if design.n >= 2 and len(design.items) >= 2:
        return theta, ResponseMatrix(u)
    return theta, u


def _stats(truth, est, lo=None, hi=None) -> dict:
    truth = np.asarray(truth, dtype=float)
    est = np.asarray(est, dtype=float)
    err = est - truth
    out = {"bias": float(err.mean()), "rmse": float(np.sqrt(np.mean(err**2)))}
    if truth.size > 1 and truth.std() > 0 and est.std() > 0:
        out["correlation"] = float(np.corrcoef(truth, est)[0, 1])
    else:
        out["correlation"] = None
    if lo is not None:
        out["coverage"] = float(np.mean((lo <= truth) & (truth <= hi)))
    return out


def _interval(draws):
    flat = draws.reshape((-1,) + draws.shape[2:])
    lo, hi = np.quantile(flat, [0.025, 0.975], axis=0)
    return flat.mean(axis=0), lo, hi


def recovery_report(truth: SimulationDesign, fit: FitResult, abilities=None) -> dict:
    """Bias, RMSE, correlation and 95% interval coverage per parameter class.

    Difficulties are compared in curve form (the ``b`` at which the curve
    reaches ``(1+c)/2``). With a shared dispersion the slope class is
    ``beta = D * a``.
    """
    if len(truth.items) != fit.response.n_items:
        raise InvalidInputError("truth and fit disagree on the number of items")
    report = {}

    a_draws, b_draws = fit.icc_form_draws()
    true_b = np.array([it.b for it in truth.items])
    report["difficulty"] = _stats(true_b, *_interval(b_draws))

    true_a = np.array([it.a for it in truth.items])
    if fit.spec.slope_mode == SHARED and np.all(true_a == true_a[0]):
        true_beta = truth.items[0].D * true_a[0]
        report["dispersion"] = _stats([true_beta], *_interval(fit.samples.draws["beta"][..., None]))
    elif fit.spec.slope_mode == PER_ITEM:
        report["discrimination"] = _stats(true_a, *_interval(fit.samples.draws["a"]))

    if "c" in fit.samples.draws:
        true_c = np.array([it.c for it in truth.items])
        report["guessing"] = _stats(true_c, *_interval(fit.samples.draws["c"]))

    if abilities is not None:
        abilities = np.asarray(abilities, dtype=float)
        if abilities.shape != (fit.response.n_subjects,):
            raise InvalidInputError("abilities must have one entry per subject")
        report["ability"] = _stats(abilities, *_interval(fit.samples.draws["theta"]))
    return report
