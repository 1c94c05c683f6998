"""Convergence diagnostics and posterior summaries."""

from __future__ import annotations

import numpy as np

from .errors import InvalidInputError

MIN_DRAWS = 10


def gelman_rubin(draws) -> np.ndarray | None:
    """Potential scale reduction factor for each parameter.

    Parameters
    ----------
    draws : array_like
        Shape ``(chains, draws, ...)``; trailing axes index parameters.

    Returns
    -------
    ndarray or None
        R-hat with the trailing shape of ``draws``; ``None`` for a single
        chain. A parameter with zero total variance gets R-hat = 1.
    """
    x = np.asarray(draws, dtype=float)
    if x.ndim < 2:
        raise InvalidInputError("draws must have shape (chains, draws, ...)")
    m, n = x.shape[:2]
    if m < 2:
        return None
    if n < MIN_DRAWS:
        raise InvalidInputError(f"need at least {MIN_DRAWS} draws per chain, got {n}")

    chain_means = x.mean(axis=1)
    within = x.var(axis=1, ddof=1).mean(axis=0)
    between_over_n = chain_means.var(axis=0, ddof=1)
    pooled = (n - 1) / n * within + between_over_n

    with np.errstate(divide="ignore", invalid="ignore"):
        rhat = np.sqrt(pooled / within)
    rhat = np.where(pooled == 0.0, 1.0, rhat)
    rhat = np.where((within == 0.0) & (pooled > 0.0), np.inf, rhat)
    return rhat


def summarize(draws) -> dict[str, np.ndarray]:
    """Mean, sd and 2.5/50/97.5% quantiles pooled over chains."""
    x = np.asarray(draws, dtype=float)
    flat = x.reshape((-1,) + x.shape[2:])
    q = np.quantile(flat, [0.025, 0.5, 0.975], axis=0)
    return {
        "mean": flat.mean(axis=0),
        "sd": flat.std(axis=0, ddof=1) if flat.shape[0] > 1 else np.zeros(flat.shape[1:]),
        "q025": q[0],
        "q50": q[1],
        "q975": q[2],
    }
