"""Prior distributions, parametrized the BUGS way (second argument = precision)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError
from .model import AbilitySpace, SpaceKind

_COMPATIBLE = {
    "normal": SpaceKind.REAL_LINE,
    "lognormal": SpaceKind.POSITIVE_HALF_LINE,
    "uniform": SpaceKind.BOUNDED_INTERVAL,
}


@dataclass(frozen=True)
class Prior:
    """``normal(mean, precision)``, ``lognormal(meanlog, precision)`` or ``uniform(low, high)``."""

    family: str
    p1: float
    p2: float

    def __post_init__(self):
        if self.family not in _COMPATIBLE:
            raise ConfigurationError(f"unknown prior family {self.family!r}")
        if self.family == "uniform":
            if not self.p1 < self.p2:
                raise ConfigurationError(f"uniform prior needs low < high, got {self.p1}, {self.p2}")
        elif not self.p2 > 0:
            raise ConfigurationError(f"{self.family} precision must be > 0, got {self.p2}")

    @classmethod
    def normal(cls, mean=0.0, precision=1.0):
        return cls("normal", float(mean), float(precision))

    @classmethod
    def lognormal(cls, meanlog=0.0, precision=1.0):
        return cls("lognormal", float(meanlog), float(precision))

    @classmethod
    def uniform(cls, low, high):
        return cls("uniform", float(low), float(high))

    def check_space(self, space: AbilitySpace, what: str) -> None:
        if _COMPATIBLE[self.family] is not space.kind:
            raise ConfigurationError(
                f"{what} prior {self.family!r} does not match the {space.describe()} ability space"
            )
        if self.family == "uniform" and (self.p1 != 0.0 or self.p2 != space.R):
            raise ConfigurationError(
                f"{what} uniform prior must be U(0, R={space.R:g}), got U({self.p1:g}, {self.p2:g})"
            )

    def log_density_transformed(self, z, space: AbilitySpace):
        """Log prior density of ``z = g(x)`` up to an additive constant.

        Includes the Jacobian of ``x = g^-1(z)``; for the normal and the
        lognormal families this reduces to a Gaussian in ``z``.
        """
        z = np.asarray(z, dtype=float)
        if self.family == "uniform":
            return space.log_jacobian(z)
        return -0.5 * self.p2 * (z - self.p1) ** 2

    def sample(self, rng: np.random.Generator, size):
        sd = None if self.family == "uniform" else 1.0 / math.sqrt(self.p2)
        if self.family == "normal":
            return rng.normal(self.p1, sd, size)
        if self.family == "lognormal":
            return rng.lognormal(self.p1, sd, size)
        return rng.uniform(self.p1, self.p2, size)

    def to_dict(self) -> dict:
        return {"family": self.family, "p1": self.p1, "p2": self.p2}


def default_ability_prior(space: AbilitySpace) -> Prior:
    if space.kind is SpaceKind.REAL_LINE:
        return Prior.normal(0.0, 1.0)
    if space.kind is SpaceKind.POSITIVE_HALF_LINE:
        return Prior.lognormal(1.64, 1.0)
    return Prior.uniform(0.0, space.R)


def default_difficulty_prior(space: AbilitySpace) -> Prior:
    if space.kind is SpaceKind.REAL_LINE:
        return Prior.normal(0.0, 1e-4)
    if space.kind is SpaceKind.POSITIVE_HALF_LINE:
        return Prior.lognormal(1.64, 1.0)
    return Prior.uniform(0.0, space.R)


@dataclass(frozen=True)
class PriorSpec:
    """Priors for every block the sampler may update.

    ``beta_precision`` belongs to a half-normal on the shared dispersion.
    The discrimination and guessing priors only matter for per-item slopes
    and free guessing respectively.
    """

    b: Prior
    theta: Prior
    beta_precision: float = 1e-4
    zero_sum_difficulties: bool = True
    a: Prior = field(default_factory=lambda: Prior.lognormal(0.0, 1.0))
    c_alpha: float = 1.0
    c_beta: float = 1.0

    @classmethod
    def for_space(cls, space: AbilitySpace, **overrides) -> "PriorSpec":
        kw = dict(b=default_difficulty_prior(space), theta=default_ability_prior(space))
        kw.update(overrides)
        return cls(**kw)

    def validate(self, space: AbilitySpace) -> None:
        self.b.check_space(space, "difficulty")
        self.theta.check_space(space, "ability")
        if self.a.family != "lognormal":
            raise ConfigurationError("discrimination prior must be lognormal")
        if not self.beta_precision > 0:
            raise ConfigurationError("half-normal precision must be > 0")
        if not (self.c_alpha > 0 and self.c_beta > 0):
            raise ConfigurationError("guessing beta-prior shapes must be > 0")

    def to_dict(self) -> dict:
        return {
            "b": self.b.to_dict(),
            "theta": self.theta.to_dict(),
            "beta_precision": self.beta_precision,
            "zero_sum_difficulties": self.zero_sum_difficulties,
            "a": self.a.to_dict(),
            "c_alpha": self.c_alpha,
            "c_beta": self.c_beta,
        }
