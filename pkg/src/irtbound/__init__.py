"""Item response models with abilities on the real line, (0, inf) or (0, R)."""

from .anchoring import AnchorInterval, AnchorLevels, anchor_check, anchor_interval, find_levels
from .data import ResponseMatrix, dichotomize
from .diagnostics import gelman_rubin
from .errors import (
    ConfigurationError,
    DomainError,
    EmptyResultError,
    InitializationError,
    InvalidInputError,
    IRTError,
    NoSolutionError,
    NumericalError,
    ParseError,
)
from .mcmc import FitResult, McmcConfig, ModelSpec, PosteriorSamples, dic, fit, log_likelihood, sample_abilities
from .model import (
    AbilitySpace,
    ItemParameters,
    Link,
    SpaceKind,
    icc,
    icc_invert,
    icc_slope_at_b,
    link_apply,
    link_invert,
)
from .priors import Prior, PriorSpec
from .regression import RegressionResult, RegressionSpec, fit_regression, unit_change_factor
from .simulation import CovariateDesign, SimulationDesign, recovery_report, shared_dispersion_items, simulate

__version__ = "0.1.0"
