"""Item characteristic curves on the real line, the half-line and (0, R).

Every curve has the same shape once the ability is mapped onto the real
line by the space's transform ``g``::

    P(theta) = c + (1 - c) * sigmoid(D * a * (g(theta) - g(b)))

``g`` is the identity on the real line, ``log`` on the positive half-line
and ``link(theta / R)`` on the bounded interval.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import special, stats

from .errors import DomainError, NoSolutionError

# Inputs closer than this to a domain boundary are rejected, not clamped.
BOUNDARY_TOL = 1e-12


class Link(str, Enum):
    LOGIT = "logit"
    PROBIT = "probit"
    CLOGLOG = "cloglog"
    LOGLOG = "loglog"


class SpaceKind(str, Enum):
    REAL_LINE = "real"
    POSITIVE_HALF_LINE = "positive"
    BOUNDED_INTERVAL = "bounded"


def sigmoid(x):
    """Overflow-safe logistic function (branches on the sign of ``x``)."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out if out.ndim else float(out)


def logit(p):
    p = np.asarray(p, dtype=float)
    out = np.log(p) - np.log1p(-p)
    return out if out.ndim else float(out)


# --------------------------------------------------------------------------
# Links on (0, 1)
# --------------------------------------------------------------------------


def _check_unit(x, name="x"):
    arr = np.asarray(x, dtype=float)
    bad = ~((arr > 0.0) & (arr < 1.0))
    if np.any(bad):
        value = arr[bad].flat[0] if arr.ndim else float(arr)
        raise DomainError(f"{name}={value!r} is outside the open interval (0, 1)")
    return arr


def link_apply(link: Link | str, x):
    """Map a fraction in (0, 1) onto the real line."""
    link = Link(link)
    x = _check_unit(x)
    if link is Link.LOGIT:
        out = np.log(x) - np.log1p(-x)
    elif link is Link.PROBIT:
        out = special.ndtri(x)
    elif link is Link.CLOGLOG:
        out = np.log(-np.log1p(-x))
    else:
        out = -np.log(-np.log(x))
    return out if out.ndim else float(out)


def link_invert(link: Link | str, y):
    """Inverse of :func:`link_apply`."""
    link = Link(link)
    y = np.asarray(y, dtype=float)
    if not np.all(np.isfinite(y)):
        raise DomainError("link_invert needs finite arguments")
    if link is Link.LOGIT:
        out = sigmoid(y)
    elif link is Link.PROBIT:
        out = special.ndtr(y)
    elif link is Link.CLOGLOG:
        out = -np.expm1(-np.exp(y))
    else:
        out = np.exp(-np.exp(-y))
    out = np.asarray(out, dtype=float)
    return out if out.ndim else float(out)


def link_derivative(link: Link | str, x):
    """Analytic derivative of the link with respect to the fraction ``x``."""
    link = Link(link)
    x = _check_unit(x)
    if link is Link.LOGIT:
        out = 1.0 / (x * (1.0 - x))
    elif link is Link.PROBIT:
        out = 1.0 / stats.norm.pdf(special.ndtri(x))
    elif link is Link.CLOGLOG:
        out = 1.0 / ((1.0 - x) * -np.log1p(-x))
    else:
        out = 1.0 / (x * -np.log(x))
    return out if out.ndim else float(out)


def link_inverse_logpdf(link: Link | str, y):
    """``log d link_invert(y) / dy``, the log-Jacobian of the inverse link."""
    link = Link(link)
    y = np.asarray(y, dtype=float)
    if link is Link.LOGIT:
        return -np.logaddexp(0.0, y) - np.logaddexp(0.0, -y)
    if link is Link.PROBIT:
        return stats.norm.logpdf(y)
    if link is Link.CLOGLOG:
        return y - np.exp(y)
    return -y - np.exp(-y)


# --------------------------------------------------------------------------
# Ability spaces
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class AbilitySpace:
    """The latent continuum in force: real line, half-line or (0, R)."""

    kind: SpaceKind = SpaceKind.REAL_LINE
    R: float | None = None
    link: Link = Link.LOGIT

    def __post_init__(self):
        object.__setattr__(self, "kind", SpaceKind(self.kind))
        object.__setattr__(self, "link", Link(self.link))
        if self.kind is SpaceKind.BOUNDED_INTERVAL:
            if self.R is None or not math.isfinite(self.R) or self.R <= 0:
                raise DomainError(f"bounded ability space needs R > 0, got R={self.R!r}")
            object.__setattr__(self, "R", float(self.R))
        elif self.R is not None:
            raise DomainError("R is only meaningful for the bounded ability space")

    @classmethod
    def real_line(cls) -> "AbilitySpace":
        return cls(SpaceKind.REAL_LINE)

    @classmethod
    def positive(cls) -> "AbilitySpace":
        return cls(SpaceKind.POSITIVE_HALF_LINE)

    @classmethod
    def bounded(cls, R: float, link: Link | str = Link.LOGIT) -> "AbilitySpace":
        return cls(SpaceKind.BOUNDED_INTERVAL, R=R, link=Link(link))

    @property
    def lower(self) -> float:
        return -math.inf if self.kind is SpaceKind.REAL_LINE else 0.0

    @property
    def upper(self) -> float:
        return self.R if self.kind is SpaceKind.BOUNDED_INTERVAL else math.inf

    def contains(self, theta) -> np.ndarray:
        t = np.asarray(theta, dtype=float)
        ok = np.isfinite(t)
        if self.kind is not SpaceKind.REAL_LINE:
            ok &= t > BOUNDARY_TOL
        if self.kind is SpaceKind.BOUNDED_INTERVAL:
            ok &= t < self.R - BOUNDARY_TOL
        return ok

    def check(self, theta, name: str = "theta") -> np.ndarray:
        t = np.asarray(theta, dtype=float)
        ok = self.contains(t)
        if not np.all(ok):
            value = t[~ok].flat[0] if t.ndim else float(t)
            raise DomainError(
                f"{name}={value!r} is outside the {self.describe()} ability domain"
            )
        return t

    def describe(self) -> str:
        if self.kind is SpaceKind.REAL_LINE:
            return "real-line"
        if self.kind is SpaceKind.POSITIVE_HALF_LINE:
            return "(0, inf)"
        return f"(0, {self.R:g}) {self.link.value}"

    def transform(self, theta):
        """``g(theta)``: map the ability domain onto the real line."""
        t = self.check(theta)
        if self.kind is SpaceKind.REAL_LINE:
            out = t.astype(float, copy=True)
        elif self.kind is SpaceKind.POSITIVE_HALF_LINE:
            out = np.log(t)
        else:
            out = np.asarray(link_apply(self.link, t / self.R))
        return out if out.ndim else float(out)

    def inverse(self, z):
        """``g^-1(z)``; no domain check on the result."""
        z = np.asarray(z, dtype=float)
        if self.kind is SpaceKind.REAL_LINE:
            out = z.copy()
        elif self.kind is SpaceKind.POSITIVE_HALF_LINE:
            out = np.exp(z)
        else:
            out = self.R * np.asarray(link_invert(self.link, z))
        return out if out.ndim else float(out)

    def derivative(self, theta):
        """``g'(theta)``, analytic."""
        t = self.check(theta)
        if self.kind is SpaceKind.REAL_LINE:
            out = np.ones_like(t)
        elif self.kind is SpaceKind.POSITIVE_HALF_LINE:
            out = 1.0 / t
        else:
            out = np.asarray(link_derivative(self.link, t / self.R)) / self.R
        return out if out.ndim else float(out)

    def log_jacobian(self, z):
        """``log |d g^-1(z) / dz|``, used when sampling on the transformed scale."""
        z = np.asarray(z, dtype=float)
        if self.kind is SpaceKind.REAL_LINE:
            return np.zeros_like(z)
        if self.kind is SpaceKind.POSITIVE_HALF_LINE:
            return z.copy()
        return math.log(self.R) + link_inverse_logpdf(self.link, z)

    def to_dict(self) -> dict:
        d = {"kind": self.kind.value}
        if self.kind is SpaceKind.BOUNDED_INTERVAL:
            d.update(R=self.R, link=self.link.value)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "AbilitySpace":
        kind = SpaceKind(d["kind"])
        if kind is SpaceKind.BOUNDED_INTERVAL:
            return cls.bounded(d["R"], d.get("link", "logit"))
        return cls(kind)


# --------------------------------------------------------------------------
# Items
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ItemParameters:
    a: float
    b: float
    c: float = 0.0
    D: float = 1.7

    def __post_init__(self):
        for name in ("a", "b", "c", "D"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"item parameter {name}={getattr(self, name)!r} is not finite")
        if self.a <= 0:
            raise DomainError(f"discrimination a={self.a!r} must be > 0")
        if not 0.0 <= self.c < 1.0:
            raise DomainError(f"guessing c={self.c!r} must satisfy 0 <= c < 1")
        if self.D <= 0:
            raise DomainError(f"scaling constant D={self.D!r} must be > 0")

    def validate(self, space: AbilitySpace) -> "ItemParameters":
        space.check(self.b, name="b")
        return self


def _linear_predictor(theta, item: ItemParameters, space: AbilitySpace):
    item.validate(space)
    return item.D * item.a * (np.asarray(space.transform(theta)) - space.transform(item.b))


def icc(theta, item: ItemParameters, space: AbilitySpace):
    """Probability of a positive response at ability ``theta``.

    Accepts scalars or arrays; the result lies strictly in ``(c, 1)`` for
    moderate arguments and never becomes NaN.
    """
    eta = _linear_predictor(theta, item, space)
    out = item.c + (1.0 - item.c) * np.asarray(sigmoid(eta))
    return out if out.ndim else float(out)


def icc_slope_at_b(item: ItemParameters, space: AbilitySpace) -> float:
    """Derivative of the curve with respect to theta at theta = b.

    Real line: ``(1-c) D a / 4``; half-line: divided by ``b``; bounded with
    logit link: times ``R / ((R - b) b)``. Other links use the analytic
    ``g'(b)`` (an extension: only the logit case is classical).
    """
    item.validate(space)
    return 0.25 * (1.0 - item.c) * item.D * item.a * float(space.derivative(item.b))


def icc_invert(item: ItemParameters, space: AbilitySpace, p: float) -> float:
    """Ability at which the curve equals ``p``; requires ``c < p < 1``."""
    item.validate(space)
    if not (item.c < p < 1.0):
        raise NoSolutionError(
            f"probability {p!r} is not attainable: the curve spans ({item.c!r}, 1)"
        )
    z = space.transform(item.b) + float(logit((p - item.c) / (1.0 - item.c))) / (item.D * item.a)
    return float(space.inverse(z))
