"""Scale anchoring: anchor-item criteria, per-item anchor intervals, level finding."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import EmptyResultError, InvalidInputError, NoSolutionError
from .model import AbilitySpace, ItemParameters, icc_invert

P_HIGH = 0.65
P_LOW = 0.50
MIN_GAP = 0.30
HALF_WIDTH = 0.15
# Absorbs rounding when a probability sits exactly on a threshold.
TOL = 1e-12


def anchor_check(p_at_level: float, p_at_prev: float) -> bool:
    """Whether an item anchors at a level given its probabilities there and one level below."""
    for p in (p_at_level, p_at_prev):
        if not 0.0 <= p <= 1.0:
            raise InvalidInputError(f"probability {p!r} outside [0, 1]")
    return (
        p_at_level >= P_HIGH - TOL
        and p_at_prev < P_LOW
        and (p_at_level - p_at_prev) >= MIN_GAP - TOL
    )


@dataclass(frozen=True)
class AnchorInterval:
    item_id: str
    theta_low: float | None
    theta_high: float | None
    feasible: bool
    reason: str | None = None
    targets: tuple[float, float] | None = None


def anchor_targets(c: float, n_params: int, epsilon: float = 0.0) -> tuple[float, float] | None:
    """Probabilities the curve must reach at the interval ends, or None if impossible."""
    if n_params in (1, 2):
        return (P_HIGH - MIN_GAP, P_HIGH)
    if n_params != 3:
        raise InvalidInputError(f"n_params must be 1, 2 or 3, got {n_params!r}")
    if not 0.0 <= epsilon <= HALF_WIDTH:
        raise InvalidInputError(f"epsilon must lie in [0, {HALF_WIDTH}], got {epsilon!r}")
    if c < 0.3:
        mid = (1.0 + c) / 2.0
        return (mid - HALF_WIDTH, mid + HALF_WIDTH)
    if c < 0.35:
        return (0.35, 0.65)
    if c < 0.5:
        return (0.5 - epsilon, 0.8 - epsilon)
    return None


def anchor_interval(
    item: ItemParameters,
    space: AbilitySpace,
    n_params: int = 3,
    item_id: str = "",
    epsilon: float = 0.0,
) -> AnchorInterval:
    """Shortest ability interval over which ``item`` can anchor a level.

    ``epsilon`` shifts both targets down when ``0.35 <= c < 0.5``; at its
    default of 0 the upper target is 0.8 and the lower one sits just under
    the 0.5 ceiling.
    """
    item.validate(space)
    targets = anchor_targets(item.c, n_params, epsilon)
    if targets is None:
        return AnchorInterval(item_id, None, None, False, reason="guessing-too-high")
    lo, hi = targets
    try:
        theta_low = icc_invert(item, space, lo)
        theta_high = icc_invert(item, space, hi)
    except NoSolutionError:
        return AnchorInterval(item_id, None, None, False, reason="target-below-asymptote", targets=targets)
    if not (space.contains(theta_low) and space.contains(theta_high)):
        return AnchorInterval(item_id, None, None, False, reason="outside-domain", targets=targets)
    return AnchorInterval(item_id, theta_low, theta_high, True, targets=targets)


@dataclass
class AnchorLevels:
    cut_points: list[float]
    levels: dict[str, int] = field(default_factory=dict)
    unplaced: list[str] = field(default_factory=list)

    @property
    def n_levels(self) -> int:
        return len(self.cut_points) - 1

    def items_at(self, level: int) -> list[str]:
        return [k for k, v in self.levels.items() if v == level]


def find_levels(intervals: Sequence[AnchorInterval]) -> AnchorLevels:
    """Partition the ability scale into performance levels.

    Intervals are sorted by lower end (ties broken by item id). The lowest
    lower end is the first cut point and the first item's upper end is the
    candidate for the next one. Each following interval either extends the
    candidate (it straddles the candidate), leaves it unchanged (it ends
    below the candidate), or, when it starts at or above the candidate,
    closes the level at the candidate and seeds a new candidate with its own
    upper end. The last candidate closes the top level.
    """
    ids = [iv.item_id for iv in intervals]
    if len(set(ids)) != len(ids):
        raise InvalidInputError("anchor intervals need unique item ids")
    feasible = [iv for iv in intervals if iv.feasible]
    unplaced = [iv.item_id for iv in intervals if not iv.feasible]
    if not feasible:
        raise EmptyResultError("no feasible anchor intervals")
    ordered = sorted(feasible, key=lambda iv: (iv.theta_low, iv.item_id))

    cuts = [ordered[0].theta_low]
    candidate = ordered[0].theta_high
    level = 1
    levels = {ordered[0].item_id: level}
    for iv in ordered[1:]:
        if iv.theta_low < candidate < iv.theta_high:
            candidate = iv.theta_high
        elif candidate <= iv.theta_low:
            cuts.append(candidate)
            level += 1
            candidate = iv.theta_high
        levels[iv.item_id] = level
    cuts.append(candidate)
    return AnchorLevels(cuts, levels, unplaced)
