"""Response matrices and the dichotomization of three-category answers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import InvalidInputError, ParseError

NEVER, SOMETIMES, FREQUENTLY = 0, 1, 2


@dataclass(frozen=True)
class ResponseMatrix:
    """Binary subject-by-item responses (rows are subjects)."""

    u: np.ndarray
    subject_ids: tuple[str, ...] = field(default=())
    item_ids: tuple[str, ...] = field(default=())

    def __post_init__(self):
        u = np.asarray(self.u)
        if u.ndim != 2:
            raise InvalidInputError(f"response matrix must be 2-D, got shape {u.shape}")
        n, n_items = u.shape
        if n < 2 or n_items < 2:
            raise InvalidInputError(
                f"need at least 2 subjects and 2 items, got {n} x {n_items}"
            )
        if not np.all((u == 0) | (u == 1)):
            row, col = np.argwhere((u != 0) & (u != 1))[0]
            raise ParseError(
                f"non-binary entry {u[row, col]!r} at row {row}, column {col}",
                row=int(row), column=int(col),
            )
        u = u.astype(np.int8)
        u.setflags(write=False)
        object.__setattr__(self, "u", u)
        subjects = tuple(self.subject_ids) or tuple(f"s{j + 1}" for j in range(n))
        items = tuple(self.item_ids) or tuple(f"i{i + 1}" for i in range(n_items))
        if len(subjects) != n or len(items) != n_items:
            raise InvalidInputError("id lists do not match the matrix dimensions")
        object.__setattr__(self, "subject_ids", subjects)
        object.__setattr__(self, "item_ids", items)

    @property
    def n_subjects(self) -> int:
        return self.u.shape[0]

    @property
    def n_items(self) -> int:
        return self.u.shape[1]

    def degenerate_items(self) -> list[str]:
        """Items answered identically by every subject."""
        totals = self.u.sum(axis=0)
        return [self.item_ids[i] for i in np.flatnonzero((totals == 0) | (totals == self.n_subjects))]


def dichotomize(raw, threshold: int = FREQUENTLY) -> np.ndarray:
    """Collapse never/sometimes/frequently (0/1/2) answers to 0/1.

    The default keeps only "frequently" as a positive response; pass
    ``threshold=1`` to also count "sometimes".
    """
    raw = np.asarray(raw)
    if threshold not in (SOMETIMES, FREQUENTLY):
        raise InvalidInputError(f"dichotomization threshold must be 1 or 2, got {threshold!r}")
    bad = ~np.isin(raw, (NEVER, SOMETIMES, FREQUENTLY))
    if np.any(bad):
        loc = np.argwhere(bad)[0]
        row, col = (int(loc[0]), int(loc[1])) if raw.ndim == 2 else (0, int(loc[0]))
        raise ParseError(
            f"entry {raw[tuple(loc)]!r} at row {row}, column {col} is not one of 0, 1, 2",
            row=row, column=col,
        )
    return (raw >= threshold).astype(np.int8)


def as_response_matrix(
    u, subject_ids: Sequence[str] = (), item_ids: Sequence[str] = ()
) -> ResponseMatrix:
    if isinstance(u, ResponseMatrix):
        return u
    return ResponseMatrix(np.asarray(u), tuple(subject_ids), tuple(item_ids))
