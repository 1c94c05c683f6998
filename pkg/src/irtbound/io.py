"""CSV ingestion and output.

Response files: the first row holds item ids, the first column subject ids,
cells are 0/1 (or 0/1/2 when dichotomizing). Item files: columns
``item,a,b,c`` with an optional ``D``. Covariate files: first column subject
ids, remaining columns numeric covariates.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Sequence

import numpy as np

from .data import FREQUENTLY, ResponseMatrix, dichotomize
from .errors import InvalidInputError, ParseError
from .model import ItemParameters


def _read_rows(path) -> list[list[str]]:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [row for row in csv.reader(fh) if row and any(cell.strip() for cell in row)]
    if not rows:
        raise ParseError(f"{path}: file is empty")
    return rows


def read_responses(path, dichotomize_raw: bool = False, threshold: int = FREQUENTLY) -> ResponseMatrix:
    rows = _read_rows(path)
    header = [c.strip() for c in rows[0]]
    item_ids = header[1:]
    allowed = {"0", "1", "2"} if dichotomize_raw else {"0", "1"}
    subjects, cells = [], []
    for r, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise ParseError(f"{path}: line {r} has {len(row)} fields, expected {len(header)}", row=r)
        subjects.append(row[0].strip())
        values = []
        for col, cell in enumerate(row[1:], start=2):
            cell = cell.strip()
            if cell not in allowed:
                raise ParseError(
                    f"{path}: invalid response {cell!r} at line {r}, column {col} "
                    f"(subject {row[0].strip()!r}, item {header[col - 1]!r})",
                    row=r, column=col,
                )
            values.append(int(cell))
        cells.append(values)
    raw = np.array(cells, dtype=np.int8).reshape(len(cells), len(item_ids))
    u = dichotomize(raw, threshold) if dichotomize_raw else raw
    return ResponseMatrix(u, tuple(subjects), tuple(item_ids))


def write_responses(path, response: ResponseMatrix) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["subject", *response.item_ids])
        for sid, row in zip(response.subject_ids, response.u):
            w.writerow([sid, *(int(v) for v in row)])


def _float(cell: str, path, r: int, col: int) -> float:
    try:
        return float(cell)
    except ValueError:
        raise ParseError(f"{path}: non-numeric value {cell!r} at line {r}, column {col}", row=r, column=col) from None


def read_items(path, D: float = 1.7) -> tuple[list[str], list[ItemParameters]]:
    rows = _read_rows(path)
    header = [c.strip().lower() for c in rows[0]]
    missing = {"item", "a", "b", "c"} - set(header)
    if missing:
        raise ParseError(f"{path}: missing item columns {sorted(missing)}")
    idx = {name: header.index(name) for name in header}
    ids, items = [], []
    for r, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise ParseError(f"{path}: line {r} has {len(row)} fields, expected {len(header)}", row=r)
        vals = {k: _float(row[i], path, r, i + 1) for k, i in idx.items() if k != "item"}
        ids.append(row[idx["item"]].strip())
        items.append(ItemParameters(vals["a"], vals["b"], vals["c"], vals.get("d", D)))
    return ids, items


def write_items(path, item_ids: Sequence[str], items: Sequence[ItemParameters]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["item", "a", "b", "c", "D"])
        for iid, it in zip(item_ids, items):
            w.writerow([iid, repr(it.a), repr(it.b), repr(it.c), repr(it.D)])


def read_covariates(path, subject_ids: Sequence[str]) -> tuple[list[str], np.ndarray]:
    """Covariates ordered to match ``subject_ids``."""
    rows = _read_rows(path)
    names = [c.strip() for c in rows[0][1:]]
    by_subject = {}
    for r, row in enumerate(rows[1:], start=2):
        if len(row) != len(names) + 1:
            raise ParseError(f"{path}: line {r} has {len(row)} fields, expected {len(names) + 1}", row=r)
        by_subject[row[0].strip()] = [_float(c, path, r, col) for col, c in enumerate(row[1:], start=2)]
    missing = [s for s in subject_ids if s not in by_subject]
    if missing:
        raise InvalidInputError(f"{path}: no covariates for subject(s) {missing[:5]}")
    return names, np.array([by_subject[s] for s in subject_ids], dtype=float).reshape(len(subject_ids), len(names))


def read_abilities(path) -> tuple[list[str], np.ndarray]:
    rows = _read_rows(path)
    ids, vals = [], []
    for r, row in enumerate(rows[1:], start=2):
        ids.append(row[0].strip())
        vals.append(_float(row[1], path, r, 2))
    return ids, np.array(vals)


def write_abilities(path, subject_ids: Sequence[str], theta) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["subject", "theta"])
        for sid, t in zip(subject_ids, np.asarray(theta, dtype=float)):
            w.writerow([sid, repr(float(t))])


def write_json(path, payload: dict) -> None:
    Path(path).write_text(json.dumps(payload, indent=2, allow_nan=False) + "\n", encoding="utf-8")
