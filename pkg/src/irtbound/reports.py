"""Versioned JSON reports and their schemas.

Every report carries ``schema_version`` and ``report`` (its type) and is
validated against the matching schema before it is written; schemas forbid
unknown fields.
"""

from __future__ import annotations

import math
from typing import Sequence

import jsonschema
import numpy as np

from .anchoring import AnchorInterval, AnchorLevels
from .errors import IRTError
from .mcmc import FitResult
from .model import AbilitySpace, ItemParameters, icc, icc_slope_at_b
from .regression import RegressionResult, unit_change_factor

SCHEMA_VERSION = "1.0"

_num = {"type": "number"}
_num_or_null = {"type": ["number", "null"]}
_str = {"type": "string"}


def _obj(props: dict, required=None) -> dict:
    return {
        "type": "object",
        "properties": props,
        "required": sorted(props) if required is None else required,
        "additionalProperties": False,
    }


def _header(kind: str) -> dict:
    return {"schema_version": {"const": SCHEMA_VERSION}, "report": {"const": kind}}


_space = {
    "type": "object",
    "properties": {"kind": {"enum": ["real", "positive", "bounded"]}, "R": _num, "link": {"enum": ["logit", "probit", "cloglog", "loglog"]}},
    "required": ["kind"],
    "additionalProperties": False,
}
_item = _obj({"item": _str, "a": _num, "b": _num, "c": _num, "D": _num})
_param_row = _obj({"name": _str, "mean": _num, "sd": _num, "q025": _num, "q50": _num, "q975": _num, "rhat": _num_or_null})
_mcmc = _obj({"chains": {"type": "integer"}, "iterations": {"type": "integer"}, "burn_in": {"type": "integer"}, "thin": {"type": "integer"}, "seed": {"type": "integer"}})
_dic = _obj({"dic": _num, "p_d": _num, "mean_deviance": _num, "deviance_at_mean": _num})
_prior = _obj({"family": {"enum": ["normal", "lognormal", "uniform"]}, "p1": _num, "p2": _num})

SCHEMAS: dict[str, dict] = {
    "fit": _obj({
        **_header("fit"),
        "model": _obj({"space": _space, "slope_mode": {"enum": ["shared", "per-item"]}, "guessing_mode": {"enum": ["fixed", "free"]}, "D": _num}),
        "priors": _obj({"b": _prior, "theta": _prior, "beta_precision": _num, "zero_sum_difficulties": {"type": "boolean"}, "a": _prior, "c_alpha": _num, "c_beta": _num}),
        "mcmc": _mcmc,
        "n_subjects": {"type": "integer"},
        "n_items": {"type": "integer"},
        "dic": _dic,
        "acceptance": {"type": "object", "additionalProperties": _num},
        "max_rhat": _num_or_null,
        "parameters": {"type": "object", "additionalProperties": {"type": "array", "items": _param_row}},
        "items": {"type": "array", "items": _item},
        "warnings": {"type": "array", "items": _str},
    }),
    "anchor": _obj({
        **_header("anchor"),
        "space": _space,
        "n_params": {"enum": [1, 2, 3]},
        "epsilon": _num,
        "intervals": {"type": "array", "items": _obj({
            "item": _str, "feasible": {"type": "boolean"}, "theta_low": _num_or_null, "theta_high": _num_or_null,
            "target_low": _num_or_null, "target_high": _num_or_null, "reason": {"type": ["string", "null"]},
        })},
        "levels": _obj({
            "cut_points": {"type": "array", "items": _num},
            "assignments": {"type": "array", "items": _obj({"item": _str, "level": {"type": "integer"}})},
            "unplaced": {"type": "array", "items": _str},
        }),
    }),
    "regress": _obj({
        **_header("regress"),
        "space": _space,
        "transform": _str,
        "mcmc": _mcmc,
        "n_subjects": {"type": "integer"},
        "coefficients": {"type": "array", "items": _obj({
            "name": _str, "mean": _num, "sd": _num, "q025": _num, "q50": _num, "q975": _num, "rhat": _num_or_null,
            "unit_change_factors": {"type": "array", "items": _obj({"item": _str, "factor": _num})},
        })},
        "sigma2": _param_row,
        "dic": _dic,
        "acceptance": _num,
        "items": {"type": "array", "items": _item},
    }),
    "simulate": _obj({
        **_header("simulate"),
        "space": _space,
        "seed": {"type": "integer"},
        "n_subjects": {"type": "integer"},
        "n_items": {"type": "integer"},
        "ability_distribution": _prior,
        "dispersion": _num_or_null,
        "items": {"type": "array", "items": _item},
        "abilities": {"type": "array", "items": _obj({"subject": _str, "theta": _num})},
    }),
    "icc": _obj({
        **_header("icc"),
        "space": _space,
        "curves": {"type": "array", "items": _obj({
            "item": _str, "a": _num, "b": _num, "c": _num, "D": _num, "slope_at_b": _num,
            "points": {"type": "array", "items": {"type": "array", "items": _num, "minItems": 2, "maxItems": 2}},
        })},
    }),
    "hist": _obj({
        **_header("hist"),
        "source": _str,
        "n": {"type": "integer"},
        "summary": _obj({"mean": _num, "sd": _num, "min": _num, "max": _num}),
        "bins": {"type": "array", "items": _obj({"low": _num, "high": _num, "count": {"type": "integer"}})},
    }),
    "error": _obj({
        **_header("error"),
        "kind": _str,
        "message": _str,
        "exit_code": {"type": "integer"},
        "location": {"oneOf": [{"type": "null"}, _obj({"row": {"type": ["integer", "null"]}, "column": {"type": ["integer", "null"]}})]},
    }),
}


def validate(report: dict) -> dict:
    kind = report.get("report")
    if kind not in SCHEMAS:
        raise ValueError(f"unknown report type {kind!r}")
    jsonschema.validate(report, SCHEMAS[kind])
    return report


def _f(x) -> float | None:
    x = float(x)
    return x if math.isfinite(x) else None


def _items(ids: Sequence[str], items: Sequence[ItemParameters]) -> list[dict]:
    return [{"item": i, "a": it.a, "b": it.b, "c": it.c, "D": it.D} for i, it in zip(ids, items)]


def _rows(names: Sequence[str], summary: dict) -> list[dict]:
    rows = []
    rhat = summary.get("rhat")
    for k, name in enumerate(names):
        def pick(key):
            return float(np.atleast_1d(summary[key])[k])
        rows.append({
            "name": name,
            "mean": pick("mean"), "sd": pick("sd"), "q025": pick("q025"), "q50": pick("q50"), "q975": pick("q975"),
            "rhat": None if rhat is None else _f(np.atleast_1d(rhat)[k]),
        })
    return rows


def fit_report(res: FitResult) -> dict:
    ids = {"theta": res.response.subject_ids, "b": res.response.item_ids,
           "a": res.response.item_ids, "c": res.response.item_ids, "beta": ("beta",)}
    summary = res.samples.summary()
    max_rhat = res.samples.max_rhat()
    report = {
        "schema_version": SCHEMA_VERSION,
        "report": "fit",
        "model": res.spec.to_dict(),
        "priors": res.priors.to_dict(),
        "mcmc": res.config.to_dict(),
        "n_subjects": res.response.n_subjects,
        "n_items": res.response.n_items,
        "dic": {"dic": res.dic, "p_d": res.p_d, "mean_deviance": res.mean_deviance, "deviance_at_mean": res.deviance_at_mean},
        "acceptance": dict(res.samples.acceptance),
        "max_rhat": None if max_rhat is None else _f(max_rhat),
        "parameters": {k: _rows(ids[k], s) for k, s in summary.items()},
        "items": _items(res.response.item_ids, res.item_parameters()),
        "warnings": list(res.warnings),
    }
    return validate(report)


def anchor_report(space: AbilitySpace, n_params: int, epsilon: float,
                  intervals: Sequence[AnchorInterval], levels: AnchorLevels) -> dict:
    report = {
        "schema_version": SCHEMA_VERSION,
        "report": "anchor",
        "space": space.to_dict(),
        "n_params": n_params,
        "epsilon": epsilon,
        "intervals": [
            {
                "item": iv.item_id, "feasible": iv.feasible,
                "theta_low": iv.theta_low, "theta_high": iv.theta_high,
                "target_low": iv.targets[0] if iv.targets else None,
                "target_high": iv.targets[1] if iv.targets else None,
                "reason": iv.reason,
            }
            for iv in intervals
        ],
        "levels": {
            "cut_points": list(levels.cut_points),
            "assignments": [{"item": k, "level": v} for k, v in levels.levels.items()],
            "unplaced": list(levels.unplaced),
        },
    }
    return validate(report)


def regress_report(res: RegressionResult, item_ids: Sequence[str]) -> dict:
    summary = res.summary()
    coef_rows = _rows(res.spec.covariate_names, summary["coef"])
    for row in coef_rows:
        row["unit_change_factors"] = [
            {"item": iid, "factor": unit_change_factor(it.a, row["mean"], it.D)}
            for iid, it in zip(item_ids, res.items)
        ]
    report = {
        "schema_version": SCHEMA_VERSION,
        "report": "regress",
        "space": res.spec.space.to_dict(),
        "transform": res.spec.h,
        "mcmc": res.config.to_dict(),
        "n_subjects": int(res.spec.X.shape[0]),
        "coefficients": coef_rows,
        "sigma2": _rows(["sigma2"], summary["sigma2"])[0],
        "dic": {"dic": res.dic, "p_d": res.p_d, "mean_deviance": res.mean_deviance, "deviance_at_mean": res.deviance_at_mean},
        "acceptance": res.acceptance,
        "items": _items(item_ids, res.items),
    }
    return validate(report)


def simulate_report(design, theta, subject_ids, item_ids, dispersion=None) -> dict:
    report = {
        "schema_version": SCHEMA_VERSION,
        "report": "simulate",
        "space": design.space.to_dict(),
        "seed": int(design.seed),
        "n_subjects": int(design.n),
        "n_items": len(design.items),
        "ability_distribution": design.ability.to_dict(),
        "dispersion": dispersion,
        "items": _items(item_ids, design.items),
        "abilities": [{"subject": s, "theta": float(t)} for s, t in zip(subject_ids, theta)],
    }
    return validate(report)


def icc_report(space: AbilitySpace, item_ids, items, theta) -> dict:
    theta = np.asarray(theta, dtype=float)
    curves = []
    for iid, it in zip(item_ids, items):
        p = np.atleast_1d(icc(theta, it, space))
        curves.append({
            "item": iid, "a": it.a, "b": it.b, "c": it.c, "D": it.D,
            "slope_at_b": icc_slope_at_b(it, space),
            "points": [[float(t), float(v)] for t, v in zip(np.atleast_1d(theta), p)],
        })
    return validate({"schema_version": SCHEMA_VERSION, "report": "icc", "space": space.to_dict(), "curves": curves})


def hist_report(values, bins, source: str) -> dict:
    values = np.asarray(values, dtype=float)
    counts, edges = np.histogram(values, bins=bins)
    report = {
        "schema_version": SCHEMA_VERSION,
        "report": "hist",
        "source": source,
        "n": int(values.size),
        "summary": {
            "mean": float(values.mean()),
            "sd": float(values.std(ddof=1)) if values.size > 1 else 0.0,
            "min": float(values.min()),
            "max": float(values.max()),
        },
        "bins": [{"low": float(lo), "high": float(hi), "count": int(c)} for lo, hi, c in zip(edges[:-1], edges[1:], counts)],
    }
    return validate(report)


def error_report(err: Exception) -> dict:
    if isinstance(err, IRTError):
        kind, code = err.kind, err.exit_code
    else:
        kind, code = "error", 1
    row, col = getattr(err, "row", None), getattr(err, "column", None)
    location = None if row is None and col is None else {"row": row, "column": col}
    return validate({
        "schema_version": SCHEMA_VERSION,
        "report": "error",
        "kind": kind,
        "message": str(err),
        "exit_code": code,
        "location": location,
    })
