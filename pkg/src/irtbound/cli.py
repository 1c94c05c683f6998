"""Command-line interface: ``irtbound {fit,anchor,regress,simulate,icc,hist}``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import io, reports
from .anchoring import anchor_interval, find_levels
from .data import FREQUENTLY, ResponseMatrix
from .errors import ConfigurationError, IRTError, ParseError
from .mcmc import FIXED, FREE, PER_ITEM, SHARED, McmcConfig, ModelSpec, fit
from .model import AbilitySpace, ItemParameters, Link, SpaceKind
from .priors import Prior, PriorSpec
from .regression import RegressionSpec, fit_regression
from .simulation import SimulationDesign, shared_dispersion_items, simulate

log = logging.getLogger("irtbound")

MODELS = {"3pl": SpaceKind.REAL_LINE, "log": SpaceKind.POSITIVE_HALF_LINE, "bounded": SpaceKind.BOUNDED_INTERVAL}


def _space(args) -> AbilitySpace:
    kind = MODELS[args.model]
    if kind is SpaceKind.BOUNDED_INTERVAL:
        return AbilitySpace.bounded(args.R, args.link)
    if args.R is not None:
        raise ConfigurationError("--R only applies to --model bounded")
    return AbilitySpace(kind)


def _mcmc(args) -> McmcConfig:
    return McmcConfig(
        chains=args.chains, iterations=args.iters, burn_in=args.burnin, thin=args.thin, seed=args.seed
    ).with_seed()


def _out(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _add_space_flags(p):
    p.add_argument("--model", choices=sorted(MODELS), default="3pl",
                   help="ability space: 3pl (real line), log (0, inf), bounded (0, R)")
    p.add_argument("--link", choices=[lk.value for lk in Link], default="logit")
    p.add_argument("--R", type=float, default=None, help="upper bound of the bounded space (default 5)")
    p.add_argument("--D", type=float, default=1.7)
    p.add_argument("--out", default=".", help="output directory")


def _add_mcmc_flags(p):
    p.add_argument("--chains", type=int, default=4)
    p.add_argument("--iters", type=int, default=10000)
    p.add_argument("--burnin", type=int, default=2000)
    p.add_argument("--thin", type=int, default=5)
    p.add_argument("--seed", type=int, default=None)


def _add_data_flags(p):
    p.add_argument("data", help="response CSV")
    p.add_argument("--dichotomize", action="store_true", help="input holds 0/1/2 never/sometimes/frequently answers")
    p.add_argument("--threshold", type=int, default=FREQUENTLY, choices=(1, 2),
                   help="lowest raw category counted as 1 when dichotomizing")


def _read_data(args):
    return io.read_responses(args.data, dichotomize_raw=args.dichotomize, threshold=args.threshold)


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------


def cmd_fit(args) -> None:
    space = _space(args)
    response = _read_data(args)
    spec = ModelSpec(space, slope_mode=args.slope, guessing_mode=args.guessing, D=args.D)
    priors = PriorSpec.for_space(space, zero_sum_difficulties=not args.no_zero_sum)
    res = fit(response, spec, priors, _mcmc(args))
    out = _out(args)
    io.write_json(out / "fit_report.json", reports.fit_report(res))
    io.write_items(out / "items.csv", response.item_ids, res.item_parameters())
    io.write_abilities(out / "abilities.csv", response.subject_ids, res.abilities())


def cmd_anchor(args) -> None:
    space = _space(args)
    ids, items = io.read_items(args.items, D=args.D)
    intervals = [anchor_interval(it, space, args.n_params, iid, args.epsilon) for iid, it in zip(ids, items)]
    levels = find_levels(intervals)
    io.write_json(_out(args) / "anchor_report.json", reports.anchor_report(space, args.n_params, args.epsilon, intervals, levels))


def cmd_regress(args) -> None:
    space = _space(args)
    response = _read_data(args)
    item_ids, items = io.read_items(args.fix_items, D=args.D)
    if list(item_ids) != list(response.item_ids):
        raise ConfigurationError("item ids in --fix-items do not match the response file columns")
    names, X = io.read_covariates(args.covariates, response.subject_ids)
    if not args.no_intercept:
        names, X = ["intercept", *names], np.column_stack([np.ones(len(X)), X])
    spec = RegressionSpec(X, space, items, covariate_names=tuple(names))
    res = fit_regression(response, spec, _mcmc(args))
    io.write_json(_out(args) / "regress_report.json", reports.regress_report(res, item_ids))


def _default_difficulties(space: AbilitySpace, n_items: int) -> np.ndarray:
    if space.kind is SpaceKind.REAL_LINE:
        return np.linspace(-2.0, 2.0, n_items)
    if space.kind is SpaceKind.POSITIVE_HALF_LINE:
        return np.exp(np.linspace(-1.5, 1.5, n_items))
    return space.R * np.linspace(0.1, 0.9, n_items)


def _design_from_json(path, seed) -> tuple[SimulationDesign, float | None]:
    try:
        cfg = json.loads(Path(path).read_text(encoding="utf-8"))
        space = AbilitySpace.from_dict(cfg["space"])
        if "items" in cfg:
            items = [ItemParameters(**it) for it in cfg["items"]]
            beta = None
        else:
            beta = float(cfg["beta"])
            items = shared_dispersion_items(space, cfg["b"], beta, cfg.get("D", 1.7))
        ability = Prior(**cfg["ability"]) if "ability" in cfg else None
        seed = cfg.get("seed", seed)
        n = int(cfg["n"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"{path}: invalid design ({exc})") from None
    return SimulationDesign(space, n, items, seed=seed, ability=ability), beta


def cmd_simulate(args) -> None:
    seed = args.seed if args.seed is not None else int(np.random.SeedSequence().entropy % (2**63))
    if args.design:
        design, beta = _design_from_json(args.design, seed)
        item_ids = [f"i{k + 1}" for k in range(len(design.items))]
    else:
        space = _space(args)
        if args.items:
            item_ids, items = io.read_items(args.items, D=args.D)
            beta = None
        else:
            beta = args.beta
            items = shared_dispersion_items(space, _default_difficulties(space, args.n_items), beta, args.D)
            item_ids = [f"i{k + 1}" for k in range(len(items))]
        design = SimulationDesign(space, args.n, items, seed=seed)
    theta, response = simulate(design)
    if isinstance(response, np.ndarray):
        raise ConfigurationError("simulate needs at least 2 subjects and 2 items")
    response = ResponseMatrix(response.u, response.subject_ids, tuple(item_ids))
    out = _out(args)
    io.write_responses(out / "responses.csv", response)
    io.write_items(out / "truth_items.csv", item_ids, design.items)
    io.write_json(out / "truth.json", reports.simulate_report(design, theta, response.subject_ids, item_ids, beta))


def _default_grid(space: AbilitySpace, items) -> np.ndarray:
    if space.kind is SpaceKind.REAL_LINE:
        return np.linspace(-4.0, 4.0, 81)
    if space.kind is SpaceKind.POSITIVE_HALF_LINE:
        hi = 4.0 * max(it.b for it in items)
        return np.linspace(hi / 80, hi, 80)
    return space.R * np.linspace(0.01, 0.99, 99)


def cmd_icc(args) -> None:
    space = _space(args)
    if args.items:
        ids, items = io.read_items(args.items, D=args.D)
    else:
        if args.a is None or args.b is None:
            raise ConfigurationError("icc needs --items or both --a and --b")
        ids, items = ["item"], [ItemParameters(args.a, args.b, args.c, args.D)]
    if args.theta:
        theta = np.array(args.theta, dtype=float)
    elif args.grid:
        lo, hi, n = args.grid
        theta = np.linspace(float(lo), float(hi), int(n))
    else:
        theta = _default_grid(space, items)
    io.write_json(_out(args) / "icc_report.json", reports.icc_report(space, ids, items, theta))


def cmd_hist(args) -> None:
    _, theta = io.read_abilities(args.abilities)
    if theta.size == 0:
        raise ParseError(f"{args.abilities}: no abilities")
    io.write_json(_out(args) / "hist_report.json", reports.hist_report(theta, args.bins, str(args.abilities)))


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="irtbound", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="Bayesian fit; writes fit_report.json, items.csv, abilities.csv")
    _add_data_flags(p)
    _add_space_flags(p)
    _add_mcmc_flags(p)
    p.add_argument("--slope", choices=(SHARED, PER_ITEM), default=SHARED)
    p.add_argument("--guessing", choices=(FIXED, FREE), default=FIXED)
    p.add_argument("--no-zero-sum", action="store_true", help="drop the zero-sum constraint on g(b)")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("anchor", help="anchor intervals and performance levels; writes anchor_report.json")
    p.add_argument("--items", required=True, help="item CSV (item,a,b,c[,D])")
    _add_space_flags(p)
    p.add_argument("--n-params", type=int, choices=(1, 2, 3), default=3)
    p.add_argument("--epsilon", type=float, default=0.0)
    p.set_defaults(func=cmd_anchor)

    p = sub.add_parser("regress", help="latent regression with fixed items; writes regress_report.json")
    _add_data_flags(p)
    _add_space_flags(p)
    _add_mcmc_flags(p)
    p.add_argument("--fix-items", required=True)
    p.add_argument("--covariates", required=True)
    p.add_argument("--no-intercept", action="store_true")
    p.set_defaults(func=cmd_regress)

    p = sub.add_parser("simulate", help="synthetic data; writes responses.csv, truth.json, truth_items.csv")
    _add_space_flags(p)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--n", type=int, default=2000)
    p.add_argument("--n-items", type=int, default=22)
    p.add_argument("--beta", type=float, default=1.0, help="shared dispersion for generated items")
    p.add_argument("--items", default=None, help="item CSV instead of generated items")
    p.add_argument("--design", default=None, help="JSON design file")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("icc", help="item characteristic curve points; writes icc_report.json")
    _add_space_flags(p)
    p.add_argument("--items", default=None)
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--c", type=float, default=0.0)
    p.add_argument("--theta", type=float, nargs="+")
    p.add_argument("--grid", nargs=3, metavar=("LO", "HI", "N"))
    p.set_defaults(func=cmd_icc)

    p = sub.add_parser("hist", help="histogram of ability estimates; writes hist_report.json")
    p.add_argument("abilities", help="abilities CSV written by fit")
    p.add_argument("--bins", type=int, default=20)
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_hist)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if getattr(args, "model", None) == "bounded" and args.R is None:
        args.R = 5.0
    try:
        args.func(args)
    except (IRTError, OSError) as err:
        if isinstance(err, OSError):
            err = ConfigurationError(f"{err.filename}: {err.strerror}")
        record = reports.error_report(err)
        print(json.dumps(record), file=sys.stderr)
        return record["exit_code"]
    return 0


if __name__ == "__main__":
    sys.exit(main())
