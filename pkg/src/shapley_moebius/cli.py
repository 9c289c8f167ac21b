"""Command-line front end.

Verbs: ``run``, ``sweep``, ``models``, ``oracle``. Options may come from a
YAML config file (``--config``); command-line flags override it.

Exit codes: 0 success, 2 configuration error, 3 evaluation error,
4 unsupported dimension.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
import yaml

from .analysis import all_pairs, evaluate
from .errors import ConfigurationError, DimensionError, DomainError, EvaluationError
from .estimators import build_value_table
from .marginals import DependenceSpec, InputTransform, MarginalSpec
from .models import FIRE_SCENARIOS, MODELS, fire_dependence, get_model
from .moebius import mask_label, moebius_invert, report_from_moebius
from .oracles import ORACLES, exact_first_total, exact_shapley, quadratic_risk
from .permutation import permutation_shapley

EXIT_OK, EXIT_CONFIG, EXIT_EVAL, EXIT_DIMENSION = 0, 2, 3, 4


@dataclass
class ExperimentSpec:
    model: str = "ishigami"
    n: int = 1024
    seed: int = 0
    replicates: int = 1
    estimator: str = "both"
    algorithm: str = "moebius"
    marginals: list | None = None
    correlation: list | None = None
    correlation_kind: str = "spearman"
    scenario: str | None = None
    owen: list = field(default_factory=list)
    format: str = "report"
    include_moebius: bool = False
    substitute: bool = True
    jobs: int = 1

    def validate(self):
        bench = get_model(self.model)
        if self.n < 2:
            raise ConfigurationError(f"n must be at least 2, got {self.n}")
        if self.replicates < 1:
            raise ConfigurationError(f"replicates must be at least 1, got {self.replicates}")
        for name, value, allowed in (
            ("estimator", self.estimator, ("subset", "superset", "both")),
            ("algorithm", self.algorithm, ("moebius", "permutation", "both")),
            ("format", self.format, ("csv", "report")),
            ("correlation_kind", self.correlation_kind, ("spearman", "pearson")),
        ):
            if value not in allowed:
                raise ConfigurationError(f"{name} must be one of {allowed}, got {value!r}")
        if self.marginals is not None and len(self.marginals) != bench.k:
            raise ConfigurationError(f"{len(self.marginals)} marginals given, model has k={bench.k}")
        if self.correlation is not None:
            shape = np.shape(self.correlation)
            if shape != (bench.k, bench.k):
                raise ConfigurationError(
                    f"correlation matrix has shape {shape}, model {self.model} needs {bench.k}x{bench.k}"
                )
        if self.scenario is not None:
            if self.model != "fire-spread":
                raise ConfigurationError("named scenarios only exist for the fire-spread model")
            if self.correlation is not None:
                raise ConfigurationError("give either a scenario or a correlation matrix, not both")
        for m in self.owen:
            if not 0 < m < 1 << bench.k:
                raise ConfigurationError(f"Shapley-Owen group {m} is not a subset of {bench.k} inputs")
        return self

    def transform(self, correlation=None):
        bench = get_model(self.model)
        marginals = bench.marginals
        if self.marginals is not None:
            marginals = tuple(_marginal(m) for m in self.marginals)
        if correlation is not None:
            dep = DependenceSpec(correlation, self.correlation_kind)
        elif self.scenario is not None:
            dep = fire_dependence(self.scenario)
        elif self.correlation is not None:
            dep = DependenceSpec(self.correlation, self.correlation_kind)
        else:
            dep = None
        return InputTransform(marginals, dep)


def _marginal(d):
    if isinstance(d, MarginalSpec):
        return d
    try:
        return MarginalSpec(d["family"], float(d["a"]), float(d["b"]), d.get("lower"), d.get("upper"))
    except (KeyError, TypeError) as exc:
        raise ConfigurationError(f"malformed marginal entry {d!r}: {exc}") from None


def parse_groups(text, k):
    """Parse ``all-pairs`` or a comma list of groups (``1-3``) or masks (``5``, ``0b101``)."""
    if text is None or text == "":
        return []
    if isinstance(text, list):
        items = text
    elif text == "all-pairs":
        return all_pairs(k)
    else:
        items = [t.strip() for t in str(text).split(",") if t.strip()]
    masks = []
    for item in items:
        try:
            if isinstance(item, (list, tuple)):
                mask = sum(1 << (int(i) - 1) for i in item)
            elif isinstance(item, int):
                mask = item
            elif "-" in item:
                mask = sum(1 << (int(i) - 1) for i in item.split("-"))
            else:
                mask = int(item, 0)
        except ValueError:
            raise ConfigurationError(f"cannot parse Shapley-Owen group {item!r}") from None
        if not 0 < mask < 1 << k:
            raise ConfigurationError(f"Shapley-Owen group {item!r} is not a subset of {k} inputs")
        masks.append(mask)
    return masks


def load_config(path):
    try:
        with open(path) as fh:
            data = yaml.safe_load(fh) or {}
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from None
    except yaml.YAMLError as exc:
        raise ConfigurationError(f"malformed config {path}: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigurationError(f"config {path} must be a mapping")
    return data


def _run_replicate(spec, seed, transform):
    d = evaluate(get_model(spec.model), transform, spec.n, seed)
    out = []
    table = None
    if spec.algorithm in ("moebius", "both"):
        table = build_value_table(d, substitute=spec.substitute)
        out.append(report_from_moebius(
            moebius_invert(table), table, owen_masks=spec.owen,
            evals=d.evals, model=spec.model, n=spec.n, seed=seed,
        ))
    if spec.algorithm in ("permutation", "both"):
        out.append(permutation_shapley(d, table=table, substitute=spec.substitute))
    return out


def _estimators(spec):
    return ("subset", "superset") if spec.estimator == "both" else (spec.estimator,)


def _rows(rep, estimator):
    if estimator == "subset":
        return rep.s_first_sub, rep.phi_sub, rep.t_total_sub, rep.absolute("subset")
    return rep.s_first_sup, rep.phi_sup, rep.t_total_sup, rep.absolute("superset")


def _oracle_truth(spec, transform):
    if spec.model not in ORACLES or not transform.independent or spec.marginals is not None:
        return None
    return exact_shapley(ORACLES[spec.model]())


def _aggregate(spec, reports, truth):
    agg = {}
    for algo in sorted({r.algorithm for r in reports}):
        reps = [r for r in reports if r.algorithm == algo]
        for est in _estimators(spec):
            first, phi, total, _ = (np.array(v) for v in zip(*(_rows(r, est) for r in reps)))
            entry = {}
            for name, arr in (("first", first), ("phi", phi), ("total", total)):
                q = np.quantile(arr, [0.25, 0.5, 0.75], axis=0)
                entry[name] = {
                    "mean": arr.mean(axis=0).tolist(),
                    "q25": q[0].tolist(), "median": q[1].tolist(), "q75": q[2].tolist(),
                }
            if truth is not None:
                entry["quadratic_risk"] = quadratic_risk(phi, truth)
            agg[f"{algo}/{est}"] = entry
        if algo == "moebius" and spec.owen:
            vals = np.array([[r.owen[m] for m in spec.owen] for r in reps])
            agg["moebius/owen"] = {
                mask_label(m): {"mean": float(vals[:, i].mean()), "median": float(np.median(vals[:, i]))}
                for i, m in enumerate(spec.owen)
            }
    return agg


def run(spec, correlation=None):
    """Execute all replicates of ``spec``; returns ``(reports, aggregate, truth)``."""
    spec.validate()
    transform = spec.transform(correlation)
    seeds = [spec.seed + r for r in range(spec.replicates)]
    if spec.jobs > 1:
        with ThreadPoolExecutor(spec.jobs) as pool:
            nested = list(pool.map(lambda s: _run_replicate(spec, s, transform), seeds))
    else:
        nested = [_run_replicate(spec, s, transform) for s in seeds]
    reports = [r for group in nested for r in group]
    truth = _oracle_truth(spec, transform) if correlation is None else None
    return reports, _aggregate(spec, reports, truth), truth


def _spec_dict(spec):
    d = asdict(spec)
    d["owen"] = [mask_label(m) for m in spec.owen]
    d.pop("jobs")
    return d


def _report_payload(spec, reports, agg, truth):
    reps = []
    for r in reports:
        d = r.to_dict(include_moebius=spec.include_moebius)
        d["budget"] = {"evals": r.evals, "blocks": r.evals // spec.n}
        if r.memo is not None:
            d["memo"] = {"entries": len(r.memo), "hits": r.memo.hits, "misses": r.memo.misses}
        reps.append(d)
    out = {"spec": _spec_dict(spec), "replicates": reps, "aggregate": agg}
    if truth is not None:
        out["oracle_phi"] = truth.tolist()
    return out


CSV_FIELDS = ["replicate", "seed", "algorithm", "estimator", "input", "first", "phi", "total", "phi_abs", "evals"]


def _csv_rows(spec, reports, extra=None):
    names = get_model(spec.model).inputs
    rows = []
    for idx, r in enumerate(reports):
        rep_no = r.seed - spec.seed
        for est in _estimators(spec):
            first, phi, total, absolute = _rows(r, est)
            for i, name in enumerate(names):
                rows.append({
                    "replicate": rep_no, "seed": r.seed, "algorithm": r.algorithm,
                    "estimator": est, "input": name, "first": first[i], "phi": phi[i],
                    "total": total[i], "phi_abs": absolute[i], "evals": r.evals, **(extra or {}),
                })
        for m, v in sorted(r.owen.items()):
            rows.append({
                "replicate": rep_no, "seed": r.seed, "algorithm": r.algorithm,
                "estimator": "owen", "input": "{" + mask_label(m) + "}", "first": "",
                "phi": v, "total": "", "phi_abs": v * r.scale_sub, "evals": r.evals, **(extra or {}),
            })
    return rows


def _write_csv(rows, fields):
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: repr(float(v)) if isinstance(v, (float, np.floating)) else v for k, v in row.items()})
    return buf.getvalue()


def _emit(text, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _spec_from_args(args):
    data = load_config(args.config) if getattr(args, "config", None) else {}
    known = set(ExperimentSpec.__dataclass_fields__)
    unknown = set(data) - known - {"sweep"}
    if unknown:
        raise ConfigurationError(f"unknown config keys: {', '.join(sorted(unknown))}")
    sweep = data.pop("sweep", None) or {}
    for key in ("model", "n", "seed", "replicates", "estimator", "algorithm", "format", "scenario", "jobs"):
        v = getattr(args, key, None)
        if v is not None:
            data[key] = v
    if getattr(args, "include_moebius", False):
        data["include_moebius"] = True
    if getattr(args, "no_substitute", False):
        data["substitute"] = False
    owen = args.owen if getattr(args, "owen", None) is not None else data.get("owen")
    try:
        spec = ExperimentSpec(**{k: v for k, v in data.items() if k != "owen"})
    except TypeError as exc:
        raise ConfigurationError(str(exc)) from None
    spec.owen = parse_groups(owen, get_model(spec.model).k)
    return spec, sweep


def cmd_run(args):
    spec, _ = _spec_from_args(args)
    reports, agg, truth = run(spec)
    if spec.format == "csv":
        text = _write_csv(_csv_rows(spec, reports), CSV_FIELDS)
    else:
        text = json.dumps(_report_payload(spec, reports, agg, truth), indent=2) + "\n"
    _emit(text, args.out)


def _parse_grid(text):
    try:
        grid = [float(g) for g in (text if isinstance(text, list) else str(text).split(","))]
    except ValueError:
        raise ConfigurationError(f"cannot parse correlation grid {text!r}") from None
    for g in grid:
        if not -1.0 < g < 1.0:
            raise ConfigurationError(f"grid value {g} must lie strictly inside (-1, 1)")
    return grid


def sweep_correlation(spec, pair, grid):
    """One ``run`` per correlation value between inputs ``pair`` (0-based)."""
    k = get_model(spec.model).k
    i, j = pair
    if not (0 <= i < k and 0 <= j < k and i != j):
        raise ConfigurationError(f"pair {(i + 1, j + 1)} is not a valid pair of {k} inputs")
    base = np.eye(k) if spec.correlation is None else np.array(spec.correlation, dtype=float)
    out = []
    for rho in grid:
        r = base.copy()
        r[i, j] = r[j, i] = rho
        reports, agg, _ = run(spec, correlation=r)
        out.append((rho, reports, agg))
    return out


def cmd_sweep(args):
    spec, sweep = _spec_from_args(args)
    pair_text = args.pair if args.pair is not None else sweep.get("pair")
    grid_text = args.grid if args.grid is not None else sweep.get("grid")
    if pair_text is None or grid_text is None:
        raise ConfigurationError("sweep needs --pair and --grid (or a 'sweep' config section)")
    try:
        p = pair_text if isinstance(pair_text, list) else str(pair_text).split(",")
        pair = (int(p[0]) - 1, int(p[1]) - 1)
    except (ValueError, IndexError):
        raise ConfigurationError(f"cannot parse pair {pair_text!r}") from None
    if spec.scenario is not None:
        raise ConfigurationError("a sweep replaces the correlation; drop the scenario")
    results = sweep_correlation(spec, pair, _parse_grid(grid_text))
    if spec.format == "csv":
        rows = []
        for rho, reports, _ in results:
            rows += _csv_rows(spec, reports, {"rho": rho})
        text = _write_csv(rows, ["rho"] + CSV_FIELDS)
    else:
        payload = {"spec": _spec_dict(spec), "pair": [pair[0] + 1, pair[1] + 1], "points": []}
        for rho, reports, agg in results:
            body = _report_payload(spec, reports, agg, None)
            payload["points"].append({"rho": rho, "replicates": body["replicates"], "aggregate": agg})
        text = json.dumps(payload, indent=2) + "\n"
    _emit(text, args.out)


def cmd_models(args):
    lines = [f"{name:12s} k={m.k:<3d} {m.description}" for name, m in MODELS.items()]
    lines.append(f"fire-spread scenarios (rank correlation m_d~U): "
                 + ", ".join(f"{k}={v}" for k, v in FIRE_SCENARIOS.items()))
    _emit("\n".join(lines) + "\n", None)


def cmd_oracle(args):
    name = args.model or "ishigami"
    if name not in ORACLES:
        get_model(name)
        raise ConfigurationError(f"no analytic values available for model {name!r}")
    game = ORACLES[name]()
    pairs = all_pairs(game.k)
    phi, owen = exact_shapley(game, owen=pairs)
    first, total = exact_first_total(game)
    payload = {
        "model": name,
        "inputs": list(get_model(name).inputs),
        "phi": phi.tolist(),
        "first": first.tolist(),
        "total": total.tolist(),
        "owen_pairs": {mask_label(m): v for m, v in owen.items()},
        "variance": game.total,
    }
    _emit(json.dumps(payload, indent=2) + "\n", args.out)


def _common(p, model_default=None):
    p.add_argument("--config", help="YAML experiment file")
    p.add_argument("--model", default=model_default, help="model name (see 'models')")
    p.add_argument("--n", type=int, help="rows per sample block")
    p.add_argument("--seed", type=int, help="0 = unscrambled; replicate r uses seed + r")
    p.add_argument("--replicates", type=int)
    p.add_argument("--algorithm", choices=("moebius", "permutation", "both"))
    p.add_argument("--estimator", choices=("subset", "superset", "both"))
    p.add_argument("--owen", help="'all-pairs' or groups such as '1-3,2-4' or masks '5,0b1001'")
    p.add_argument("--scenario", choices=sorted(FIRE_SCENARIOS), help="fire-spread dependence")
    p.add_argument("--format", choices=("csv", "report"))
    p.add_argument("--include-moebius", action="store_true", help="add Möbius inverses to reports")
    p.add_argument("--no-substitute", action="store_true",
                   help="keep raw Jansen values under dependence")
    p.add_argument("--jobs", type=int, help="replicates evaluated concurrently")
    p.add_argument("--out", help="output path (default stdout)")


def build_parser():
    parser = argparse.ArgumentParser(prog="shapley-moebius", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)
    p = sub.add_parser("run", help="estimate Shapley effects")
    _common(p)
    p.set_defaults(func=cmd_run)
    p = sub.add_parser("sweep", help="repeat a run over a grid of pair correlations")
    _common(p)
    p.add_argument("--pair", help="1-based inputs, e.g. '1,3'")
    p.add_argument("--grid", help="comma-separated correlations in (-1, 1); write --grid=-0.9,0,0.9 "
                   "when the first value is negative")
    p.set_defaults(func=cmd_sweep)
    p = sub.add_parser("models", help="list registered models")
    p.set_defaults(func=cmd_models)
    p = sub.add_parser("oracle", help="print analytic effects where known")
    p.add_argument("--model")
    p.add_argument("--out")
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except DimensionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIMENSION
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (EvaluationError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EVAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
