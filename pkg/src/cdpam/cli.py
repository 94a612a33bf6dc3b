"""Command-line front end: ``cdpam {generate,analyze,sweep,theory,compare}``.

Every randomized command takes an explicit seed. Outputs are byte-stable:
rows are sorted, floats are written with ``repr`` and JSON keys are sorted.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .errors import CdpamError, InvalidParameterError
from .generator import ModelParams, generate_ba, generate_cdpam
from .graph import format_edgelist, read_edgelist
from .metrics import EXACT_DIAMETER_CUTOFF, degree_histogram
from .report import build_report
from .spectral import SpectralOptions
from .theory import (
    TheoryParams,
    degree_density,
    expected_degree,
    expected_diameter,
    harmonic,
)

FIGURES = (
    "degree",
    "clustering",
    "cc_beta",
    "assortativity",
    "triangles",
    "lambda2",
    "spectral_radius",
    "gamma",
    "diameter",
)
_FIGURE_METRICS = {
    "degree": set(),
    "clustering": {"clustering"},
    "cc_beta": {"clustering"},
    "assortativity": {"assortativity"},
    "triangles": {"triangles"},
    "lambda2": {"lambda2"},
    "spectral_radius": {"spectral_radius"},
    "gamma": {"powerlaw"},
    "diameter": {"diameter"},
}
_COMPARE_METRICS = ("gamma_hat", "clustering", "assortativity", "triangles", "lambda2", "spectral_radius", "diameter")


class CliError(Exception):
    pass


# ---------------------------------------------------------------- parsing


def _float_list(text: str) -> list[float]:
    text = text.strip()
    if not text:
        return []
    try:
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _int_list(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cdpam", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"cdpam {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def model_flags(p, single=True):
        p.add_argument("--m0", type=int, default=7, help="initial complete-graph size (default 7)")
        p.add_argument("--m", type=int, default=5, help="edges per new node (default 5)")
        p.add_argument("--theta", type=float, default=0.5, help="global-context weight (default 0.5)")
        if single:
            p.add_argument("--beta", type=float, required=True, help="local-context weight")
            p.add_argument("--n", type=int, required=True, help="number of nodes to add")

    def analysis_flags(p):
        p.add_argument("--tolerance", type=float, default=1e-8, help="relative eigenvalue tolerance")
        p.add_argument("--bootstrap", type=int, default=0, help="bootstrap replicates for the p-value (0: skip)")
        p.add_argument(
            "--exact-diameter-cutoff", type=int, default=EXACT_DIAMETER_CUTOFF,
            help="largest node count for the exact BFS diameter",
        )

    p = sub.add_parser("generate", help="grow one graph and write its edge list and manifest")
    model_flags(p, single=False)
    p.add_argument("--beta", type=float)
    p.add_argument("--n", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--model", choices=("cdpam", "ba"), default="cdpam")
    p.add_argument("--manifest", type=Path, help="re-run from an existing manifest instead of flags")
    p.add_argument("--out", type=Path, required=True, help="edge-list output path")
    p.add_argument("--format", choices=("edge-list",), default="edge-list")

    p = sub.add_parser("analyze", help="report metrics of an edge-list graph as JSON")
    p.add_argument("--input", type=Path, required=True)
    p.add_argument("--out", type=Path, help="JSON output path (default stdout)")
    p.add_argument("--seed", type=int, help="bootstrap seed (required with --bootstrap)")
    p.add_argument("--format", choices=("report-json",), default="report-json")
    analysis_flags(p)

    p = sub.add_parser("sweep", help="metric curves over beta, size and seed grids (CSV)")
    model_flags(p, single=False)
    p.add_argument("--beta-grid", type=_float_list, required=True)
    p.add_argument("--n-grid", type=_int_list, required=True)
    p.add_argument("--seeds", type=_int_list, required=True)
    p.add_argument("--figures", default=",".join(FIGURES), help=f"subset of {','.join(FIGURES)}")
    p.add_argument("--include-ba", action="store_true", help="add BA rows on the same seeds")
    p.add_argument("--workers", type=int, default=1, help="parallel processes for sweep cells")
    p.add_argument("--out", type=Path, required=True, help="output directory")
    p.add_argument("--format", choices=("curve-csv",), default="curve-csv")
    analysis_flags(p)

    p = sub.add_parser("theory", help="tabulate closed-form curves (CSV)")
    p.add_argument("--m", type=int, default=5)
    p.add_argument("--theta", type=float, default=0.5)
    p.add_argument("--beta-grid", type=_float_list, required=True)
    p.add_argument("--n-grid", type=_int_list, default=[], help="sizes (diameter) or times t (degree)")
    p.add_argument("--ti-grid", type=_float_list, default=[1.0], help="arrival times for the degree curve")
    p.add_argument("--k-grid", type=_float_list, default=[], help="degrees for the density curve")
    p.add_argument("--curve", choices=("params", "diameter", "degree", "density"), default="params")
    p.add_argument("--r", type=float, default=None, help="additive constant in the distance formula")
    p.add_argument("--out", type=Path, help="CSV output path (default stdout)")
    p.add_argument("--format", choices=("curve-csv",), default="curve-csv")

    p = sub.add_parser("compare", help="CDPAM vs BA on shared seeds (JSON)")
    model_flags(p)
    p.add_argument("--seeds", type=_int_list, required=True)
    p.add_argument("--out", type=Path, help="JSON output path (default stdout)")
    p.add_argument("--format", choices=("report-json",), default="report-json")
    analysis_flags(p)
    return parser


# ---------------------------------------------------------------- formatting


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _csv_text(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def _emit(text: str, path: Path | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc.strerror}")


def _spectral_opts(args) -> SpectralOptions:
    return SpectralOptions(tolerance=args.tolerance)


def _check_analysis_args(args) -> None:
    if args.bootstrap < 0 or (0 < args.bootstrap < 100):
        raise InvalidParameterError(f"--bootstrap must be 0 or >= 100, got {args.bootstrap}")
    if args.exact_diameter_cutoff < 0:
        raise InvalidParameterError("--exact-diameter-cutoff must be >= 0")
    _spectral_opts(args)


# ---------------------------------------------------------------- generate


def _grow(model: str, params: ModelParams):
    return generate_ba(params) if model == "ba" else generate_cdpam(params)


def manifest_path(edge_path: Path) -> Path:
    return edge_path.with_name(edge_path.name + ".manifest.json")


def cmd_generate(args) -> int:
    if args.manifest is not None:
        try:
            manifest = json.loads(args.manifest.read_text())
            params = ModelParams(**manifest["params"])
            model = manifest["model"]
        except OSError as exc:
            raise CliError(f"cannot read {args.manifest}: {exc.strerror}")
        except (ValueError, KeyError, TypeError) as exc:
            raise CliError(f"malformed manifest {args.manifest}: {exc}")
        if model not in ("cdpam", "ba"):
            raise CliError(f"manifest {args.manifest} names unknown model {model!r}")
    else:
        required = ("n", "seed") if args.model == "ba" else ("beta", "n", "seed")
        missing = [f for f in required if getattr(args, f) is None]
        if missing:
            raise CliError(f"missing required flags: {', '.join('--' + f for f in missing)}")
        # BA ignores the context weights; they are still recorded in the manifest
        beta = 1.0 if args.beta is None else args.beta
        params = ModelParams(args.m0, args.m, beta, args.theta, args.n, args.seed)
        model = args.model
    g = _grow(model, params)
    _emit(format_edgelist(g), args.out)
    manifest = {
        "tool": "cdpam",
        "version": __version__,
        "model": model,
        "params": params.as_dict(),
        "node_count": g.node_count,
        "edge_count": g.edge_count,
        "edge_list": args.out.name,
    }
    _emit(_json_text(manifest), manifest_path(args.out))
    return 0


# ---------------------------------------------------------------- analyze


def cmd_analyze(args) -> int:
    _check_analysis_args(args)
    if args.bootstrap and args.seed is None:
        raise CliError("--seed is required with --bootstrap")
    try:
        g = read_edgelist(args.input)
    except OSError as exc:
        raise CliError(f"cannot read {args.input}: {exc.strerror}")
    except UnicodeDecodeError:
        raise CliError(f"cannot read {args.input}: not an ASCII edge list")
    report = build_report(
        g,
        spectral=_spectral_opts(args),
        exact_diameter_cutoff=args.exact_diameter_cutoff,
        bootstrap=args.bootstrap,
        seed=args.seed,
    )
    _emit(_json_text(report), args.out)
    return 0


# ---------------------------------------------------------------- sweep


def _sweep_cell(cell):
    """One (model, beta, n, seed) run. Returns (key, report, degree histogram, error)."""
    model, beta, theta, m0, m, n, seed, metrics, want_hist, opts = cell
    key = (model, beta, n, seed)
    try:
        params = ModelParams(m0, m, beta if model == "cdpam" else 1.0, theta if model == "cdpam" else 0.5, n, seed)
        g = _grow(model, params)
        report = build_report(
            g,
            metrics=metrics,
            spectral=SpectralOptions(tolerance=opts["tolerance"]),
            exact_diameter_cutoff=opts["exact_diameter_cutoff"],
            bootstrap=opts["bootstrap"],
            seed=seed,
        )
        hist = degree_histogram(g) if want_hist else None
        return key, report, hist, None
    except CdpamError as exc:
        return key, None, None, str(exc)


def _theory_diameter(m, beta, theta, nodes):
    try:
        return expected_diameter(nodes, TheoryParams(m, beta, theta)), None
    except CdpamError as exc:
        return None, str(exc)


def cmd_sweep(args) -> int:
    _check_analysis_args(args)
    figures = [f for f in args.figures.split(",") if f]
    bad = sorted(set(figures) - set(FIGURES))
    if bad:
        raise CliError(f"unknown figures {bad}; choose from {','.join(FIGURES)}")
    if not args.beta_grid or not args.n_grid or not args.seeds:
        raise CliError("--beta-grid, --n-grid and --seeds must be nonempty")
    # validate every grid point up front
    for beta in args.beta_grid:
        ModelParams(args.m0, args.m, beta, args.theta, 0, 0)
    for n in args.n_grid:
        if n < 0:
            raise InvalidParameterError(f"sizes must be >= 0, got {n}")
    for s in args.seeds:
        ModelParams(args.m0, args.m, 1.0, 0.5, 0, s)
    if args.workers < 1:
        raise InvalidParameterError("--workers must be >= 1")

    metrics = frozenset().union(*(_FIGURE_METRICS[f] for f in figures))
    opts = {
        "tolerance": args.tolerance,
        "exact_diameter_cutoff": args.exact_diameter_cutoff,
        "bootstrap": args.bootstrap,
    }
    models = ["cdpam"] + (["ba"] if args.include_ba else [])
    cells = []
    for model in models:
        betas = sorted(set(args.beta_grid)) if model == "cdpam" else [None]
        for beta in betas:
            for n in sorted(set(args.n_grid)):
                for seed in sorted(set(args.seeds)):
                    cells.append((model, beta, args.theta, args.m0, args.m, n, seed, metrics, "degree" in figures, opts))
    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            results = list(pool.map(_sweep_cell, cells))
    else:
        results = [_sweep_cell(c) for c in cells]
    order = {"cdpam": 0, "ba": 1}
    results.sort(key=lambda r: (order[r[0][0]], -1.0 if r[0][1] is None else r[0][1], r[0][2], r[0][3]))

    try:
        args.out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise CliError(f"cannot create {args.out}: {exc.strerror}")
    theta = args.theta
    base = ["model", "beta", "theta", "n", "seed"]

    def lead(key):
        model, beta, n, seed = key
        return [model, beta, theta if model == "cdpam" else None, n, seed]

    def metric_table(name, cols):
        rows = []
        for key, rep, _, err in results:
            if err is not None:
                rows.append(lead(key) + [None] * len(cols) + [err])
                continue
            reasons = "; ".join(rep[f"{c}_reason"] for c in cols if f"{c}_reason" in rep)
            rows.append(lead(key) + [rep.get(c) for c in cols] + [reasons or None])
        _emit(_csv_text(base + cols + ["error"], rows), args.out / f"{name}.csv")

    for fig in figures:
        if fig == "degree":
            rows = []
            for key, _, hist, err in results:
                if err is not None:
                    rows.append(lead(key) + [None, None, None, err])
                    continue
                total = sum(hist.values())
                remaining = total
                for d, c in hist.items():
                    rows.append(lead(key) + [d, c, remaining / total, None])
                    remaining -= c
            _emit(_csv_text(base + ["degree", "count", "ccdf", "error"], rows), args.out / "degree_distribution.csv")
        elif fig == "cc_beta":
            n_max = max(args.n_grid)
            rows = []
            for beta in sorted(set(args.beta_grid)):
                ccs = [
                    rep["clustering"]
                    for key, rep, _, err in results
                    if key[0] == "cdpam" and key[1] == beta and key[2] == n_max and err is None
                ]
                if ccs:
                    rows.append([math.log(beta), beta, n_max, float(np.mean(ccs)), float(np.std(ccs)), len(ccs)])
                else:
                    rows.append([math.log(beta), beta, n_max, None, None, 0])
            _emit(_csv_text(["log_beta", "beta", "n", "mean_cc", "std_cc", "runs"], rows), args.out / "cc_vs_beta.csv")
        elif fig == "gamma":
            metric_table("gamma", ["gamma_hat", "x_min", "ks", "p_value"])
        elif fig == "diameter":
            rows = []
            for key, rep, _, err in results:
                model, beta, n, seed = key
                nodes = args.m0 + n
                theory, terr = (None, None)
                if model == "cdpam":
                    theory, terr = _theory_diameter(args.m, beta, theta, nodes)
                if err is not None:
                    rows.append(lead(key) + [nodes, math.log(nodes), None, None, theory, err])
                    continue
                note = "; ".join(x for x in (rep.get("diameter_reason"), terr) if x) or None
                rows.append(
                    lead(key)
                    + [nodes, math.log(nodes), rep["diameter"], rep["diameter_is_estimate"], theory, note]
                )
            header = base + ["nodes", "ln_n", "bfs_diameter", "diameter_is_estimate", "theory_diameter", "error"]
            _emit(_csv_text(header, rows), args.out / "diameter.csv")
        else:
            metric_table(fig, [fig])
    return 0


# ---------------------------------------------------------------- theory


def cmd_theory(args) -> int:
    if args.m < 1:
        raise InvalidParameterError(f"--m must be >= 1, got {args.m}")
    header_lead = ["beta", "theta", "m"]
    rows = []
    curve = args.curve
    if curve == "params":
        header = header_lead + ["gamma", "c", "K", "error"]
    elif curve == "diameter":
        header = header_lead + ["n", "ln_n", "harmonic_n", "expected_diameter", "error"]
    elif curve == "degree":
        header = header_lead + ["t_i", "t", "expected_degree", "error"]
    else:
        header = header_lead + ["k", "degree_density", "error"]
    for beta in args.beta_grid:
        lead = [beta, args.theta, args.m]
        try:
            kw = {} if args.r is None else {"r": args.r}
            p = TheoryParams(args.m, beta, args.theta, **kw)
        except CdpamError as exc:
            width = len(header) - len(lead) - 1
            rows.append(lead + [None] * width + [str(exc)])
            continue
        if curve == "params":
            rows.append(lead + [p.gamma, p.c, p.K, None])
        elif curve == "diameter":
            for n in args.n_grid:
                try:
                    rows.append(lead + [n, math.log(n), harmonic(n), expected_diameter(n, p), None])
                except (CdpamError, ValueError) as exc:
                    rows.append(lead + [n, None, None, None, str(exc)])
        elif curve == "degree":
            for t_i in args.ti_grid:
                for t in args.n_grid:
                    try:
                        rows.append(lead + [t_i, t, expected_degree(t, t_i, p), None])
                    except CdpamError as exc:
                        rows.append(lead + [t_i, t, None, str(exc)])
        else:
            for k in args.k_grid:
                try:
                    rows.append(lead + [k, degree_density(k, p), None])
                except CdpamError as exc:
                    rows.append(lead + [k, None, str(exc)])
    _emit(_csv_text(header, rows), args.out)
    return 0


# ---------------------------------------------------------------- compare


def cmd_compare(args) -> int:
    _check_analysis_args(args)
    if not args.seeds:
        raise CliError("--seeds must be nonempty")
    cdpam = ModelParams(args.m0, args.m, args.beta, args.theta, args.n, 0)
    opts = _spectral_opts(args)
    runs: dict[str, list[dict]] = {"cdpam": [], "ba": []}
    for seed in sorted(set(args.seeds)):
        for model in ("cdpam", "ba"):
            params = ModelParams(cdpam.m0, cdpam.m, cdpam.beta, cdpam.theta, cdpam.n_steps, seed)
            g = _grow(model, params)
            rep = build_report(
                g,
                spectral=opts,
                exact_diameter_cutoff=args.exact_diameter_cutoff,
                bootstrap=args.bootstrap,
                seed=seed,
            )
            rep["seed"] = seed
            runs[model].append(rep)

    def mean(model, key):
        vals = [r[key] for r in runs[model] if r.get(key) is not None]
        return float(np.mean(vals)) if vals else None

    means = {model: {k: mean(model, k) for k in _COMPARE_METRICS} for model in runs}
    delta = {
        k: (means["cdpam"][k] - means["ba"][k])
        if means["cdpam"][k] is not None and means["ba"][k] is not None
        else None
        for k in _COMPARE_METRICS
    }
    out = {
        "params": {"m0": args.m0, "m": args.m, "beta": args.beta, "theta": args.theta, "n": args.n,
                   "seeds": sorted(set(args.seeds))},
        "cdpam": runs["cdpam"],
        "ba": runs["ba"],
        "mean": means,
        "delta": delta,
    }
    _emit(_json_text(out), args.out)
    return 0


COMMANDS = {
    "generate": cmd_generate,
    "analyze": cmd_analyze,
    "sweep": cmd_sweep,
    "theory": cmd_theory,
    "compare": cmd_compare,
}


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except (CliError, CdpamError) as exc:
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        print(f"cdpam: error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
