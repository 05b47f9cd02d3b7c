"""Graph exports, text reports and the command-line front end.

The on-disk artifact is a GraphExport: a versioned JSON document with
sparse (i, j, weight) triplets for the real and imaginary parts of a
graph matrix plus a metadata block (scenario echo, stage list, chosen
subset, error, spectrum, components, conventions).  Exports written by
`run` hold the phased state Z', the one the analysis talks about, so a
consumer can draw Re(Z') and Im(Z') without redoing any math.  Floats
pass through JSON at full double precision, so import(export(Z))
reproduces Z bit for bit.

CLI verbs: run, sweep, analyze, export.  All file writes are atomic
(write to a temp file, then rename) and all outputs are deterministic
for identical inputs; nothing embeds timestamps.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .analysis import (
    DEFAULT_EDGE_THRESHOLD,
    DEFAULT_IM_TOL,
    DEFAULT_MATCH_TOL,
    build_report,
    classify_edges,
    connected_components,
)
from .gaussian import GraphZ, NumericalDegeneracyError, phase_shift_symplectic
from .scenarios import (
    ConfigError,
    Schedule,
    Stage,
    build_schedule,
    parse_scenario_config,
    run_schedule,
    schedule_symplectic,
    schedule_union_adjacency,
)

__all__ = [
    "EXPORT_SCHEMA_VERSION",
    "GraphExport",
    "export_dot",
    "export_graph",
    "export_to_json",
    "format_text_report",
    "graph_from_export",
    "import_graph",
    "main",
    "squeezing_db",
]

EXPORT_SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DEGENERATE = 3

CONVENTIONS = {
    "quadrature_order": "q1..qn then p1..pn",
    "vacuum_variance": 0.5,
    "graph_matrix": "psi(q) proportional to exp((i/2) q^T Z q), Z = V + iU",
    "db": "10*log10(exp(2*r))",
    "phase_alphabet": "per-mode phase shifts in {0, -pi/2}",
    "mode_labels": "1-based",
}


def squeezing_db(r):
    """Squeezing in decibels: 10*log10(exp(2r))."""
    return 20.0 * r / math.log(10.0)


@dataclass(frozen=True)
class GraphExport:
    """Serialized graph matrix with analysis metadata."""

    schema_version: int
    n: int
    labels: tuple
    re_edges: tuple
    im_edges: tuple
    metadata: dict


def _triplets(matrix):
    out = []
    n = matrix.shape[0]
    for i in range(n):
        for j in range(i, n):
            w = float(matrix[i, j])
            if w != 0.0:
                out.append((i + 1, j + 1, w))
    return tuple(out)


def export_graph(z, metadata=None):
    """Build a GraphExport from a graph matrix."""
    return GraphExport(
        schema_version=EXPORT_SCHEMA_VERSION,
        n=z.n,
        labels=tuple(range(1, z.n + 1)),
        re_edges=_triplets(z.z.real),
        im_edges=_triplets(z.z.imag),
        metadata=dict(metadata or {}),
    )


def export_to_json(export):
    doc = {
        "schema_version": export.schema_version,
        "n": export.n,
        "labels": list(export.labels),
        "re_edges": [list(t) for t in export.re_edges],
        "im_edges": [list(t) for t in export.im_edges],
        "metadata": export.metadata,
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _check_triplets(raw, n, key):
    out = []
    if not isinstance(raw, list):
        raise ValueError(f"{key} must be a list of (i, j, weight) triplets")
    for t in raw:
        if not (isinstance(t, list) and len(t) == 3):
            raise ValueError(f"{key} entry {t!r} is not an (i, j, weight) triplet")
        i, j, w = t
        if not (isinstance(i, int) and isinstance(j, int)
                and 1 <= i <= j <= n):
            raise ValueError(f"{key} entry {t!r} has invalid mode indices")
        if not isinstance(w, (int, float)) or isinstance(w, bool) \
                or not math.isfinite(w):
            raise ValueError(f"{key} entry {t!r} has a non-finite weight")
        out.append((i, j, float(w)))
    return tuple(out)


def import_graph(text):
    """Parse and validate a GraphExport JSON document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"export is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ValueError("export must be a JSON object")
    version = doc.get("schema_version")
    if version != EXPORT_SCHEMA_VERSION:
        raise ValueError(f"unsupported export schema_version {version!r}, "
                         f"expected {EXPORT_SCHEMA_VERSION}")
    n = doc.get("n")
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    labels = doc.get("labels")
    if labels != list(range(1, n + 1)):
        raise ValueError("labels must be the integers 1..n in order")
    metadata = doc.get("metadata", {})
    if not isinstance(metadata, dict):
        raise ValueError("metadata must be an object")
    return GraphExport(
        schema_version=version,
        n=n,
        labels=tuple(labels),
        re_edges=_check_triplets(doc.get("re_edges"), n, "re_edges"),
        im_edges=_check_triplets(doc.get("im_edges"), n, "im_edges"),
        metadata=metadata,
    )


def graph_from_export(export):
    """Reconstruct the GraphZ an export was written from."""
    z = np.zeros((export.n, export.n), dtype=complex)
    for triplets, unit in ((export.re_edges, 1.0), (export.im_edges, 1.0j)):
        for i, j, w in triplets:
            z[i - 1, j - 1] += unit * w
            if i != j:
                z[j - 1, i - 1] += unit * w
    return GraphZ(z)


def export_dot(export, threshold=DEFAULT_EDGE_THRESHOLD):
    """Render an export as a deterministic Graphviz document.

    Nodes carry their self-loop weights; edges above threshold carry
    weight, magnitude and phase class.
    """
    z = graph_from_export(export)
    classified = classify_edges(z, threshold)
    lines = ["graph state {"]
    loops = classified.self_loops
    for k in range(export.n):
        w = loops[k]
        lines.append(
            f'  {k + 1} [label="{k + 1}", loop_re={w.real!r}, loop_im={w.imag!r}];'
        )
    for edge in classified.edges:
        w = edge.weight
        lines.append(
            f'  {edge.i} -- {edge.j} [weight_re={w.real!r}, weight_im={w.imag!r}, '
            f'magnitude={abs(w)!r}, phase="{edge.phase_class}"];'
        )
    lines.append(f"  // edges below threshold {threshold!r}: "
                 f"{classified.below_threshold}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _scenario_metadata(config, schedule):
    scenario = {"kind": config.kind, "r": config.r}
    if config.p is not None:
        scenario["p"] = config.p
    if config.rows is not None:
        scenario["rows"] = config.rows
        scenario["cols"] = config.cols
    if config.kind == "lattice":
        scenario["stage_order"] = (list(config.stage_order)
                                   if config.stage_order is not None else None)
    return {
        "scenario": scenario,
        "n": schedule.n,
        "r": config.r,
        "db": squeezing_db(config.r),
        "stages": [{"pairs": [list(p) for p in stage.pairs], "r": stage.r}
                   for stage in schedule.stages],
        "conventions": dict(CONVENTIONS),
    }


def _analysis_metadata(report):
    meta = {
        "subset": list(report.phased.subset),
        "error": report.phased.error,
        "ties": report.phased.ties,
        "search": report.phased.search,
        "im_spectrum": list(report.im_spectrum),
        "components": [list(c) for c in report.components],
        "connected": report.connected,
        "useful": report.useful,
        "threshold": report.threshold,
        "im_tol": report.im_tol,
    }
    if report.comparison is not None:
        meta["target_scale"] = report.comparison.scale
        meta["target_residual"] = report.comparison.residual
        meta["target_relative_residual"] = report.comparison.relative_residual
        meta["target_matches"] = report.comparison.matches
        meta["target_match_tol"] = report.comparison.match_tol
    return meta


def _yesno(flag):
    return "yes" if flag else "no"


def format_text_report(report, metadata):
    """Human-readable checklist report, deterministic for fixed inputs."""
    lines = []
    scenario = metadata.get("scenario", {})
    kind = scenario.get("kind", "custom")
    desc = kind
    if "p" in scenario:
        desc += f" p={scenario['p']}"
    if "rows" in scenario:
        desc += f" {scenario['rows']}x{scenario['cols']}"
    lines.append(f"scenario: {desc}")
    r = metadata.get("r")
    if r is not None:
        lines.append(f"squeezing: r = {r:g} ({squeezing_db(r):.2f} dB)")
    n = metadata.get("n", report.phased.z_prime.n)
    lines.append(f"modes: {n}")
    stages = metadata.get("stages")
    if stages:
        lines.append("stages:")
        for idx, stage in enumerate(stages, start=1):
            pairs = " ".join(f"({i},{j})" for i, j in stage["pairs"])
            lines.append(f"  {idx}: {pairs}")
    if kind == "lattice":
        order = scenario.get("stage_order")
        shown = "default color order" if order is None else str(list(order))
        lines.append(f"lattice stage order: {shown}")

    phased = report.phased
    if phased.search == "exhaustive":
        lines.append(f"search: exhaustive over {1 << n} subsets, "
                     f"ties in window: {phased.ties}")
    else:
        lines.append(f"search: {phased.search} (local)")
    subset = " ".join(str(k) for k in phased.subset) if phased.subset else "(none)"
    lines.append(f"subset rotated by -pi/2: {subset}")
    lines.append(f"approximation error ||Im Z'||: {phased.error:.6e}")
    top = ", ".join(f"{v:.3e}" for v in report.im_spectrum[:5])
    lines.append(f"largest |Im Z'| eigenvalues: {top}")

    counts = {}
    for edge in report.classification.edges:
        counts[edge.phase_class] = counts.get(edge.phase_class, 0) + 1
    shown = ", ".join(f"{k}: {counts[k]}"
                      for k in ("+1", "-1", "+i", "-i", "mixed") if k in counts)
    lines.append(f"edges with |w| >= {report.threshold:g}: "
                 f"{len(report.classification.edges)}"
                 + (f" ({shown})" if shown else ""))
    lines.append(f"edges below threshold: {report.classification.below_threshold}")
    loops = np.array(report.classification.self_loops)
    lines.append(f"self loops: Im mean {loops.imag.mean():.4f}, "
                 f"range [{loops.imag.min():.4f}, {loops.imag.max():.4f}], "
                 f"max |Re| {np.abs(loops.real).max():.4f}")

    lines.append(f"components of |Re Z'| >= {report.threshold:g}: "
                 f"{len(report.components)}")
    lines.append("  " + " ".join("(" + ", ".join(map(str, c)) + ")"
                                 for c in report.components))
    if report.comparison is not None:
        cmp_ = report.comparison
        lines.append(
            f"target comparison: scale {cmp_.scale:.4f}, relative residual "
            f"{cmp_.relative_residual:.4f} (tol {cmp_.match_tol:g}) -> "
            + ("shape matches" if cmp_.matches else "shape mismatch")
        )
    lines.append("verdict:")
    lines.append(f"  [{_yesno(report.connected):>3}] single component spanning "
                 f"all {n} modes (found {len(report.components)})")
    ok_err = report.phased.error <= report.im_tol
    lines.append(f"  [{_yesno(ok_err):>3}] ||Im Z'|| = {phased.error:.3e} "
                 f"<= {report.im_tol:g}")
    lines.append(f"  [{_yesno(report.useful):>3}] usable as a cluster state "
                 f"on the intended graph")
    lines.append("conventions:")
    for key in sorted(CONVENTIONS):
        lines.append(f"  {key}: {CONVENTIONS[key]}")
    return "\n".join(lines) + "\n"


def _write_atomic(path, text):
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or Path("."),
                               prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _config_from_args(args):
    if args.config is not None:
        if args.scenario is not None:
            raise ConfigError("use either --scenario or --config, not both")
        try:
            text = Path(args.config).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        if getattr(args, "r", None) is not None:
            try:
                raw = json.loads(text)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"config is not valid JSON: {exc}") from exc
            if not isinstance(raw, dict):
                raise ConfigError("config must be a JSON object")
            raw["r"] = args.r
            text = json.dumps(raw)
        return parse_scenario_config(text)

    if args.scenario is None:
        raise ConfigError("either --scenario or --config is required")
    if getattr(args, "r", None) is None:
        raise ConfigError("--r is required with --scenario")
    raw = {"schema_version": 1, "kind": args.scenario, "r": args.r}
    if args.scenario == "ladder":
        if args.p is None:
            raise ConfigError("ladder requires --p")
        raw["p"] = args.p
    elif args.scenario == "lattice":
        if args.rows is None or args.cols is None:
            raise ConfigError("lattice requires --rows and --cols")
        raw["rows"], raw["cols"] = args.rows, args.cols
        if args.stage_order is not None:
            raw["stage_order"] = args.stage_order
    return parse_scenario_config(json.dumps(raw))


def _analyze_schedule(schedule, search, threshold):
    z = run_schedule(schedule)
    symplectic = schedule_symplectic(schedule)
    target = schedule_union_adjacency(schedule)
    return build_report(z, symplectic=symplectic, search=search,
                        threshold=threshold, target=target)


def _emit_run_outputs(report, metadata, args):
    metadata = dict(metadata)
    metadata.update(_analysis_metadata(report))
    export = export_graph(report.phased.z_prime, metadata)
    text = format_text_report(report, metadata)
    sys.stdout.write(text)
    if args.out:
        base = Path(args.out)
        _write_atomic(base.with_suffix(".json"), export_to_json(export))
        _write_atomic(base.with_suffix(".txt"), text)
        if getattr(args, "format", None) == "dot":
            _write_atomic(base.with_suffix(".dot"),
                          export_dot(export, args.threshold))
    return EXIT_OK


def _cmd_run(args):
    config = _config_from_args(args)
    schedule = build_schedule(config)
    report = _analyze_schedule(schedule, args.search, args.threshold)
    return _emit_run_outputs(report, _scenario_metadata(config, schedule), args)


def _sweep_values(args):
    if (args.r_values is None) == (args.r_range is None):
        raise ConfigError("sweep requires exactly one of --r-values or --r-range")
    if args.r_values is not None:
        try:
            values = [float(v) for v in args.r_values.split(",") if v.strip()]
        except ValueError as exc:
            raise ConfigError(f"bad --r-values: {exc}") from exc
        if not values:
            raise ConfigError("--r-values is empty")
        return values
    parts = args.r_range.split(":")
    if len(parts) != 3:
        raise ConfigError("--r-range must be start:stop:step")
    try:
        start, stop, step = (float(v) for v in parts)
    except ValueError as exc:
        raise ConfigError(f"bad --r-range: {exc}") from exc
    if step <= 0 or stop < start:
        raise ConfigError("--r-range needs step > 0 and stop >= start")
    values = []
    k = 0
    while True:
        r = start + k * step
        if r > stop + 1e-12:
            break
        values.append(r)
        k += 1
    return values


def _cmd_sweep(args):
    values = _sweep_values(args)
    args.r = values[0]
    config = _config_from_args(args)
    rows = ["r\tdB\terror\tcomponents"]
    for r in values:
        cfg = json.loads(json.dumps({
            "schema_version": 1, "kind": config.kind, "r": r,
            **({"p": config.p} if config.p is not None else {}),
            **({"rows": config.rows, "cols": config.cols}
               if config.rows is not None else {}),
            **({"stage_order": list(config.stage_order)}
               if config.stage_order is not None else {}),
        }))
        if config.kind == "custom":
            cfg["stages"] = [[list(p) for p in stage.pairs]
                             for stage in config.stages]
        schedule = build_schedule(parse_scenario_config(json.dumps(cfg)))
        report = _analyze_schedule(schedule, args.search, args.threshold)
        rows.append(f"{r:g}\t{squeezing_db(r):.4f}\t"
                    f"{report.phased.error:.6e}\t{len(report.components)}")
    text = "\n".join(rows) + "\n"
    if args.out:
        _write_atomic(Path(args.out), text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _schedule_from_metadata(metadata):
    stages = metadata.get("stages")
    n = metadata.get("n")
    if not stages or not isinstance(n, int):
        return None
    try:
        parsed = tuple(Stage(tuple(tuple(p) for p in stage["pairs"]),
                             float(stage["r"]))
                       for stage in stages)
        return Schedule(n, parsed)
    except (KeyError, TypeError, ValueError):
        return None


def _cmd_analyze(args):
    try:
        text = Path(args.input).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read export: {exc}") from exc
    try:
        export = import_graph(text)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    z = graph_from_export(export)
    metadata = export.metadata

    symplectic = None
    target = None
    schedule = _schedule_from_metadata(metadata)
    if schedule is not None and schedule.n == z.n:
        symplectic = schedule_symplectic(schedule)
        subset = metadata.get("subset") or []
        if subset:
            thetas = np.zeros(z.n)
            for k in subset:
                thetas[int(k) - 1] = -np.pi / 2.0
            symplectic = phase_shift_symplectic(z.n, thetas) @ symplectic
        target = schedule_union_adjacency(schedule)

    report = build_report(z, symplectic=symplectic, search=args.search,
                          threshold=args.threshold, target=target)
    return _emit_run_outputs(report, {k: v for k, v in metadata.items()
                                      if k in ("scenario", "n", "r", "db",
                                               "stages", "conventions")}, args)


def _cmd_export(args):
    try:
        text = Path(args.input).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read export: {exc}") from exc
    try:
        export = import_graph(text)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if args.format == "json":
        out = export_to_json(export)
    elif args.format == "dot":
        out = export_dot(export, args.threshold)
    else:
        meta = export.metadata
        lines = [f"graph export: {export.n} modes"]
        if "scenario" in meta:
            lines.append(f"scenario: {json.dumps(meta['scenario'], sort_keys=True)}")
        for key in ("r", "db", "subset", "error", "components", "useful"):
            if key in meta:
                lines.append(f"{key}: {json.dumps(meta[key])}")
        lines.append(f"re entries: {len(export.re_edges)}, "
                     f"im entries: {len(export.im_edges)}")
        out = "\n".join(lines) + "\n"
    if args.out:
        _write_atomic(Path(args.out), out)
    else:
        sys.stdout.write(out)
    return EXIT_OK


def _add_scenario_args(parser, with_r=True):
    parser.add_argument("--scenario", choices=["ladder", "lattice", "custom"],
                        help="built-in scenario family")
    parser.add_argument("--p", type=int, help="ladder prime")
    parser.add_argument("--rows", type=int, help="lattice rows")
    parser.add_argument("--cols", type=int, help="lattice columns")
    parser.add_argument("--stage-order", type=_order_arg, default=None,
                        help="lattice stage permutation, e.g. 0,1,3,2")
    parser.add_argument("--config", help="scenario config JSON path")
    if with_r:
        parser.add_argument("--r", type=float, default=None,
                            help="squeezing parameter (overrides config)")


def _order_arg(text):
    try:
        return [int(v) for v in text.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad stage order {text!r}") from exc


def _add_common_args(parser):
    parser.add_argument("--threshold", type=float,
                        default=DEFAULT_EDGE_THRESHOLD,
                        help="edge magnitude threshold for reporting")
    parser.add_argument("--search", choices=["auto", "exhaustive", "greedy"],
                        default="auto", help="subset search strategy")
    parser.add_argument("--out", help="output path (base path for run/analyze)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="cvcluster",
        description="Simulate staged two-mode-squeezing schedules and report "
                    "how close the result is to a continuous-variable cluster "
                    "state.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    p_run = sub.add_parser("run", help="run a scenario and report the analysis")
    _add_scenario_args(p_run)
    _add_common_args(p_run)
    p_run.add_argument("--format", choices=["json", "dot", "text"],
                       default="json",
                       help="extra export format written alongside --out")
    p_run.set_defaults(func=_cmd_run)

    p_sweep = sub.add_parser("sweep", help="tabulate error and component "
                                           "count over squeezing values")
    _add_scenario_args(p_sweep, with_r=False)
    p_sweep.add_argument("--r-values", help="comma-separated r list")
    p_sweep.add_argument("--r-range", help="start:stop:step inclusive range")
    _add_common_args(p_sweep)
    p_sweep.set_defaults(func=_cmd_sweep, r=None)

    p_an = sub.add_parser("analyze", help="analyze an existing graph export")
    p_an.add_argument("input", help="GraphExport JSON path")
    _add_common_args(p_an)
    p_an.add_argument("--format", choices=["json", "dot", "text"],
                      default="json",
                      help="extra export format written alongside --out")
    p_an.set_defaults(func=_cmd_analyze)

    p_ex = sub.add_parser("export", help="convert a graph export to another "
                                         "format")
    p_ex.add_argument("input", help="GraphExport JSON path")
    p_ex.add_argument("--format", choices=["json", "dot", "text"],
                      default="json")
    p_ex.add_argument("--threshold", type=float,
                      default=DEFAULT_EDGE_THRESHOLD)
    p_ex.add_argument("--out")
    p_ex.set_defaults(func=_cmd_export)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalDegeneracyError as exc:
        print(f"error: numerical degeneracy: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
