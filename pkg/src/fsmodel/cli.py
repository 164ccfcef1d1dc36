"""``fsmodel`` command line: generate, fit, eval, xval, importance, predict, advise.

Results go to stdout, diagnostics to stderr. Exit codes: 0 success,
2 bad input or usage, 3 numerical failure, 4 I/O failure.
"""

import argparse
from dataclasses import dataclass
import io
import json
import math
import os
import sys
import warnings

from . import advisor, evaluation, importance, regression, synthbench
from .errors import FsModelError, InputError, IoError, UsageError
from .io import (
    ModelDocument,
    dataset_to_csv,
    load_candidates,
    load_csv,
    load_model,
    load_schema,
    save_model,
    save_truth,
)
from .schema import encode_value, get_schema

SEED_ENV = "FSMODEL_SEED"
REST_THRESHOLD = 0.01
REST_MIN_FEATURES = 6


@dataclass
class CommandOutcome:
    exit_code: int
    output: str = ""
    diagnostics: str = ""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _table(header, rows, align=None):
    cells = [list(map(str, header))] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    align = align or ["<"] + [">"] * (len(header) - 1)
    lines = []
    for k, r in enumerate(cells):
        lines.append("  ".join(f"{c:{a}{w}}" for c, a, w in zip(r, align, widths)).rstrip())
        if k == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def _pct(x):
    return f"{100.0 * x:.1f}%"


def _dump(obj):
    return json.dumps(obj, indent=2) + "\n"


def _resolve_seed(args):
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV)
    if env is None or env.strip() == "":
        return 0
    try:
        return int(env, 0)
    except ValueError:
        raise UsageError(f"{SEED_ENV}={env!r} is not an integer") from None


def _schema(args):
    if getattr(args, "schema_file", None):
        return load_schema(args.schema_file)
    return get_schema(args.schema)


def _finite_or_inf(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if math.isnan(v):
        raise argparse.ArgumentTypeError("NaN is not allowed")
    return v


def _on_off(text):
    t = text.strip().lower()
    if t in ("on", "true", "1", "yes"):
        return True
    if t in ("off", "false", "0", "no"):
        return False
    raise argparse.ArgumentTypeError(f"expected on/off, got {text!r}")


# -- commands ---------------------------------------------------------------

def cmd_generate(args):
    cfg_kwargs = dict(regime=args.regime, n=args.n, seed=_resolve_seed(args),
                      noise_sigma=args.sigma, o_sync=args.o_sync)
    if args.no_floor:
        cfg_kwargs["floor_mbps"] = None
    elif args.floor is not None:
        cfg_kwargs["floor_mbps"] = args.floor
    dataset, truth = synthbench.generate(synthbench.GeneratorConfig(**cfg_kwargs))
    if args.truth_out:
        save_truth(truth, args.truth_out)
    if args.out:
        buf = io.StringIO()
        dataset_to_csv(dataset, buf)
        _write_text(args.out, buf.getvalue())
        return _dump({"records": dataset.n, "out": args.out}) if args.format == "json" else (
            f"wrote {dataset.n} records to {args.out}\n")
    buf = io.StringIO()
    dataset_to_csv(dataset, buf)
    return buf.getvalue()


def _write_text(path, text):
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc.strerror or exc}") from None


def _coefficient_table(schema, betas):
    header = ["feature", *schema.metrics]
    rows = [["constant", *(f"{betas[m][0]:.3f}" for m in schema.metrics)]]
    for j, name in enumerate(schema.feature_names, start=1):
        rows.append([name, *(f"{betas[m][j]:.3f}" for m in schema.metrics)])
    return _table(header, rows)


def cmd_fit(args):
    schema = _schema(args)
    dataset = load_csv(args.data, schema)
    model = regression.fit(dataset)
    stats = evaluation.model_fit_stats(model, dataset)
    doc = ModelDocument.from_fit(model, stats)
    if args.out:
        save_model(doc, args.out)
    if args.format == "json":
        return _dump(doc.to_dict())
    text = _coefficient_table(schema, model.beta)
    text += "\n" + _table(["", *schema.metrics],
                          [["R^2", *(_pct(stats[m].r2) for m in schema.metrics)],
                           ["adjusted R^2", *(_pct(stats[m].adj_r2) for m in schema.metrics)]])
    return text


def cmd_eval(args):
    if args.model:
        doc = load_model(args.model)
        schema = doc.schema
        model = doc.to_model()
        dataset = load_csv(args.data, schema)
    else:
        schema = _schema(args)
        dataset = load_csv(args.data, schema)
        model = regression.fit(dataset)
    stats = evaluation.model_fit_stats(model, dataset)
    if args.format == "json":
        return _dump({m: s.to_dict() for m, s in stats.items()})
    rows = [[m, f"{s.tss:.3f}", f"{s.sse:.3f}", f"{s.ssr:.3f}", f"{s.r2:.4f}",
             f"{s.adj_r2:.4f}", s.n, s.k] for m, s in stats.items()]
    return _table(["metric", "TSS", "SSE", "SSR", "R^2", "adj R^2", "n", "k"], rows)


def cmd_xval(args):
    schema = _schema(args)
    dataset = load_csv(args.data, schema)
    report = evaluation.cross_validate(dataset, args.train_frac, _resolve_seed(args))
    if args.format == "json":
        return _dump(report.to_dict())
    head = (f"seed {report.seed}: {report.train_size} training / "
            f"{report.validation_size} validation records\n\n")
    rows = [[m, _pct(v.train_adj_r2), _pct(v.validation_r2)]
            for m, v in report.metrics.items()]
    return head + _table(["metric", "adjusted R^2", "cross validation"], rows)


def cmd_importance(args):
    schema = _schema(args)
    dataset = load_csv(args.data, schema)
    report = importance.importance_report(dataset)
    if args.format == "json":
        return _dump(report.to_dict())
    metrics = list(schema.metrics)
    vi = {m: ({it.feature: it.importance for it in r} if r is not None else None)
          for m, r in report.rankings.items()}

    def cell(m, f):
        return "undefined" if vi[m] is None else f"{vi[m][f]:.3f}"

    small = [f for f in schema.feature_names
             if all(vi[m] is None or vi[m][f] < REST_THRESHOLD for m in metrics)]
    rest = small if len(small) > REST_MIN_FEATURES else []
    rows = [[f, *(cell(m, f) for m in metrics)] for f in schema.feature_names if f not in rest]
    if rest:
        rows.append([f"Rest ({len(rest)} features)",
                     *("undefined" if vi[m] is None else f"{sum(vi[m][f] for f in rest):.3f}"
                       for m in metrics)])
    return _table(["feature", *metrics], rows)


def _parse_assignments(schema, items):
    raw = {}
    for item in items:
        if "=" not in item:
            raise UsageError(f"--set expects feature=value, got {item!r}")
        k, v = item.split("=", 1)
        raw[k.strip()] = v.strip()
    for name in raw:
        schema.feature_index(name)
    missing = [f for f in schema.feature_names if f not in raw]
    if missing:
        raise InputError(f"missing feature value(s): {', '.join(missing)}")
    return [encode_value(f, raw[f.name]) for f in schema.features]


def cmd_predict(args):
    doc = load_model(args.model)
    model = doc.to_model()
    x = _parse_assignments(doc.schema, args.set)
    metrics = [args.metric] if args.metric else list(model.metrics)
    preds = {}
    notes = []
    for m in metrics:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", regression.NegativePredictionWarning)
            preds[m] = regression.predict(model, x, m)
        notes += [str(w.message) for w in caught]
    for note in notes:
        print(f"warning: {note}", file=sys.stderr)
    if args.format == "json":
        return _dump({"predictions": preds, "negative": [m for m, v in preds.items() if v < 0]})
    rows = [[m, f"{v:.3f}", "negative (extrapolated)" if v < 0 else ""]
            for m, v in preds.items()]
    return _table(["metric", "MB/s", "note"], rows, align=["<", ">", "<"])


def cmd_advise(args):
    doc = load_model(args.model)
    model = doc.to_model()
    candidates = load_candidates(args.candidates, doc.schema)
    verdicts = advisor.rank_designs(model, candidates, args.power_budget, args.objective,
                                    args.cap_coefficient)
    if args.format == "json":
        return _dump([v.to_dict() for v in verdicts])
    key = advisor.RANK_METRIC if advisor.RANK_METRIC in model.beta else model.metrics[0]
    rows = [[i, v.name, f"{v.predicted[key]:.2f}",
             f"{v.cpu_cap:.2f}" if math.isfinite(v.cpu_cap) else "none",
             f"{v.capped[key]:.2f}", f"{v.power_watts:g}", f"{v.perf_per_watt:.3f}",
             v.limiting_factor]
            for i, v in enumerate(verdicts, start=1)]
    return _table(["rank", "design", f"predicted {key}", "cpu cap", "capped", "watts",
                   "MB/s per W", "limited by"], rows, align=["<", "<", ">", ">", ">", ">", ">", "<"])


# -- parser -------------------------------------------------------------------

def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("table", "json"), default="table")

    def data_args(p, schema_required=True):
        p.add_argument("--data", required=True, help="benchmark CSV")
        g = p.add_mutually_exclusive_group(required=schema_required)
        g.add_argument("--schema", choices=("hardware", "gluster"), help="built-in schema")
        g.add_argument("--schema-file", help="schema JSON document")

    parser = _Parser(prog="fsmodel", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("generate", parents=[common], help="simulate a benchmark campaign")
    p.add_argument("--regime", choices=("hardware", "gluster"), default="hardware")
    p.add_argument("--n", type=int, default=2000)
    p.add_argument("--seed", type=int)
    p.add_argument("--sigma", type=float, help="noise standard deviation in MB/s")
    p.add_argument("--o-sync", type=_on_off, default=True, help="on/off (gluster regime)")
    p.add_argument("--floor", type=float, help="throughput floor in MB/s")
    p.add_argument("--no-floor", action="store_true", help="disable the throughput floor")
    p.add_argument("--out", help="CSV destination (default: stdout)")
    p.add_argument("--truth-out", help="write the planted truth as JSON")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("fit", parents=[common], help="fit per-metric linear models")
    data_args(p)
    p.add_argument("--out", help="model JSON destination")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("eval", parents=[common], help="goodness-of-fit statistics")
    data_args(p, schema_required=False)
    p.add_argument("--model", help="score a saved model instead of refitting")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("xval", parents=[common], help="random hold-out validation")
    data_args(p)
    p.add_argument("--train-frac", type=float, default=0.75)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_xval)

    p = sub.add_parser("importance", parents=[common], help="variance-based feature ranking")
    data_args(p)
    p.set_defaults(func=cmd_importance)

    p = sub.add_parser("predict", parents=[common], help="predict throughput of one configuration")
    p.add_argument("--model", required=True)
    p.add_argument("--set", action="append", default=[], metavar="FEATURE=VALUE")
    p.add_argument("--metric")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("advise", parents=[common], help="rank candidate cluster designs")
    p.add_argument("--model", required=True)
    p.add_argument("--candidates", required=True, help="candidates JSON")
    p.add_argument("--power-budget", type=float)
    p.add_argument("--objective", choices=advisor.OBJECTIVES, default="perf_per_watt")
    p.add_argument("--cap-coefficient", type=_finite_or_inf,
                   default=advisor.DEFAULT_CAP_COEFFICIENT,
                   help="MB/s per CPU benchmark point; 'inf' disables the cap")
    p.set_defaults(func=cmd_advise)
    return parser


def dispatch(argv):
    """Run one command and capture its outcome instead of exiting."""
    err = io.StringIO()
    old_stderr = sys.stderr
    sys.stderr = err
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "command", None) == "eval" and not args.model and not (
                args.schema or args.schema_file):
            raise UsageError("eval needs --model or a schema")
        output = args.func(args)
        return CommandOutcome(0, output, err.getvalue())
    except FsModelError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=err)
        return CommandOutcome(exc.exit_code, "", err.getvalue())
    except SystemExit as exc:
        # --help and friends
        code = exc.code if isinstance(exc.code, int) else 0
        return CommandOutcome(code, "", err.getvalue())
    finally:
        sys.stderr = old_stderr


def main(argv=None):
    from contextlib import redirect_stdout

    buf = io.StringIO()
    with redirect_stdout(buf):
        outcome = dispatch(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(buf.getvalue() + outcome.output)
    sys.stderr.write(outcome.diagnostics)
    return outcome.exit_code


if __name__ == "__main__":
    sys.exit(main())
