"""Command-line front end: ``sentimarket <command> [options]``.

Every command writes its outputs atomically into ``--out-dir`` together with
``<command>_run.json``, which embeds the full run configuration (including
the argument vector and seed). ``sentimarket rerun <run.json>`` replays it.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import tempfile
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import dataset as ds_mod
from . import synth
from .econometrics import ccf, granger_test, stationarity_report
from .errors import DimensionMismatch, MissingInput, SentimarketError
from .indicators import build_indicator_matrix
from .ingest import (
    EMOTIONS,
    default_attitude_lexicon,
    default_emotion_lexicon,
    filter_by_cashtag,
    load_attitude_lexicon,
    load_documents,
    load_emotion_lexicon,
    load_prices,
)
from .sentiment import Lexicons, extract_daily, load_signals, signals_to_csv_text
from .svm import DEFAULT_C_GRID, DEFAULT_GAMMA_GRID, SvmConfig, TrainedModel, evaluate, grid_search, train
from .timeseries import DatedSeries, align, diff, pct_change

log = logging.getLogger("sentimarket")

SIGNAL_NAMES = ("attitude",) + EMOTIONS
GRANGER_COLUMNS = ("signal", "lag", "direction", "mode", "f_stat", "p_value", "n_obs", "significant", "status")


@dataclass(frozen=True)
class RunConfig:
    command: str
    inputs: dict = field(default_factory=dict)
    ticker: str | None = None
    transform: str = "levels"
    lags: tuple = ()
    horizon: int = 5
    scenario: str | None = None
    mode: str | None = None
    threshold: float = 0.10
    seed: int = 0
    out_dir: str = "."
    argv: tuple = ()

    def __post_init__(self):
        if not 0 < self.threshold < 1:
            raise ValueError("significance threshold must lie in (0, 1)")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["lags"] = list(self.lags)
        d["argv"] = list(self.argv)
        return d


def atomic_write(path: Path, text: str) -> None:
    """Write via a temporary file in the same directory, then rename."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=_jsonable) + "\n"


def _jsonable(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    return str(obj)


def _cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return "" if v is None else str(v)


def render_table(rows: Sequence[dict], columns: Sequence[str], fmt: str) -> str:
    """Rows as CSV, a JSON list of objects, or a Markdown table."""
    if fmt == "json":
        return _json([{c: r.get(c) for c in columns} for r in rows])
    if fmt == "md":
        lines = ["| " + " | ".join(columns) + " |", "|" + "---|" * len(columns)]
        lines += ["| " + " | ".join(_cell(r.get(c)) for c in columns) + " |" for r in rows]
        return "\n".join(lines) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_cell(r.get(c)) for c in columns])
    return buf.getvalue()


class Run:
    """Collects a command's outputs and writes them plus the run manifest."""

    def __init__(self, args: argparse.Namespace, config: RunConfig):
        self.args = args
        self.config = config
        self.out_dir = Path(config.out_dir)
        self.files: list[str] = []
        self.results: dict = {}

    def write(self, name: str, text: str) -> Path:
        path = self.out_dir / name
        atomic_write(path, text)
        self.files.append(name)
        return path

    def table(self, stem: str, rows: Sequence[dict], columns: Sequence[str]) -> Path:
        fmt = self.args.format
        return self.write(f"{stem}.{fmt}", render_table(rows, columns, fmt))

    def finish(self) -> None:
        manifest = {"config": self.config.to_dict(), "outputs": self.files, "results": self.results}
        atomic_write(self.out_dir / f"{self.config.command.replace(' ', '_')}_run.json", _json(manifest))


def _lexicons(args) -> Lexicons:
    att = load_attitude_lexicon(args.attitude_lexicon) if args.attitude_lexicon else default_attitude_lexicon()
    emo = load_emotion_lexicon(args.emotion_lexicon) if args.emotion_lexicon else default_emotion_lexicon()
    return Lexicons(att, emo)


def _corpus(args):
    path = Path(args.corpus)
    if not path.is_file():
        raise MissingInput(f"corpus not found: {path}")
    docs, skipped = load_documents(path)
    if skipped:
        log.warning("skipped %d malformed corpus lines", len(skipped))
    if args.ticker:
        docs = filter_by_cashtag(docs, args.ticker)
    return docs


def _prices(path):
    if not Path(path).is_file():
        raise MissingInput(f"price file not found: {path}")
    return load_prices(path)


def _signal_series(signals, name: str) -> DatedSeries:
    dates = np.array([s.date for s in signals], dtype="datetime64[D]")
    idx = SIGNAL_NAMES.index(name)
    values = np.array([s.attitude if idx == 0 else s.emotions[idx - 1] for s in signals])
    return DatedSeries(dates, values, name)


def _transform(s: DatedSeries, transform: str, k: int = 0) -> DatedSeries:
    if transform == "pct":
        s = pct_change(s)
    return diff(s, k) if k else s


def _parse_floats(text: str) -> tuple:
    return tuple(float(v) for v in text.split(",") if v.strip())


def _parse_ints(text: str) -> tuple:
    return tuple(int(v) for v in text.split(",") if v.strip())


# commands


def cmd_stationarity(run: Run) -> None:
    a = run.args
    if a.prices:
        series = _prices(a.prices).series(a.column or "adj_close")
    else:
        series = _signal_series(load_signals(_require(a.signals)), a.column or "attitude")
    series = _transform(series, a.transform, a.diff)
    report = stationarity_report(series, a.max_lag, a.lb_lags, a.adf_lag)
    run.results = report.to_dict()
    run.write("stationarity.json", _json({"config": run.config.to_dict(), "report": run.results}))
    rows = [
        {"lag": k + 1, "acf": float(r), "pacf": float(p), "conf_bound": report.conf_bound}
        for k, (r, p) in enumerate(zip(report.acf, report.pacf))
    ]
    run.write("stationarity_acf.csv", render_table(rows, ("lag", "acf", "pacf", "conf_bound"), "csv"))


def _require(path):
    if not path or not Path(path).is_file():
        raise MissingInput(f"input not found: {path}")
    return path


def cmd_ccf(run: Run) -> None:
    a = run.args
    price = _transform(_prices(a.prices).series(), a.transform)
    signal = _signal_series(load_signals(_require(a.signals)), a.signal)
    x, y = align(signal, price)
    report = ccf(x, y, a.max_lag)
    run.results = {"n": report.n, "conf_bound": report.conf_bound, "signal": a.signal}
    run.table("ccf", report.rows(), ("lag", "corr", "conf_bound"))


def granger_rows(signals_by_mode: dict, price: DatedSeries, names: Sequence[str], lags: Sequence[int], threshold: float) -> list[dict]:
    """One row per (signal, lag, direction, mode); both directions always tested."""
    rows = []
    for name in names:
        for lag in lags:
            for direction in ("signal=>price", "price=>signal"):
                for mode, signals in signals_by_mode.items():
                    sig, px = align(_signal_series(signals, name), price)
                    cause, effect = (sig, px) if direction == "signal=>price" else (px, sig)
                    row = {"signal": name, "lag": lag, "direction": direction, "mode": mode}
                    try:
                        r = granger_test(cause, effect, lag, threshold, direction)
                        row.update(f_stat=r.f_stat, p_value=r.p_value, n_obs=r.n_obs, significant=r.significant, status="ok")
                    except SentimarketError as exc:
                        row.update(f_stat=float("nan"), p_value=float("nan"), n_obs=0, significant=False, status=type(exc).__name__)
                    rows.append(row)
    return rows


def cmd_granger(run: Run) -> None:
    a = run.args
    prices = _prices(a.prices)
    price = _transform(prices.series(), a.transform)
    docs = _corpus(a)
    lex = _lexicons(a)
    calendar = [d.item() for d in prices.dates]
    modes = ("standard", "temporal") if a.mode == "both" else (a.mode,)
    signals_by_mode = {m: extract_daily(docs, lex, calendar, m) for m in modes}
    names = {"attitude": ("attitude",), "emotions": EMOTIONS, "all": SIGNAL_NAMES}[a.signals]
    rows = granger_rows(signals_by_mode, price, names, run.config.lags, a.threshold)
    run.results = {"rows": len(rows), "significant": sum(r["significant"] for r in rows)}
    run.table("granger", rows, GRANGER_COLUMNS)


def cmd_sentiment_extract(run: Run) -> None:
    a = run.args
    docs = _corpus(a)
    calendar = [d.item() for d in _prices(a.calendar).dates] if a.calendar else None
    signals = extract_daily(docs, _lexicons(a), calendar, a.mode)
    run.results = {"days": len(signals), "documents": len(docs)}
    run.write(f"signals_{a.mode}.csv", signals_to_csv_text(signals))


def cmd_features_build(run: Run) -> None:
    a = run.args
    prices = _prices(a.prices)
    signals = load_signals(a.signals) if a.signals else None
    matrix = build_indicator_matrix(prices)
    data = ds_mod.assemble(matrix, signals, a.scenario, ds_mod.label_horizon(prices, a.horizon))
    data = ds_mod.split(data, a.train_fraction, a.seed, a.split)
    data = ds_mod.normalize(data, a.scope)
    sidecar = data.sidecar()
    sidecar["config"] = dict(sidecar["config"], run=run.config.to_dict())
    run.write("dataset.csv", data.to_csv_text())
    run.write("dataset.json", _json(sidecar))
    run.results = {"rows": len(data), "features": len(data.feature_names), "train_rows": int(np.sum(data.split == "train"))}


def _load_dataset(path):
    return ds_mod.load_dataset(_require(path))


def cmd_train(run: Run) -> None:
    a = run.args
    data = _load_dataset(a.dataset)
    X, y = data.subset("train")
    base = SvmConfig(tol=a.tol, seed=a.seed)
    result = grid_search(X, y, _parse_floats(a.C_grid), _parse_floats(a.gamma_grid), a.folds, a.seed, base)
    model = train(X, y, result.best, data.feature_names, data.stats)
    payload = model.to_dict()
    payload["run_config"] = run.config.to_dict()
    payload["scenario"] = data.config.get("scenario")
    run.write("model.json", _json(payload))
    run.table("grid", result.rows(), ("C", "gamma", "cv_accuracy"))
    run.results = {"C": result.best.C, "gamma": result.best.gamma, "support_vectors": len(model.dual_coef)}


def cmd_evaluate(run: Run) -> None:
    a = run.args
    model = TrainedModel.load(a.model)
    data = _load_dataset(a.dataset)
    if model.feature_names and tuple(model.feature_names) != tuple(data.feature_names):
        raise DimensionMismatch("dataset feature columns differ from the model's")
    X, y = data.subset("test")
    report = evaluate(model, X, y)
    group = a.group or data.config.get("scenario") or "baseline"
    majority = max(np.mean(y == 1), np.mean(y == -1)) if len(y) else 0.0
    run.results = {"instrument": a.instrument, "group": group, "metrics": report.to_dict(), "majority_baseline": float(majority)}
    run.write(a.output, _json(dict(run.results, config=run.config.to_dict())))


def report_rows(evals: Sequence[dict]) -> tuple[list[dict], list[str]]:
    """Pivot eval records into rows = instruments, column groups = scenario groups."""
    instruments, groups = [], []
    cells: dict = {}
    for e in evals:
        inst, grp = e["instrument"], e["group"]
        if inst not in instruments:
            instruments.append(inst)
        if grp not in groups:
            groups.append(grp)
        cells[(inst, grp)] = e["metrics"]
    columns = ["instrument"]
    for g in groups:
        columns += [f"{g} Acc", f"{g} F1_up", f"{g} F1_down"]
    rows = []
    for inst in instruments:
        row = {"instrument": inst}
        for g in groups:
            m = cells.get((inst, g))
            if m:
                row[f"{g} Acc"] = round(m["accuracy"], 4)
                row[f"{g} F1_up"] = round(m["f1_up"], 4)
                row[f"{g} F1_down"] = round(m["f1_down"], 4)
        rows.append(row)
    return rows, columns


def cmd_report(run: Run) -> None:
    evals = [json.loads(Path(_require(p)).read_text(encoding="utf-8")) for p in run.args.evals]
    rows, columns = report_rows(evals)
    run.results = {"instruments": len(rows), "groups": (len(columns) - 1) // 3}
    run.table("report", rows, columns)


def cmd_synth(run: Run) -> None:
    a = run.args
    if a.market == "momentum":
        prices = synth.gen_momentum_market(a.n, a.seed)
    else:
        prices = synth.gen_random_walk(a.n, a.drift, a.vol, a.seed)
    run.write("prices.csv", prices.to_csv_text())
    if a.corpus:
        calendar = [d.item() for d in prices.dates]
        planted = synth.random_signals(calendar, a.seed)
        past = calendar[:: a.past_every] if a.past_every else []
        docs = synth.gen_corpus(calendar, planted, _lexicons(a), a.seed, past, ticker=a.ticker)
        tmp = io.StringIO()
        for d in docs:
            tmp.write(d.to_json() + "\n")
        run.write("corpus.jsonl", tmp.getvalue())
        run.write("planted_signals.csv", signals_to_csv_text(planted))
        run.results["documents"] = len(docs)
    run.results["bars"] = len(prices)


def cmd_rerun(run: Run) -> None:
    """Placeholder dispatch target; ``main`` replays the manifest's argv."""


# parser


def _global_flags(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--seed", type=int, default=d(0), help="random seed (default 0)")
    p.add_argument("--out-dir", default=d("."), help="output directory (default .)")
    p.add_argument("--format", choices=("csv", "json", "md"), default=d("csv"), help="table format")
    p.add_argument("-v", "--verbose", action="store_true", default=d(False))


def _lexicon_flags(p):
    p.add_argument("--attitude-lexicon", help="attitude lexicon TSV (default: bundled)")
    p.add_argument("--emotion-lexicon", help="emotion lexicon TSV (default: bundled)")


def _corpus_flags(p):
    p.add_argument("--corpus", required=True, help="JSON-lines corpus")
    p.add_argument("--ticker", help="keep only documents mentioning this cashtag")
    _lexicon_flags(p)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sentimarket", description="Sentiment and market analysis toolkit")
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)

    def add(name, func, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=func, command_name=name)
        return p

    p = add("stationarity", cmd_stationarity, "ADF, Ljung-Box and ACF/PACF report")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--prices")
    src.add_argument("--signals")
    p.add_argument("--column", help="price column or signal name")
    p.add_argument("--transform", choices=("levels", "pct"), default="levels")
    p.add_argument("--diff", type=int, default=0, help="difference k times before testing")
    p.add_argument("--max-lag", type=int, default=20)
    p.add_argument("--lb-lags", type=int, default=10)
    p.add_argument("--adf-lag", type=int, default=1)

    p = add("ccf", cmd_ccf, "cross-correlation of a sentiment signal and prices")
    p.add_argument("--prices", required=True)
    p.add_argument("--signals", required=True)
    p.add_argument("--signal", choices=SIGNAL_NAMES, default="attitude")
    p.add_argument("--transform", choices=("levels", "pct"), default="pct")
    p.add_argument("--max-lag", type=int, default=10)

    p = add("granger", cmd_granger, "Granger tests in both directions")
    p.add_argument("--prices", required=True)
    _corpus_flags(p)
    p.add_argument("--signals", choices=("attitude", "emotions", "all"), default="all")
    p.add_argument("--lags", default="1,2")
    p.add_argument("--mode", choices=("standard", "temporal", "both"), default="both")
    p.add_argument("--threshold", type=float, default=0.10)
    p.add_argument("--transform", choices=("levels", "pct"), default="pct")

    sentiment = sub.add_parser("sentiment", help="sentiment extraction")
    ssub = sentiment.add_subparsers(dest="action", required=True)
    p = ssub.add_parser("extract", parents=[common], help="daily attitude and emotion signals")
    p.set_defaults(func=cmd_sentiment_extract, command_name="sentiment extract")
    _corpus_flags(p)
    p.add_argument("--mode", choices=("standard", "temporal"), default="standard")
    p.add_argument("--calendar", help="price CSV whose dates form the calendar")

    features = sub.add_parser("features", help="feature datasets")
    fsub = features.add_subparsers(dest="action", required=True)
    p = fsub.add_parser("build", parents=[common], help="labeled, normalized dataset")
    p.set_defaults(func=cmd_features_build, command_name="features build")
    p.add_argument("--prices", required=True)
    p.add_argument("--signals")
    p.add_argument("--scenario", choices=ds_mod.SCENARIOS, default="baseline")
    p.add_argument("--horizon", type=int, default=5)
    p.add_argument("--train-fraction", type=float, default=2 / 3)
    p.add_argument("--split", choices=("random", "chronological"), default="random")
    p.add_argument("--scope", choices=("train", "all"), default="train")

    p = add("train", cmd_train, "grid-searched RBF SVM")
    p.add_argument("--dataset", required=True)
    p.add_argument("--C-grid", dest="C_grid", default=",".join(map(str, DEFAULT_C_GRID)))
    p.add_argument("--gamma-grid", default=",".join(map(str, DEFAULT_GAMMA_GRID)))
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--tol", type=float, default=1e-3)

    p = add("evaluate", cmd_evaluate, "test-split accuracy and per-class F1")
    p.add_argument("--model", required=True)
    p.add_argument("--dataset", required=True)
    p.add_argument("--instrument", default="instrument")
    p.add_argument("--group", help="report column group (default: scenario)")
    p.add_argument("--output", default="eval.json")

    p = add("report", cmd_report, "merge evaluations into an instrument by scenario table")
    p.add_argument("evals", nargs="+")

    p = add("synth", cmd_synth, "write synthetic fixtures")
    p.add_argument("--n", type=int, default=600)
    p.add_argument("--market", choices=("random", "momentum"), default="random")
    p.add_argument("--drift", type=float, default=0.0002)
    p.add_argument("--vol", type=float, default=0.01)
    p.add_argument("--corpus", action="store_true", help="also write a planted-sentiment corpus")
    p.add_argument("--past-every", type=int, default=0, help="make every k-th day past-tense only")
    p.add_argument("--ticker")
    _lexicon_flags(p)

    p = add("rerun", cmd_rerun, "replay a run manifest")
    p.add_argument("manifest")
    return parser


def _config(args, argv: Sequence[str]) -> RunConfig:
    inputs = {
        k: getattr(args, k)
        for k in ("prices", "signals", "corpus", "dataset", "model", "calendar", "attitude_lexicon", "emotion_lexicon")
        if isinstance(getattr(args, k, None), str)
    }
    if getattr(args, "evals", None):
        inputs["evals"] = list(args.evals)
    lags = _parse_ints(args.lags) if getattr(args, "lags", None) else ()
    return RunConfig(
        command=args.command_name,
        inputs=inputs,
        ticker=getattr(args, "ticker", None),
        transform=getattr(args, "transform", "levels"),
        lags=lags,
        horizon=getattr(args, "horizon", 5),
        scenario=getattr(args, "scenario", None),
        mode=getattr(args, "mode", None),
        threshold=getattr(args, "threshold", 0.10),
        seed=args.seed,
        out_dir=args.out_dir,
        argv=tuple(argv),
    )


def _replay_argv(manifest_path: str, out_dir: str | None) -> list[str]:
    path = Path(_require(manifest_path))
    argv = list(json.loads(path.read_text(encoding="utf-8"))["config"]["argv"])
    if out_dir is not None:
        argv = ["--out-dir", out_dir] + _strip_out_dir(argv)
    return argv


def _strip_out_dir(argv: list[str]) -> list[str]:
    out, skip = [], False
    for tok in argv:
        if skip:
            skip = False
            continue
        if tok == "--out-dir":
            skip = True
            continue
        if tok.startswith("--out-dir="):
            continue
        out.append(tok)
    return out


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        if args.func is cmd_rerun:
            explicit = "--out-dir" in argv or any(a.startswith("--out-dir=") for a in argv)
            return main(_replay_argv(args.manifest, args.out_dir if explicit else None))
        config = _config(args, argv)
        run = Run(args, config)
        args.func(run)
        run.finish()
    except SentimarketError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
