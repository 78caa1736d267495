"""Command-line entry point: ``synth-gen``, ``train``, ``predict``, ``evaluate``.

Exit codes: 0 success, 2 configuration error, 3 data error.
"""
from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import fileio
from .config import PipelineConfig, load_config
from .encoding import format_architecture
from .errors import ConfigError, DataError, StackNASError
from .metrics import per_task_report
from .pipeline import predict_task, train_task
from .rank_transform import VARIANTS
from .stacking import StackEnsemble
from .synthetic import default_generators, gen_task

log = logging.getLogger("stacknas")

EXIT_OK, EXIT_CONFIG, EXIT_DATA = 0, 2, 3

TRAIN_CSV, TEST_CSV, LATENT_CSV = "train.csv", "test.csv", "hidden_latent.csv"
ENSEMBLE_FILE, REPORT_FILE, PRED_CSV = "ensemble.json", "train_report.json", "predictions.csv"


def task_name(task_id: int) -> str:
    return f"task{task_id}"


def _select_tasks(root: Path, wanted):
    found = sorted(
        (p.name for p in root.iterdir() if p.is_dir() and p.name.startswith("task")),
        key=lambda s: (len(s), s),
    ) if root.is_dir() else []
    if wanted:
        missing = [t for t in wanted if t not in found]
        if missing:
            raise DataError(f"{root}: no task directory for {', '.join(missing)}")
        return [t for t in found if t in wanted]
    if not found:
        raise DataError(f"{root}: no task directories found")
    return found


def _map(jobs, fn, items):
    if jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(fn, items))
    return [fn(it) for it in items]


# -- synth-gen -------------------------------------------------------------

def _write_task(args):
    gen, task_id, out_dir = args
    task = gen_task(gen, task_id)
    schema = gen.schema
    d = Path(out_dir) / task_name(task_id)
    tr = [format_architecture(a, schema) for a in task.train_archs]
    te = [format_architecture(a, schema) for a in task.test_archs]
    fileio.write_csv(d / TRAIN_CSV, ["arch", "rank"], zip(tr, task.train_ranks.tolist()))
    fileio.write_csv(d / TEST_CSV, ["arch", "rank"], zip(te, task.test_ranks.tolist()))
    latent_rows = [("train", a, repr(float(v))) for a, v in zip(tr, task.train_latent)]
    latent_rows += [("test", a, repr(float(v))) for a, v in zip(te, task.test_latent)]
    fileio.write_csv(d / LATENT_CSV, ["split", "arch", "latent"], latent_rows)
    return {
        "task": task_name(task_id),
        "noise_sd": gen.noise_sd,
        "interaction_strength": gen.interaction_strength,
        "nonlinearity": gen.nonlinearity,
        "n_train": gen.n_train,
        "n_test": gen.n_test,
    }


def cmd_synth_gen(cfg: PipelineConfig, out_dir, tasks=None, jobs: int = 1) -> dict:
    """Write ``task*/train.csv``, ``test.csv``, ``hidden_latent.csv`` and ``manifest.json``."""
    syn = cfg.synthetic
    gens = default_generators(cfg.seed, syn.n_train, syn.n_test, cfg.schema, syn.noise_scale)
    ids = list(range(1, syn.n_tasks + 1))
    if tasks:
        valid = {task_name(i): i for i in ids}
        unknown = [t for t in tasks if t not in valid]
        if unknown:
            raise ConfigError(f"unknown task id(s) {', '.join(unknown)}", field="task")
        ids = [valid[t] for t in tasks]
    profiles = list(gens.values())
    # task ids beyond the eight profiles cycle through them
    jobs_list = [(profiles[(i - 1) % len(profiles)], i, str(out_dir)) for i in ids]
    entries = _map(jobs, _write_task, jobs_list)
    manifest = {"seed": cfg.seed, "tasks": entries}
    fileio.write_json(Path(out_dir) / "manifest.json", manifest)
    return manifest


# -- train -----------------------------------------------------------------

def _read_train(path):
    cols = fileio.read_csv(path, required=("arch", "rank"))
    if not cols["arch"]:
        raise DataError(f"{path}: no training rows")
    return cols["arch"], fileio.parse_int_column(cols["rank"], path, "rank")


def _train_one(args):
    cfg, task, data_dir, model_dir, jobs = args
    try:
        archs, ranks = _read_train(Path(data_dir) / task / TRAIN_CSV)
        ens, report = train_task(archs, ranks, cfg.for_task(task), cfg.schema, cfg.encoding, cfg.seed, jobs)
    except StackNASError as exc:
        cls = ConfigError if isinstance(exc, ConfigError) else DataError
        raise cls(f"{task}: {exc}") from exc
    out = Path(model_dir) / task
    fileio.write_json(out / ENSEMBLE_FILE, ens.to_dict())
    report["task"] = task
    fileio.write_json(out / REPORT_FILE, report)
    return report


def cmd_train(cfg: PipelineConfig, data_dir, model_dir, tasks=None, jobs: int = 1) -> list[dict]:
    """Fit one stacked ensemble per task directory under ``data_dir``."""
    names = _select_tasks(Path(data_dir), tasks)
    inner = jobs if len(names) == 1 else 1
    return _map(jobs, _train_one, [(cfg, t, str(data_dir), str(model_dir), inner) for t in names])


# -- predict ---------------------------------------------------------------

def load_ensemble(path) -> StackEnsemble:
    return StackEnsemble.from_dict(fileio.read_json(path))


def cmd_predict(ensemble_path, input_csv, output_csv, n_test=None, back_transform=None) -> int:
    """Write ``arch,predicted_rank`` for every row of ``input_csv`` in input order."""
    ens = load_ensemble(ensemble_path)
    cols = fileio.read_csv(input_csv, required=("arch",), optional=("rank",))
    archs = cols["arch"]
    try:
        ranks = predict_task(ens, archs, n_test, back_transform)
    except DataError as exc:
        raise type(exc)(f"{input_csv}: {exc}") from exc
    fileio.write_csv(output_csv, ["arch", "predicted_rank"], zip(archs, ranks.tolist()))
    return len(archs)


def _predict_one(args):
    task, model_dir, data_dir, back_transform = args
    cmd_predict(
        Path(model_dir) / task / ENSEMBLE_FILE,
        Path(data_dir) / task / TEST_CSV,
        Path(model_dir) / task / PRED_CSV,
        back_transform=back_transform,
    )
    return task


# -- evaluate --------------------------------------------------------------

def _keyed(path, column):
    cols = fileio.read_csv(path, required=("arch", column), optional=("rank", "predicted_rank"))
    values = fileio.parse_int_column(cols[column], path, column)
    out, dupes = {}, []
    for a, v in zip(cols["arch"], values):
        if a in out:
            dupes.append(a)
        out[a] = v
    if dupes:
        raise DataError(f"{path}: duplicate arch key(s): {', '.join(sorted(set(dupes)))}")
    return out


def join_predictions(pred_csv, truth_csv):
    pred = _keyed(pred_csv, "predicted_rank")
    truth = _keyed(truth_csv, "rank")
    only_pred = sorted(set(pred) - set(truth))
    only_truth = sorted(set(truth) - set(pred))
    if only_pred or only_truth:
        parts = []
        if only_pred:
            parts.append(f"missing from truth: {', '.join(only_pred)}")
        if only_truth:
            parts.append(f"missing from predictions: {', '.join(only_truth)}")
        raise DataError("; ".join(parts))
    keys = sorted(truth)
    return [pred[k] for k in keys], [truth[k] for k in keys]


def cmd_evaluate(pairs, variant: str = "b"):
    """Score ``(task_id, predictions_csv, truth_csv)`` triples."""
    triples = []
    for task, pred_csv, truth_csv in pairs:
        try:
            p, t = join_predictions(pred_csv, truth_csv)
        except DataError as exc:
            raise DataError(f"{task}: {exc}") from exc
        triples.append((task, p, t))
    return per_task_report(triples, variant)


# -- argument parsing ------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="TOML pipeline configuration")
    common.add_argument("--task", action="append", default=[], help="restrict to this task id (repeatable)")
    common.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    common.add_argument("--seed", type=int, help="override the configured global seed")
    common.add_argument("--back-transform", choices=VARIANTS, help="latent-to-rank variant")
    common.add_argument("--tau", choices=("b", "a"), help="Kendall tau variant")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="stacknas", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("synth-gen", parents=[common], help="generate synthetic ranking tasks")
    g.add_argument("--out", required=True, help="output directory")

    t = sub.add_parser("train", parents=[common], help="fit one stacked ensemble per task")
    t.add_argument("--data", required=True, help="directory of task*/train.csv")
    t.add_argument("--models", required=True, help="output directory for ensembles and reports")

    pr = sub.add_parser("predict", parents=[common], help="predict ranks")
    pr.add_argument("--models", help="directory of task*/ensemble.json (directory mode)")
    pr.add_argument("--data", help="directory of task*/test.csv (directory mode)")
    pr.add_argument("--model", help="single ensemble file")
    pr.add_argument("--input", help="single input CSV with an arch column")
    pr.add_argument("--output", help="single output CSV")
    pr.add_argument("--n-test", type=int, help="population size for the back-transform (default: row count)")

    e = sub.add_parser("evaluate", parents=[common], help="score predictions against truth")
    e.add_argument("--predictions", required=True, help="predictions CSV, or models directory")
    e.add_argument("--truth", required=True, help="truth CSV (arch,rank), or data directory")
    e.add_argument("--report", help="write the machine-readable summary here")
    return p


def _run(args) -> int:
    cfg = load_config(args.config).with_cli_overrides(args.seed, args.back_transform, args.tau)
    if args.jobs < 1:
        raise ConfigError("--jobs must be >= 1", field="jobs")

    if args.command == "synth-gen":
        manifest = cmd_synth_gen(cfg, args.out, args.task, args.jobs)
        print(fileio.dumps_json(manifest), end="")
        return EXIT_OK

    if args.command == "train":
        reports = cmd_train(cfg, args.data, args.models, args.task, args.jobs)
        for r in reports:
            weights = ", ".join(f"{k}={v:+.3f}" for k, v in r["meta"]["weights"].items())
            print(f"{r['task']}: n={r['n_train']} k={r['fold_spec']['k']} weights: {weights}")
        return EXIT_OK

    if args.command == "predict":
        if args.model or args.input or args.output:
            if not (args.model and args.input and args.output):
                raise ConfigError("--model, --input and --output must be given together", field="predict")
            n = cmd_predict(args.model, args.input, args.output, args.n_test, args.back_transform)
            print(f"wrote {n} predictions to {args.output}")
            return EXIT_OK
        if not (args.models and args.data):
            raise ConfigError("give --models and --data, or --model/--input/--output", field="predict")
        if args.n_test is not None:
            raise ConfigError("--n-test applies to single-file prediction only", field="n_test")
        names = _select_tasks(Path(args.models), args.task)
        jobs = [(t, args.models, args.data, args.back_transform) for t in names]
        for t in _map(args.jobs, _predict_one, jobs):
            print(f"{t}: wrote {Path(args.models) / t / PRED_CSV}")
        return EXIT_OK

    if args.command == "evaluate":
        pred, truth = Path(args.predictions), Path(args.truth)
        variant = args.tau or cfg.defaults.tau
        if pred.is_dir():
            names = _select_tasks(pred, args.task)
            pairs = [(t, pred / t / PRED_CSV, truth / t / TEST_CSV) for t in names]
        else:
            pairs = [((args.task or ["task"])[0], pred, truth)]
        report = cmd_evaluate(pairs, variant)
        print(report.to_text(), end="")
        if args.report:
            fileio.write_json(args.report, report.to_dict())
        return EXIT_OK
    raise AssertionError(args.command)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return _run(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DataError, StackNASError, ValueError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"data error: {exc.filename or ''}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
