"""`predict`, `simulate` and `sweep` commands."""

import logging
from pathlib import Path

import pandas as pd

from config import Config
from manifest import RunManifest
from utils import atomic_write_json, atomic_write_text
from sparsid import add_command
from sparsid.errors import ConfigError
from sparsid.narx_data import load_benchmark_csv
from sparsid.trainer import Method, load_model, resolve_config
from sparsid.trainer.config import PRESETS
from . import config
from .harness import predict_one_step, simulate_signal
from .models import EvalMode, EvalReport
from .sweep import lambda_sweep, log_grid, ratio_sweep

logger = logging.getLogger(__name__)


def _float_list(text: str, flag: str):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as e:
        raise ConfigError(f"{flag}: expected comma-separated numbers, got '{text}'") from e


def _write_report(report: EvalReport, out_dir: Path):
    frame = pd.DataFrame({"t": report.times, "y_true": report.truth, "y_hat": report.predictions})
    return [
        atomic_write_text(out_dir / config.PREDICTIONS_FILE, frame.to_csv(index=False)),
        atomic_write_json(out_dir / config.REPORT_FILE, report.summary()),
    ]


def _evaluate(args, mode: EvalMode) -> int:
    model = load_model(args.model)
    test = load_benchmark_csv(args.test_csv)
    out_dir = Path(args.out_dir)
    manifest = RunManifest(command=mode.value, config=model.config.snapshot(), seed=model.config.seed)
    manifest.add_input(Path(args.model))
    manifest.add_input(Path(args.test_csv))

    report = predict_one_step(model, test) if mode == EvalMode.PREDICTION else simulate_signal(model, test)
    manifest.add_outputs(_write_report(report, out_dir))
    manifest.finish(out_dir)
    if report.diverged:
        logger.warning(f"✗ {mode.value}: diverged at step {report.diverged_at}")
    else:
        logger.info(f"✓ {mode.value} rmse {report.rmse:.6g} (model at iteration {model.iteration})")
    return 0


def cmd_predict(args) -> int:
    return _evaluate(args, EvalMode.PREDICTION)


def cmd_simulate(args) -> int:
    return _evaluate(args, EvalMode.SIMULATION)


def cmd_sweep(args) -> int:
    overrides = {"lambda": args.lam, "method": args.method, "seed": args.seed, "t_max": args.t_max}
    cfg = resolve_config(args.preset, args.config, overrides)
    out_dir = Path(args.out_dir)
    train = load_benchmark_csv(args.train_csv)
    test = load_benchmark_csv(args.test_csv)
    manifest = RunManifest(command="sweep", config={**cfg.snapshot(), "mode": args.mode}, seed=cfg.seed)
    manifest.add_input(Path(args.train_csv))
    manifest.add_input(Path(args.test_csv))

    lambdas = None
    if args.lambda_grid:
        parts = args.lambda_grid.split(":")
        if len(parts) != 3:
            raise ConfigError(f"--lambda-grid expects low:high:count, got '{args.lambda_grid}'")
        lambdas = log_grid(float(parts[0]), float(parts[1]), int(parts[2]))
    elif args.lambdas:
        lambdas = _float_list(args.lambdas, "--lambdas")

    outputs = []
    if args.ratios or lambdas is None:
        ratios = _float_list(args.ratios, "--ratios") if args.ratios else config.DEFAULT_RATIOS
        result = ratio_sweep(cfg, train, test, ratios, args.repeats, cfg.seed, args.mode, args.jobs, out_dir)
        outputs += result.write(out_dir)
        for row in result.summary.itertuples(index=False):
            logger.info(f"  ratio {row.ratio:>5.2f} │ best {row.best:.4g} │ mean {row.mean:.4g} │ std {row.std:.4g}")
    if lambdas is not None:
        table = lambda_sweep(cfg, train, test, lambdas, cfg.seed, args.mode, args.jobs)
        outputs.append(atomic_write_text(out_dir / config.LAMBDA_SWEEP_FILE, table.to_csv(index=False)))

    manifest.add_outputs(outputs)
    manifest.finish(out_dir)
    logger.info(f"✓ Sweep outputs in {out_dir}")
    return 0


def _add_eval_args(parser, default_dir: str):
    parser.add_argument("--model", required=True, help="model.json or a checkpoint")
    parser.add_argument("--test-csv", required=True)
    parser.add_argument("--out-dir", default=str(Path(Config.OUTPUT_DIR) / default_dir))


def register(subparsers, docs=None):
    predict = add_command(subparsers, "predict", "One-step-ahead prediction on a test signal", docs)
    _add_eval_args(predict, "predict")
    predict.set_defaults(handler=cmd_predict)

    simulate = add_command(subparsers, "simulate", "Free-run simulation on a test signal", docs)
    _add_eval_args(simulate, "simulate")
    simulate.set_defaults(handler=cmd_simulate)

    sweep = add_command(subparsers, "sweep", "Data-ratio and λ sweeps with repeated restarts", docs)
    sweep.add_argument("--train-csv", required=True)
    sweep.add_argument("--test-csv", required=True)
    sweep.add_argument("--config", help="Flat JSON file of config keys")
    sweep.add_argument("--preset", choices=sorted(PRESETS))
    sweep.add_argument("--mode", choices=[m.value for m in EvalMode], default=EvalMode.PREDICTION.value)
    sweep.add_argument("--ratios", help="Comma-separated ratios in (0, 1] (default 0.05,0.1,0.2,...,1.0)")
    sweep.add_argument("--repeats", type=int, default=config.DEFAULT_REPEATS)
    sweep.add_argument("--lambdas", help="Comma-separated λ values for a λ sweep")
    sweep.add_argument("--lambda-grid", help="Logarithmic λ grid low:high:count")
    sweep.add_argument("--lambda", dest="lam", type=float, help="λ for the ratio sweep")
    sweep.add_argument("--method", choices=[m.value for m in Method])
    sweep.add_argument("--seed", type=int)
    sweep.add_argument("--t-max", type=int)
    sweep.add_argument("--jobs", type=int, default=Config.JOBS, help="Parallel sweep cells")
    sweep.add_argument("--out-dir", default=str(Path(Config.OUTPUT_DIR) / "sweep"))
    sweep.set_defaults(handler=cmd_sweep)
    return ["predict", "simulate", "sweep"]
