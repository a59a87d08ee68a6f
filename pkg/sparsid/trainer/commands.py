"""`train` command."""

import logging
from pathlib import Path

from config import Config
from manifest import RunManifest
from sparsid import add_command
from sparsid.errors import DataError
from sparsid.narx_data import build_regressors, load_benchmark_csv
from . import config
from .engine import outer_train
from .models import Method
from .presets import resolve_config
from .store import latest_checkpoint, load_model, save_model, write_history, write_hyper_log

logger = logging.getLogger(__name__)


def _resume_path(value: str) -> Path:
    """A checkpoint file, or the newest checkpoint of a run directory."""
    path = Path(value)
    if not path.is_dir():
        return path
    found = latest_checkpoint(path / "checkpoints") or latest_checkpoint(path)
    if found is None:
        raise DataError(f"{path}: no checkpoints found")
    return found


def cmd_train(args) -> int:
    resume_path = _resume_path(args.resume) if args.resume else None
    resume = load_model(resume_path) if resume_path else None
    overrides = {
        "lambda": args.lam,
        "method": args.method,
        "ratio": args.ratio,
        "seed": args.seed,
        "t_max": args.t_max,
        "patience": args.patience,
        "checkpoint_every": args.checkpoint_every,
    }
    cfg = resolve_config(
        args.preset, args.config, overrides, base=resume.config.snapshot() if resume else None,
    )
    out_dir = Path(args.out_dir)
    manifest = RunManifest(command="train", config=cfg.snapshot(), seed=cfg.seed)

    train_signal = load_benchmark_csv(args.train_csv)
    manifest.add_input(Path(args.train_csv))
    train = build_regressors(train_signal, cfg.n_a, cfg.n_b)
    val = None
    if args.val_csv:
        val = build_regressors(load_benchmark_csv(args.val_csv), cfg.n_a, cfg.n_b)
        manifest.add_input(Path(args.val_csv))
    if resume_path:
        manifest.add_input(resume_path)

    logger.info(
        f"Training {cfg.method.value} │ widths {cfg.layer_widths} │ lags {cfg.n_a}/{cfg.n_b} │ "
        f"{len(train)} rows (ratio {cfg.ratio})"
    )
    model = outer_train(cfg, train, val, resume=resume, checkpoint_dir=out_dir / "checkpoints")

    outputs = [
        save_model(out_dir / config.MODEL_FILE, model),
        write_history(out_dir / config.HISTORY_FILE, model.history),
        write_hyper_log(out_dir / config.HYPER_LOG_FILE, model.history),
    ]
    manifest.add_outputs(outputs)
    manifest.finish(out_dir)

    final = model.history[-1] if model.history else None
    if final is not None:
        logger.info(
            f"✓ Trained {final.iteration} iterations │ rmse {final.train_rmse:.4g} │ "
            f"active {final.sparsity:.1%} │ neurons {final.neuron_sparsity:.1%}"
        )
    else:
        logger.info("✓ Initialized model (t_max = 0)")
    return 0


def register(subparsers, docs=None):
    parser = add_command(subparsers, "train", "Train a sparse NARX network on a benchmark CSV", docs)
    parser.add_argument("--train-csv", required=True, help="Training signal (u,y columns)")
    parser.add_argument("--val-csv", help="Validation signal for early stopping and history")
    parser.add_argument("--config", help="Flat JSON file of config keys")
    parser.add_argument("--preset", choices=sorted(config.PRESETS), help="Experiment architecture")
    parser.add_argument("--resume", help="Checkpoint, model file or run directory (newest checkpoint) to continue from")
    parser.add_argument("--lambda", dest="lam", type=float, help="Regularization strength λ")
    parser.add_argument("--method", choices=[m.value for m in Method])
    parser.add_argument("--ratio", type=float, help="Fraction of training rows to use, in (0, 1]")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--t-max", type=int, help="Outer iterations")
    parser.add_argument("--patience", type=int, help="Stop after this many iterations without improvement")
    parser.add_argument("--checkpoint-every", type=int, help="Write a checkpoint every k iterations")
    parser.add_argument("--out-dir", default=str(Path(Config.OUTPUT_DIR) / "train"))
    parser.set_defaults(handler=cmd_train)
    return ["train"]
