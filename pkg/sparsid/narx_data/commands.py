"""`simulate-data` command."""

import logging
from pathlib import Path

from config import Config
from manifest import RunManifest
from sparsid import add_command
from . import config
from .io import load_benchmark_csv, write_signal_csv
from .tank import default_tank_params, multisine, simulate_tank

logger = logging.getLogger(__name__)


def cmd_simulate_data(args) -> int:
    params = default_tank_params(
        k1=args.k1, k2=args.k2, k3=args.k3, k4=args.k4,
        noise_std_w1=args.noise_w1, noise_std_w2=args.noise_w2, noise_std_e=args.noise_e,
        x1_0=args.x1_0, x2_0=args.x2_0, overflow_cap=args.cap,
    )
    out = Path(args.out)
    manifest = RunManifest(
        command="simulate-data",
        config={**params.model_dump(), "dt": args.dt, "steps": args.steps, "input_csv": args.input_csv},
        seed=args.seed,
    )
    if args.input_csv:
        u = load_benchmark_csv(args.input_csv).u
        manifest.add_input(Path(args.input_csv))
    else:
        u = multisine(args.steps, args.dt)

    signal = simulate_tank(params, u, args.dt, seed=args.seed, name=out.stem)
    manifest.add_outputs([write_signal_csv(signal, out)])
    manifest.finish(out.parent)
    return 0


def register(subparsers, docs=None):
    parser = add_command(subparsers, "simulate-data", "Simulate the cascaded two-tank system to CSV", docs)
    for name, default in (("k1", config.TANK_K1), ("k2", config.TANK_K2), ("k3", config.TANK_K3), ("k4", config.TANK_K4)):
        parser.add_argument(f"--{name}", type=float, default=default)
    parser.add_argument("--dt", type=float, default=config.TANK_DT, help="Sample period in seconds")
    parser.add_argument("--steps", type=int, default=config.BENCHMARK_LENGTH)
    parser.add_argument("--noise-w1", type=float, default=0.0, help="Process noise std on x1")
    parser.add_argument("--noise-w2", type=float, default=0.0, help="Process noise std on x2")
    parser.add_argument("--noise-e", type=float, default=0.0, help="Measurement noise std on y")
    parser.add_argument("--x1-0", type=float, default=0.0, help="Initial upper-tank level")
    parser.add_argument("--x2-0", type=float, default=0.0, help="Initial lower-tank level")
    parser.add_argument("--cap", type=float, default=config.TANK_CAP, help="Overflow level")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--input-csv", help="Take u from this CSV instead of the multisine")
    parser.add_argument("--out", default=str(Path(Config.OUTPUT_DIR) / "tank.csv"))
    parser.set_defaults(handler=cmd_simulate_data)
    return ["simulate-data"]
