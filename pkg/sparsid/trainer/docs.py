"""Training: command documentation and examples.

Auto-loaded by the command loader into the --help epilog.
"""

NOTES = [
    "Configuration precedence: flags > --config file > --preset > built-in defaults",
    "--config takes a flat JSON object whose keys are TrainConfig fields ('lambda', 'layer_widths', 'n_a', ...)",
    "Methods: bayes (default, reweighted ℓ1 with Laplace updates), group_lasso, l1, none (no regularization, no pruning)",
    "Outputs in --out-dir: model.json, history.csv, hyper_log.csv, manifest.json and checkpoints/ when --checkpoint-every is set",
    "Pruning is irreversible and starts at prune_start_iter; a layer that would lose every weight aborts the run",
    "--resume accepts a checkpoint, a model.json or a run directory (its newest checkpoint is used)",
]

EXAMPLES = [
    {
        "title": "One-step prediction preset",
        "command": "python main.py train --preset prediction --train-csv data/train.csv --out-dir runs/pred",
    },
    {
        "title": "Simulation preset with validation data and early stopping",
        "command": "python main.py train --preset simulation --train-csv data/train.csv --val-csv data/val.csv --patience 5 --out-dir runs/sim",
    },
    {
        "title": "Config file plus overrides",
        "command": "python main.py train --config cfg.json --lambda 0.01 --ratio 0.7 --seed 3 --train-csv data/train.csv",
    },
    {
        "title": "Resume from a checkpoint and extend the run",
        "command": "python main.py train --resume runs/pred/checkpoints/checkpoint_0010.json --t-max 40 --train-csv data/train.csv --out-dir runs/pred",
    },
]
