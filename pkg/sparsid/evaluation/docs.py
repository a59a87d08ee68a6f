"""Evaluation: command documentation and examples.

Auto-loaded by the command loader into the --help epilog.
"""

NOTES = [
    "RMSE is reported on raw output units after denormalization",
    "predict feeds true lagged outputs; simulate feeds back its own predictions and seeds them with the first max(n_a, n_b) + 1 true outputs",
    "A diverged free run is scored as inf, excluded from 'best' and counted in summary_detail.csv (capped mean, n_diverged)",
    "sweep.csv: ratio,repeat,rmse,sparsity,seed │ summary.csv: ratio,best,mean,std",
    "An interrupted sweep rerun with the same --out-dir skips finished cells of the same config, mode and data; cells from any other run are retrained",
    "--jobs does not change results",
]

EXAMPLES = [
    {
        "title": "One-step prediction report",
        "command": "python main.py predict --model runs/pred/model.json --test-csv data/test.csv --out-dir runs/pred/eval",
    },
    {
        "title": "Free-run simulation report",
        "command": "python main.py simulate --model runs/sim/model.json --test-csv data/test.csv --out-dir runs/sim/eval",
    },
    {
        "title": "Data-ratio sweep with 20 restarts on 4 workers",
        "command": "python main.py sweep --preset prediction --train-csv data/train.csv --test-csv data/test.csv --repeats 20 --jobs 4",
    },
    {
        "title": "Logarithmic λ sweep",
        "command": "python main.py sweep --preset simulation --mode simulation --lambda-grid 1e-4:1e-1:7 --train-csv data/train.csv --test-csv data/test.csv",
    },
]
