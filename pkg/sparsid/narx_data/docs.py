"""Data simulation: command documentation and examples.

Auto-loaded by the command loader into the --help epilog.
"""

NOTES = [
    "Output CSV columns: t,u,y,x1,x2 (load it back with any --train-csv/--test-csv flag)",
    "Without --input-csv the input is a deterministic multisine, so zero-noise runs do not depend on --seed",
    "States are clamped to [0, --cap]; the default cap mimics tank overflow",
]

EXAMPLES = [
    {
        "title": "Benchmark-length noiseless data",
        "command": "python main.py simulate-data --out runs/tank.csv",
    },
    {
        "title": "Noisy measurements",
        "command": "python main.py simulate-data --noise-e 0.05 --seed 7 --steps 2048 --out runs/tank_noisy.csv",
    },
]
