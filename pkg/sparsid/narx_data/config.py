"""NARX data configuration."""

import os

DEFAULT_DT = float(os.getenv("SPARSID_DEFAULT_DT", "1.0"))
BENCHMARK_LENGTH = int(os.getenv("SPARSID_BENCHMARK_LENGTH", "1024"))

# Cascaded-tank defaults; sample period as in the public benchmark (4 s).
TANK_DT = float(os.getenv("SPARSID_TANK_DT", "4.0"))
TANK_K1 = 0.06
TANK_K2 = 0.06
TANK_K3 = 0.06
TANK_K4 = 0.03
TANK_CAP = 10.0

# Multisine excitation
EXCITATION_MEAN = 5.0
EXCITATION_AMPLITUDE = 2.5
EXCITATION_FREQS = 20
EXCITATION_BAND = 0.25  # fraction of Nyquist
