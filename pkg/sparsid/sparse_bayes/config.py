"""Sparse Bayesian update configuration."""

import os

# active prior variances below this are pruned, never inverted
UPSILON_FLOOR = float(os.getenv("SPARSID_UPSILON_FLOOR", "1e-10"))
# groups with smaller ω keep their previous υ for the iteration
OMEGA_FLOOR = float(os.getenv("SPARSID_OMEGA_FLOOR", "1e-12"))
