"""Network core configuration."""

import os

# exact_small curvature materializes (n_in*n_out)^2 entries per layer
EXACT_MAX_ENTRIES = int(os.getenv("SPARSID_EXACT_MAX_ENTRIES", "4096"))
DEFAULT_ACTIVATION = os.getenv("SPARSID_ACTIVATION", "tanh")
