"""LDPC error-floor characterization toolkit.

Re-exports the native module: code handling (TannerCode, alist parsing),
decoders (decode, DecoderConfig), the impulse search (run_search), boundary
ranking (rank_catalog, probe_boundary) and the Monte Carlo / importance
sampling estimators (mc_estimate, is_estimate).
"""

from ._errorfloor import *  # noqa: F401,F403

__version__ = "0.1.0"
