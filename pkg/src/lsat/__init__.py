"""Light-signature analysis toolkit.

Core numerics for light-intensity time series: spacetime tensor algebra
with finite-difference curvature, light-phase propagation integrals,
signature tensor assembly and aggregation, isochronous segmentation with
similarity chords, spectrograms, and grid Bayesian inference with a ridge
baseline predictor. `lsat.cli` drives the batch pipeline; `lsat.service`
exposes the same operations over HTTP.
"""

__version__ = "0.1.0"

from . import (  # noqa: F401
    errors,
    inference,
    propagation,
    segments,
    signature,
    spectral,
    store,
    tensors,
)
