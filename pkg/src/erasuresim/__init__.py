"""Monte Carlo study of surface-code memories under erasure noise with
imperfect erasure checks: Pauli-frame simulator, flag-calibrated
weighted union-find decoder, and threshold/effective-distance fits."""

__version__ = "0.1.0"
