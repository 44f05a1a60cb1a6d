"""
Heralded atom-atom entanglement through one photon passed between two cavities.

Cavity A emits a photon entangled with its atom, cavity B swaps the photon's
polarization onto its own atom, and a detector click heralds the two-atom state.
"""

__version__ = "0.3.0"
