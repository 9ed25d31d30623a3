"""Exact workbench for the quaternionic Dolbeault complex on flat H^n and the
lattice-level vanishing bookkeeping that goes with it."""

__version__ = "0.1.0"
