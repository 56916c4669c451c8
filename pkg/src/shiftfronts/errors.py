"""Shared exception types."""

from __future__ import annotations


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class UnsupportedRegime(ValueError):
    """The requested quantity is undefined in this parameter regime
    (e.g. a minimal wave speed for a non-positive growth level)."""


class SimulationAbort(RuntimeError):
    """The time stepper detected a state that invalidates the run
    (mass leaking through the margins, significant negativity, ...)."""
