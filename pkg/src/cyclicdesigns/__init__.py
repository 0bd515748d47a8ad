"""Cyclic k-cycle systems of complete graphs built from Skolem-type sequences."""

from .constructors import construct
from .core import Cycle, CycleSystem, DifferenceSystem, expand, validate_cycle_system
from .skolem import SkolemKind, SkolemSequence, construct_sequence

__all__ = [
    "Cycle",
    "CycleSystem",
    "DifferenceSystem",
    "SkolemKind",
    "SkolemSequence",
    "construct",
    "construct_sequence",
    "expand",
    "validate_cycle_system",
]
