"""Exceptional Hermite polynomials, rational extensions of the harmonic
oscillator and their extended coherent states, with exact symbolic checks."""

from .partition_maya import MayaDiagram, Partition, maya_from_partition, partition_from_maya
from .symbolic import ExpPolyFn, LinearDiffOp, MultiPoly, RationalFn

__version__ = "0.1.0"

__all__ = [
    "MayaDiagram",
    "Partition",
    "maya_from_partition",
    "partition_from_maya",
    "MultiPoly",
    "RationalFn",
    "ExpPolyFn",
    "LinearDiffOp",
]
