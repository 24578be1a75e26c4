"""Quantum-vs-classical separation toolkit: nonlocality and contextuality
tests, random access codes, communication-complexity baselines, cloning
feasibility, and the relative entropy of entanglement."""

__version__ = "0.1.0"

from .qmath import Ket, DensityOp, tensor, partial_trace, partial_transpose
from .states import bloch, named_state, mub, SeparableAnsatz, ansatz_to_density

__all__ = [
    "Ket", "DensityOp", "tensor", "partial_trace", "partial_transpose",
    "bloch", "named_state", "mub", "SeparableAnsatz", "ansatz_to_density",
]
