"""Certified lower bounds on entanglement measures from witness expectation values."""

from .catalog import Witness, get_witness
from .operators import DensityMatrix, HermitianOperator, HilbertShape
from .results import BoundResult

__version__ = "0.1.0"

__all__ = ["BoundResult", "DensityMatrix", "HermitianOperator", "HilbertShape", "Witness",
           "get_witness", "__version__"]
