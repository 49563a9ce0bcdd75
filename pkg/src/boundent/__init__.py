"""Three-qubit bound entangled states: purification networks, witnesses and PPT checks."""

from .errors import BoundentError
from .states import ABLSParams, DCTParams, EQ24_DCT, OPTIMAL_ABLS

__all__ = ["ABLSParams", "BoundentError", "DCTParams", "EQ24_DCT", "OPTIMAL_ABLS"]
__version__ = "0.1.0"
