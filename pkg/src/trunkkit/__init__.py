"""Trunk and width of knots in Morse position, satellites, and sphere arrangements."""

from .morse import (
    MorseDiagram,
    MorseEvent,
    MorsePresentation,
    connected_sum,
    level_profile,
    parse_morse,
    serialize,
    trunk,
    width,
)
from .pattern import CylinderTangle, cable, parse_tangle, satellite, winding_number, presentation_wrapping

__version__ = "0.1.0"
