"""Kleinian groups from circle patterns and matrix families.

Limit set sampling, character variety slice pictures, and Newton continuation
of Farey word traces in the Riley slice.
"""

from .mobius import (
    INF,
    Infinity,
    MobiusMap,
    apply,
    classify,
    compose,
    fixed_points,
    inverse,
    isometric_circle,
    normalize_det,
    translation_length,
)
from .circles import Circle, Line, image_circle, reflect, reflections_to_mobius, tangency_classify

__version__ = "0.1.0"

__all__ = [
    "INF",
    "Infinity",
    "MobiusMap",
    "apply",
    "classify",
    "compose",
    "fixed_points",
    "inverse",
    "isometric_circle",
    "normalize_det",
    "translation_length",
    "Circle",
    "Line",
    "image_circle",
    "reflect",
    "reflections_to_mobius",
    "tangency_classify",
]
