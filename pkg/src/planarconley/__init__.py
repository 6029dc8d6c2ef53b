"""Numerical classification of isolated invariant continua of planar flows.

Pipeline: parse a 2D vector field, integrate orbits adaptively, locate and
classify equilibria, estimate limit sets and limit cycles, build box-map
outer approximations of maximal invariant sets, and run the classifiers
that decide between global attractor, attractor, repeller and saddle-like
verdicts from machine-checkable evidence.
"""

from . import classify, equilibria, expr, field, integrate, limitsets, topology
from .errors import (
    DegenerateEdgeError,
    NonFiniteError,
    NotDifferentiableError,
    ParseError,
    PlanarConleyError,
    PreconditionNotRepellerError,
    TangentialCrossingError,
    UnableToClassifyKStarError,
    UnknownIdentifierError,
    UnknownSystemError,
)
from .field import VectorField, builtin, builtin_names, from_strings
from .integrate import IntegrationParams, Trajectory, flow

__all__ = [
    "expr",
    "field",
    "integrate",
    "equilibria",
    "limitsets",
    "topology",
    "classify",
    "VectorField",
    "builtin",
    "builtin_names",
    "from_strings",
    "IntegrationParams",
    "Trajectory",
    "flow",
    "PlanarConleyError",
    "ParseError",
    "UnknownIdentifierError",
    "NonFiniteError",
    "NotDifferentiableError",
    "UnknownSystemError",
    "TangentialCrossingError",
    "DegenerateEdgeError",
    "PreconditionNotRepellerError",
    "UnableToClassifyKStarError",
]

__version__ = "0.1.0"
