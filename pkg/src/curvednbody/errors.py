"""Typed exceptions for curved n-body computations.

The hierarchy separates configuration problems (bad curvature, bad
polygon, infeasible triangle) from runtime singularities encountered
while evaluating forces or integrating (collision, antipodal pair,
numerical blowup).  Singularities carry a short machine-readable
``reason`` string so callers can report why a run halted.
"""

from __future__ import annotations


class CurvedNBodyError(Exception):
    """Base class for all errors raised by this package."""


class InvalidCurvature(CurvedNBodyError):
    """Curvature is zero, non-finite, or has the wrong sign for the operation."""


class InvalidPolygon(CurvedNBodyError):
    """Polygon configuration violates its geometric constraints."""


class SingularityError(CurvedNBodyError):
    """Base class for runtime singularities; ``reason`` tags the kind."""

    reason = "singular"


class CollisionSingularity(SingularityError):
    """Two bodies are at (or numerically at) the same point."""

    reason = "collision"


class AntipodalSingularity(SingularityError):
    """Two bodies are at (or numerically at) opposite points of the sphere."""

    reason = "antipodal"


class NumericalBlowup(SingularityError):
    """Coordinates left the representable regime or the surface's cone."""

    reason = "blowup"


class EquatorSingularity(SingularityError):
    """Reduced equations evaluated where their equatorial denominator vanishes."""

    reason = "equator"


class CriterionViolation(CurvedNBodyError):
    """Configuration does not satisfy the polygonal-orbit criterion."""


class SingularMatrix(CurvedNBodyError):
    """A linear solve failed because the coefficient matrix is singular."""


class InfeasibleTriangle(CurvedNBodyError):
    """No positive masses make the requested configuration a fixed point."""


class ResidualTooLarge(CurvedNBodyError):
    """A verification residual exceeded its tolerance."""


class CLIInputError(CurvedNBodyError):
    """Command-line or configuration-file input could not be parsed."""
