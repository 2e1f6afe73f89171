"""Primitives for surfaces of constant curvature kappa != 0.

The surface is the set {kappa * (x^2 + y^2 + sigma * z^2) = 1} embedded
in R^3 (sphere, kappa > 0) or in Minkowski space R^{2,1} (upper
hyperboloid sheet, kappa < 0), where sigma is the sign of kappa.  All
vector operations use the sigma-signed inner and cross products, so the
same formulas serve both geometries.

Vectors are plain numpy arrays of shape (3,); points carry their
curvature so that downstream code cannot mix geometries by accident.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidCurvature, NumericalBlowup

# Surface membership is checked relative to 1; tangency is absolute.
# Both leave headroom above machine epsilon for accumulated roundoff.
SURFACE_TOL = 1e-12
TANGENCY_TOL = 1e-14


def signum(kappa: float) -> int:
    """Sign of the curvature.

    Parameters
    ----------
    kappa : float
        Curvature of the surface; must be nonzero and finite.

    Returns
    -------
    int
        +1 for positive curvature, -1 for negative curvature.

    Raises
    ------
    InvalidCurvature
        If ``kappa`` is zero or not finite; the problem is undefined
        at zero curvature.
    """
    if not math.isfinite(kappa) or kappa == 0.0:
        raise InvalidCurvature(f"curvature must be finite and nonzero, got {kappa!r}")
    return 1 if kappa > 0 else -1


@dataclass(frozen=True)
class Curvature:
    """Curvature constant kappa with its derived sign sigma."""

    kappa: float
    sigma: int = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "sigma", signum(self.kappa))


def _vec(a) -> np.ndarray:
    """Coerce to a float vector of shape (3,) with finite entries."""
    v = np.asarray(a, dtype=float)
    if v.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"vector has non-finite entries: {v}")
    return v


def inner(a, b, c: Curvature) -> float:
    """Sigma-signed inner product a_x b_x + a_y b_y + sigma a_z b_z."""
    a = _vec(a)
    b = _vec(b)
    return float(a[0] * b[0] + a[1] * b[1] + c.sigma * a[2] * b[2])


def cross(a, b, c: Curvature) -> np.ndarray:
    """Sigma-signed cross product; the z component carries the sign.

    Returns (a_y b_z - a_z b_y, a_z b_x - a_x b_z, sigma (a_x b_y - a_y b_x)).
    """
    a = _vec(a)
    b = _vec(b)
    return np.array(
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            c.sigma * (a[0] * b[1] - a[1] * b[0]),
        ]
    )


def on_surface(p, c: Curvature, tol: float = SURFACE_TOL) -> bool:
    """Whether kappa * inner(p, p) equals 1 within ``tol``."""
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    return abs(c.kappa * inner(p, p, c) - 1.0) <= tol


def renormalize(p, c: Curvature) -> np.ndarray:
    """Rescale ``p`` onto the surface.

    Scales by 1/sqrt(kappa * inner(p, p)), which restores
    kappa * inner(q, q) = 1 for both curvature signs.

    Raises
    ------
    NumericalBlowup
        If kappa * inner(p, p) <= 0, i.e. the point left the cone on
        which the rescaling is defined.
    """
    p = _vec(p)
    s = c.kappa * inner(p, p, c)
    if s <= 0.0:
        raise NumericalBlowup(f"cannot renormalize: kappa*<p,p> = {s} <= 0")
    return p / math.sqrt(s)


@dataclass(frozen=True, eq=False)
class SurfacePoint:
    """A point constrained to the curvature-kappa surface.

    Construction validates surface membership to ``SURFACE_TOL``
    (relative) and, for negative curvature, that the point lies on the
    upper hyperboloid sheet (z > 0).
    """

    coords: np.ndarray
    curvature: Curvature

    def __post_init__(self) -> None:
        object.__setattr__(self, "coords", _vec(self.coords))
        if not on_surface(self.coords, self.curvature, SURFACE_TOL):
            s = self.curvature.kappa * inner(self.coords, self.coords, self.curvature)
            raise ValueError(f"point is off the surface: kappa*<q,q> = {s!r}")
        if self.curvature.kappa < 0 and self.coords[2] <= 0:
            raise ValueError("negative curvature requires the upper sheet (z > 0)")

    @property
    def x(self) -> float:
        return float(self.coords[0])

    @property
    def y(self) -> float:
        return float(self.coords[1])

    @property
    def z(self) -> float:
        return float(self.coords[2])


def tangent_project(q: SurfacePoint, v) -> np.ndarray:
    """Project an ambient vector onto the tangent space at ``q``.

    Returns w = v - kappa * inner(q, v) * q, which satisfies
    kappa * inner(q, w) = 0 to ``TANGENCY_TOL``.  Idempotent.
    """
    v = _vec(v)
    c = q.curvature
    return v - c.kappa * inner(q.coords, v, c) * q.coords


def pair_cosine(qi: SurfacePoint, qj: SurfacePoint) -> float:
    """kappa * inner(q_i, q_j) for two points of the same curvature.

    For positive curvature this is the cosine of the central angle;
    for negative curvature it is the hyperbolic cosine of the distance
    (> 1 for distinct points).
    """
    if qi.curvature.kappa != qj.curvature.kappa:
        raise ValueError("points live on surfaces of different curvature")
    c = qi.curvature
    return c.kappa * inner(qi.coords, qj.coords, c)
