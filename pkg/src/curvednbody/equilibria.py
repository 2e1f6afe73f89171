"""Fixed points and relative equilibria on the equator (kappa > 0).

Three bodies at angles theta_i on the great circle z = 0 of the sphere
of curvature kappa form a fixed point (zero velocities, zero
accelerations) exactly when their masses solve the homogeneous system
with coefficients

    q_ij    = (x_j - a_ij x_i) / (1 - a_ij^2)^{3/2},
    qbar_ij = (y_j - a_ij y_i) / (1 - a_ij^2)^{3/2},
    a_ij    = kappa (x_i x_j + y_i y_j),

whose 3x3 x-component matrix A always has det A = 0, leaving a
one-dimensional mass ray.  The ray has positive entries precisely for
acute triangles.  Any equal-speed tangential velocity field turns a
fixed point into a relative equilibrium.  The isosceles family (two
masses M at (+-x, y, 0), mass m at (0, -kappa^{-1/2}, 0)) is a fixed
point iff M = 4 kappa m y^2, which is solvable iff M < 4 m.

Such configurations exist only for positive curvature; the hyperbolic
sheet admits no fixed points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .dynamics import SystemState, acceleration, make_state
from .errors import (
    AntipodalSingularity,
    CollisionSingularity,
    InfeasibleTriangle,
    InvalidCurvature,
    ResidualTooLarge,
)
from .geometry import Curvature

TWO_PI = 2.0 * math.pi

# Strict-acuteness margin on the cyclic gaps, and residual tolerances.
ACUTE_MARGIN = 1e-9
THIRD_EQUATION_TOL = 1e-10
FULL_SYSTEM_TOL = 1e-10
ACCEL_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class EquatorTriangle:
    """Three distinct angles on the equator forming an acute triangle.

    Angles are reduced mod 2 pi and sorted.  Acuteness means every
    cyclic gap between consecutive angles is below pi (inscribed-angle
    form), enforced with margin ``ACUTE_MARGIN``; this also excludes
    antipodal pairs.
    """

    curvature: Curvature
    angles: np.ndarray

    def __post_init__(self) -> None:
        if self.curvature.kappa <= 0:
            raise InvalidCurvature("equatorial fixed points require positive curvature")
        a = np.asarray(self.angles, dtype=float)
        if a.shape != (3,):
            raise ValueError(f"need exactly three angles, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ValueError("angles must be finite")
        a = np.sort(np.mod(a, TWO_PI))
        object.__setattr__(self, "angles", a)
        gaps = np.diff(a, append=a[0] + TWO_PI)
        if np.any(gaps <= 1e-12):
            raise ValueError("angles collide (separation below tolerance)")
        if np.any(gaps >= math.pi - ACUTE_MARGIN):
            raise InfeasibleTriangle(
                f"triangle is not acute: largest gap {gaps.max():.6f} >= pi - {ACUTE_MARGIN}"
            )

    @property
    def gaps(self) -> np.ndarray:
        a = self.angles
        return np.diff(a, append=a[0] + TWO_PI)

    def positions(self) -> np.ndarray:
        """(3, 3) array of equatorial positions kappa^{-1/2} (cos, sin, 0)."""
        rad = 1.0 / math.sqrt(self.curvature.kappa)
        q = np.zeros((3, 3))
        q[:, 0] = rad * np.cos(self.angles)
        q[:, 1] = rad * np.sin(self.angles)
        return q


@dataclass(frozen=True, eq=False)
class CoefficientSet:
    """Pairwise a_ij with the x and y fixed-point coefficients q, qbar."""

    a: np.ndarray
    q: np.ndarray
    qbar: np.ndarray


@dataclass(frozen=True, eq=False)
class FixedPointSolution:
    """Solved fixed-point masses (m_3 = 1) with verification residuals."""

    triangle: EquatorTriangle
    masses: np.ndarray
    detA_residual: float
    accel_residual: float


@dataclass(frozen=True, eq=False)
class IsoscelesResult:
    """Feasibility record of the isosceles family for mass ratio M/m."""

    M: float
    m: float
    kappa: float
    feasible: bool
    y: Optional[float] = None
    x: Optional[float] = None
    triangle: Optional[EquatorTriangle] = None
    witness: Optional[str] = None


def equator_coefficients(t: EquatorTriangle) -> CoefficientSet:
    """The a_ij, q_ij, qbar_ij coefficients for all ordered pairs.

    a_ij is the cosine of the central angle between bodies i and j.

    Raises
    ------
    AntipodalSingularity
        If some |a_ij| reaches 1 within 1e-12 on the antipodal side.
    CollisionSingularity
        If it does so on the coincident side.
    """
    p = t.positions()
    k = t.curvature.kappa
    x = p[:, 0]
    y = p[:, 1]
    a = k * (np.outer(x, x) + np.outer(y, y))
    off = ~np.eye(3, dtype=bool)
    if np.any(a[off] >= 1.0 - 1e-12):
        raise CollisionSingularity("a pair of bodies coincides on the equator")
    if np.any(a[off] <= -1.0 + 1e-12):
        raise AntipodalSingularity("a pair of bodies is antipodal on the equator")
    den = np.ones_like(a)
    den[off] = (1.0 - a[off] ** 2) ** 1.5
    q = (x[None, :] - a * x[:, None]) / den
    qbar = (y[None, :] - a * y[:, None]) / den
    np.fill_diagonal(q, 0.0)
    np.fill_diagonal(qbar, 0.0)
    return CoefficientSet(a=a, q=q, qbar=qbar)


def det_A(t: EquatorTriangle) -> float:
    """q_12 q_23 q_31 + q_13 q_21 q_32; identically zero for every triangle."""
    q = equator_coefficients(t).q
    return float(q[0, 1] * q[1, 2] * q[2, 0] + q[0, 2] * q[1, 0] * q[2, 1])


def _pivot_rows(t: EquatorTriangle, coeffs: CoefficientSet) -> np.ndarray:
    """One scalar equation per body, picked for conditioning.

    The x and y fixed-point equations of body i are both multiples of
    the same tangential balance (the force at body i is tangent to the
    equator), scaled by sin(theta_i) and cos(theta_i) respectively, so
    either may be used; the larger projection is better conditioned.
    """
    rows = np.empty((3, 3))
    for i, th in enumerate(t.angles):
        if abs(math.sin(th)) >= abs(math.cos(th)):
            rows[i] = coeffs.q[i]
        else:
            rows[i] = coeffs.qbar[i]
    return rows


def solve_fixed_point_masses(
    t: EquatorTriangle,
    residual_tol: float = THIRD_EQUATION_TOL,
    accel_tol: float = ACCEL_TOL,
) -> FixedPointSolution:
    """Masses (normalized to m_3 = 1) making the triangle a fixed point.

    Solves the first two per-body balance equations for m_2 and m_1,
    then verifies the third equation, the full six-equation system
    (x and y components for every body), and the assembled zero-velocity
    accelerations.

    Raises
    ------
    InfeasibleTriangle
        If a solved mass is not positive.
    ResidualTooLarge
        If any verification residual exceeds its tolerance.
    """
    coeffs = equator_coefficients(t)
    rows = _pivot_rows(t, coeffs)
    m2 = -rows[0, 2] / rows[0, 1]
    m1 = -rows[1, 2] / rows[1, 0]
    if not (m1 > 0 and m2 > 0):
        raise InfeasibleTriangle(f"solved masses are not positive: ({m1}, {m2}, 1)")
    m = np.array([m1, m2, 1.0])
    third = abs(rows[2, 0] * m1 + rows[2, 1] * m2)
    third_scale = abs(rows[2, 0] * m1) + abs(rows[2, 1] * m2)
    if third > residual_tol * third_scale:
        raise ResidualTooLarge(
            f"third balance equation residual {third:.3e} exceeds tolerance"
        )
    # The x and y equations of one body scale with sin/cos of its angle;
    # the degenerate one carries only rounding noise, so both residuals
    # are normalized by the larger of the two row scales.
    tx = coeffs.q * m[None, :]
    ty = coeffs.qbar * m[None, :]
    scale = np.maximum(np.abs(tx).sum(axis=1), np.abs(ty).sum(axis=1))
    worst = float(
        np.max(np.maximum(np.abs(tx.sum(axis=1)), np.abs(ty.sum(axis=1))) / scale)
    )
    if worst > residual_tol:
        raise ResidualTooLarge(
            f"full balance system relative residual {worst:.3e} exceeds tolerance"
        )
    state = make_state(t.curvature, m, t.positions(), np.zeros((3, 3)))
    accel_residual = float(np.max(np.linalg.norm(acceleration(state), axis=1)))
    if accel_residual >= accel_tol:
        raise ResidualTooLarge(
            f"acceleration residual {accel_residual:.3e} exceeds {accel_tol:.1e}"
        )
    det_scale = abs(
        float(coeffs.q[0, 1] * coeffs.q[1, 2] * coeffs.q[2, 0])
    )
    det_residual = abs(det_A(t)) / det_scale if det_scale > 0 else abs(det_A(t))
    return FixedPointSolution(
        triangle=t,
        masses=m,
        detA_residual=det_residual,
        accel_residual=accel_residual,
    )


def make_relative_equilibrium(f: FixedPointSolution, speed: float) -> SystemState:
    """Rigidly rotating state from a fixed point: equal tangential speeds.

    Every body gets velocity speed * (-sin theta_i, cos theta_i, 0);
    speed 0 reproduces the fixed point itself.
    """
    t = f.triangle
    v = np.zeros((3, 3))
    v[:, 0] = -speed * np.sin(t.angles)
    v[:, 1] = speed * np.cos(t.angles)
    return make_state(t.curvature, f.masses, t.positions(), v)


def isosceles_classify(M: float, m: float, kappa: float) -> IsoscelesResult:
    """Feasibility of the isosceles fixed point for masses (M, M, m).

    Feasible iff M < 4 m, in which case the two M bodies sit at
    (+-x, y, 0) with y = sqrt(M / (4 kappa m)) and x = sqrt(1/kappa - y^2)
    (the base half-width), and the assembled triangle is returned.
    M = m recovers the equilateral triangle with y = kappa^{-1/2} / 2.
    """
    if not (M > 0 and math.isfinite(M) and m > 0 and math.isfinite(m)):
        raise ValueError(f"masses must be positive and finite, got M={M!r}, m={m!r}")
    if not (kappa > 0 and math.isfinite(kappa)):
        raise InvalidCurvature("isosceles fixed points require positive curvature")
    if M >= 4.0 * m:
        return IsoscelesResult(
            M=M, m=m, kappa=kappa, feasible=False, witness=f"M = {M} >= 4*m = {4.0 * m}"
        )
    y = math.sqrt(M / (4.0 * kappa * m))
    x = math.sqrt(1.0 / kappa - y * y)
    theta = math.atan2(y, x)
    tri = EquatorTriangle(
        Curvature(kappa), np.array([theta, math.pi - theta, 1.5 * math.pi])
    )
    return IsoscelesResult(M=M, m=m, kappa=kappa, feasible=True, y=y, x=x, triangle=tri)


def isosceles_accelerations(
    x: float, y: float, M: float, m: float, kappa: float
) -> tuple[float, float]:
    """Closed-form accelerations of the isosceles body at (+x, +y, 0).

    For masses M at (+-x, y, 0) and m at (0, -kappa^{-1/2}, 0):

        x_ddot = -(M - 4 kappa m y^2) / (4 kappa^{1/2} x^2 y),
        y_ddot = +(M - 4 kappa m y^2) / (4 kappa^{1/2} x y^2).

    Both vanish exactly at the fixed-point condition M = 4 kappa m y^2.
    The mirror body at (-x, y, 0) has the x component negated.
    """
    if not (kappa > 0 and math.isfinite(kappa)):
        raise InvalidCurvature("isosceles configurations require positive curvature")
    rad = 1.0 / math.sqrt(kappa)
    if not (0 < x < rad and 0 < y < rad):
        raise ValueError(f"require 0 < x, y < {rad}, got x={x!r}, y={y!r}")
    if abs(kappa * (x * x + y * y) - 1.0) > 1e-9:
        raise ValueError("point (x, y, 0) is not on the equator")
    s = M - 4.0 * kappa * m * y * y
    sk = math.sqrt(kappa)
    return -s / (4.0 * sk * x * x * y), s / (4.0 * sk * x * y * y)
