"""Polygonal configurations and the criteria for homographic orbits.

A polygonal configuration places n bodies on the circle of radius r at
height z, with positions

    x_i = r cos(omega + alpha_i),  y_i = r sin(omega + alpha_i),
    z_i = hemisphere * sqrt(sigma/kappa - sigma r^2),

for fixed phase angles alpha_i.  Whether positive masses make such a
configuration a homographic orbit is a linear-algebra question about
the pairwise kernels

    mu_ji = 1 / (c_ji^{1/2} (2 - c_ji kappa r^2)^{3/2}),
    nu_ji = s_ji / (c_ji^{3/2} (2 - c_ji kappa r^2)^{3/2}),

with s_ji = sin(alpha_j - alpha_i) and c_ji = 1 - cos(alpha_j - alpha_i):
the mass-weighted row sums delta_i = sum_j m_j mu_ji must all agree and
the gamma_i = sum_j m_j nu_ji must all agree (hence vanish).  This
module builds the kernel matrices, evaluates the criterion, solves the
equal-delta linear system for masses, and runs the sign/compatibility
analysis that rules out non-equilateral triangles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .dynamics import SystemState, make_state
from .errors import (
    AntipodalSingularity,
    CollisionSingularity,
    EquatorSingularity,
    InvalidPolygon,
    SingularMatrix,
)
from .geometry import Curvature, SurfacePoint

TWO_PI = 2.0 * math.pi

# Angle separations below this count as a collision of phase angles.
ANGLE_SEP_TOL = 1e-12

# Default spread tolerance for the equal-delta / equal-gamma verdict.
CRITERION_TOL = 1e-9

# Default relative tolerance for the three triangle compatibility ratios.
RATIO_TOL = 1e-10

# Mass positivity and gamma-residual thresholds for solve_masses.
MASS_POSITIVITY_TOL = 1e-12
GAMMA_RESIDUAL_TOL = 1e-9


def _ring_z(kappa: float, r: float) -> float:
    """Height z >= 0 of the circle of radius r, from z^2 = sigma/kappa - sigma r^2."""
    if r <= 0 or not math.isfinite(r):
        raise InvalidPolygon(f"radius must be positive, got {r!r}")
    if kappa > 0:
        u = 1.0 - kappa * r * r
        if u < -1e-12:
            raise InvalidPolygon(f"kappa r^2 = {kappa * r * r} exceeds 1; no such circle")
        if u <= 1e-12:
            return 0.0
        return math.sqrt(u / kappa)
    return math.sqrt(r * r + 1.0 / abs(kappa))


def ring_positions(
    kappa: float, r: float, omega: float, alphas: Sequence[float], hemisphere: int = 1
) -> np.ndarray:
    """Raw (n, 3) positions of bodies on the circle, for any n >= 1."""
    if hemisphere not in (1, -1):
        raise InvalidPolygon(f"hemisphere must be +1 or -1, got {hemisphere!r}")
    if kappa < 0 and hemisphere != 1:
        raise InvalidPolygon("negative curvature has a single (upper) sheet")
    a = np.asarray(alphas, dtype=float)
    z = _ring_z(kappa, r)
    phases = omega + a
    q = np.empty((len(a), 3))
    q[:, 0] = r * np.cos(phases)
    q[:, 1] = r * np.sin(phases)
    q[:, 2] = hemisphere * z
    return q


@dataclass(frozen=True, eq=False)
class PolygonConfig:
    """A polygon of n >= 3 phase angles on the circle of radius r.

    Angles are reduced mod 2 pi and sorted at construction; duplicate
    angles (collisions) and, on the equator, antipodal pairs are
    rejected.
    """

    curvature: Curvature
    r: float
    omega: float
    alphas: np.ndarray
    hemisphere: int = 1

    def __post_init__(self) -> None:
        a = np.asarray(self.alphas, dtype=float)
        if a.ndim != 1 or len(a) < 3:
            raise InvalidPolygon("need at least three phase angles")
        if not np.all(np.isfinite(a)):
            raise InvalidPolygon("phase angles must be finite")
        a = np.sort(np.mod(a, TWO_PI))
        gaps = np.diff(a, append=a[0] + TWO_PI)
        if np.any(gaps <= ANGLE_SEP_TOL):
            raise InvalidPolygon("phase angles collide (separation below tolerance)")
        object.__setattr__(self, "alphas", a)
        if self.hemisphere not in (1, -1):
            raise InvalidPolygon(f"hemisphere must be +1 or -1, got {self.hemisphere!r}")
        if self.curvature.kappa < 0 and self.hemisphere != 1:
            raise InvalidPolygon("negative curvature has a single (upper) sheet")
        z = _ring_z(self.curvature.kappa, self.r)
        if z == 0.0:
            d = np.abs(a[None, :] - a[:, None])
            d = np.minimum(d, TWO_PI - d)
            if np.any(np.abs(d[~np.eye(len(a), dtype=bool)] - math.pi) <= 1e-12):
                raise InvalidPolygon("antipodal pair on the equator")

    @property
    def n(self) -> int:
        return len(self.alphas)

    @property
    def z(self) -> float:
        return self.hemisphere * _ring_z(self.curvature.kappa, self.r)

    @property
    def equatorial(self) -> bool:
        return _ring_z(self.curvature.kappa, self.r) == 0.0


@dataclass(frozen=True)
class KernelPair:
    """The symmetric (mu) and antisymmetric (nu) pair kernels."""

    mu: float
    nu: float

    def __post_init__(self) -> None:
        if not (self.mu > 0):
            raise ValueError(f"mu must be positive, got {self.mu!r}")


@dataclass(frozen=True, eq=False)
class CriterionReport:
    """Per-body delta/gamma sums, the kernel matrices, and the verdict."""

    deltas: np.ndarray
    gammas: np.ndarray
    delta_matrix: np.ndarray
    gamma_matrix: np.ndarray
    delta_spread: float
    gamma_spread: float
    verdict: bool


@dataclass(frozen=True, eq=False)
class MassSolution:
    """Masses solving the equal-delta system, with the gamma residual."""

    masses: np.ndarray
    gamma_residual: float
    feasible: bool


@dataclass(frozen=True, eq=False)
class SignReport:
    """Triangle kernel labels and the two existence conditions.

    ``a, b, c`` are the three mu kernels and ``u, v, w`` the three nu
    kernels (pairs 2-1, 3-1, 3-2).  ``sign_pattern_holds`` is true when
    u, w, and -v share a sign, i.e. the antisymmetric system admits a
    positive mass ray.  ``ratios_hold`` is true when the symmetric
    system is compatible with that ray; ``residuals`` holds the three
    cross-multiplied compatibility defects.  ``verdict`` (orbit can
    exist) requires both.
    """

    a: float
    b: float
    c: float
    u: float
    v: float
    w: float
    sign_pattern_holds: bool
    ratios_hold: bool
    residuals: np.ndarray
    verdict: bool


def kernels(alpha_i: float, alpha_j: float, kappa: float, r: float) -> KernelPair:
    """Pair kernels mu, nu for phase angles alpha_i, alpha_j.

    With c = 1 - cos(alpha_j - alpha_i) and s = sin(alpha_j - alpha_i):
    mu = 1 / (c^{1/2} (2 - c kappa r^2)^{3/2}),
    nu = s / (c^{3/2} (2 - c kappa r^2)^{3/2}).

    Swapping the two angles leaves mu unchanged and negates nu.

    Raises
    ------
    CollisionSingularity
        When c <= 1e-15 (coincident angles).
    AntipodalSingularity
        When 2 - c kappa r^2 <= 1e-15 (antipodal equatorial pair).
    """
    d = alpha_j - alpha_i
    c = 1.0 - math.cos(d)
    s = math.sin(d)
    if c <= 1e-15:
        raise CollisionSingularity("phase angles coincide")
    stretch = 2.0 - c * kappa * r * r
    if stretch <= 1e-15:
        raise AntipodalSingularity("antipodal pair at this radius")
    mu = 1.0 / (math.sqrt(c) * stretch**1.5)
    nu = s / (c**1.5 * stretch**1.5)
    return KernelPair(mu, nu)


def _kernel_matrices(p: PolygonConfig) -> tuple[np.ndarray, np.ndarray]:
    """Hollow kernel matrices (mu symmetric, nu antisymmetric).

    Entry [i, j] is the kernel of the ordered pair (j over i).  The
    equatorial case is rejected here: the reduced equations degenerate
    there and equatorial configurations are handled by the fixed-point
    module instead.
    """
    if p.equatorial:
        raise EquatorSingularity(
            "equatorial configuration: criterion matrices are not defined there"
        )
    a = p.alphas
    kr2 = p.curvature.kappa * p.r * p.r
    d = a[None, :] - a[:, None]
    cd = 1.0 - np.cos(d)
    sd = np.sin(d)
    n = len(a)
    off = ~np.eye(n, dtype=bool)
    if np.any(cd[off] <= 1e-15):
        raise CollisionSingularity("phase angles coincide")
    stretch = 2.0 - cd * kr2
    if np.any(stretch[off] <= 1e-15):
        raise AntipodalSingularity("antipodal pair at this radius")
    np.fill_diagonal(cd, 1.0)
    np.fill_diagonal(stretch, 1.0)
    mu = 1.0 / (np.sqrt(cd) * stretch**1.5)
    nu = sd / (cd**1.5 * stretch**1.5)
    np.fill_diagonal(mu, 0.0)
    np.fill_diagonal(nu, 0.0)
    return mu, nu


def embed(p: PolygonConfig) -> tuple[SurfacePoint, ...]:
    """Positions of the polygon's bodies as on-surface points."""
    q = ring_positions(p.curvature.kappa, p.r, p.omega, p.alphas, p.hemisphere)
    return tuple(SurfacePoint(row, p.curvature) for row in q)


def ring_state(
    curvature: Curvature,
    masses: Sequence[float],
    r: float,
    omega: float,
    alphas: Sequence[float],
    r_dot: float = 0.0,
    omega_dot: float = 0.0,
    hemisphere: int = 1,
    time: float = 0.0,
) -> SystemState:
    """Full system state of bodies on the circle, any n >= 1.

    Velocities follow from differentiating the circle parametrization:
    the in-plane parts carry r_dot and omega_dot, and
    z_dot = -sigma r r_dot / z keeps each body on the surface.  On the
    equator (z = 0) the size cannot vary, so r_dot must be zero.
    """
    k = curvature.kappa
    q = ring_positions(k, r, omega, alphas, hemisphere)
    a = np.asarray(alphas, dtype=float)
    phases = omega + a
    cosp = np.cos(phases)
    sinp = np.sin(phases)
    v = np.empty_like(q)
    v[:, 0] = r_dot * cosp - r * omega_dot * sinp
    v[:, 1] = r_dot * sinp + r * omega_dot * cosp
    z = q[0, 2]
    if z == 0.0:
        if r_dot != 0.0:
            raise InvalidPolygon("equatorial configuration cannot change size")
        v[:, 2] = 0.0
    else:
        v[:, 2] = -curvature.sigma * r * r_dot / z
    return make_state(curvature, masses, q, v, time)


def polygon_state(
    p: PolygonConfig,
    masses: Sequence[float],
    r_dot: float = 0.0,
    omega_dot: float = 0.0,
    time: float = 0.0,
) -> SystemState:
    """SystemState of the polygon with size/rotation rates (r_dot, omega_dot)."""
    if len(masses) != p.n:
        raise ValueError(f"expected {p.n} masses, got {len(masses)}")
    return ring_state(
        p.curvature, masses, p.r, p.omega, p.alphas, r_dot, omega_dot, p.hemisphere, time
    )


def build_matrices(p: PolygonConfig) -> tuple[np.ndarray, np.ndarray]:
    """The hollow criterion matrices (symmetric mu, antisymmetric nu)."""
    return _kernel_matrices(p)


def delta_gamma(masses: Sequence[float], p: PolygonConfig) -> tuple[np.ndarray, np.ndarray]:
    """Mass-weighted kernel sums delta_i and gamma_i for each body."""
    m = np.asarray(masses, dtype=float)
    if len(m) != p.n:
        raise ValueError(f"expected {p.n} masses, got {len(m)}")
    if np.any(m <= 0):
        raise ValueError("masses must be positive")
    mu, nu = _kernel_matrices(p)
    return mu @ m, nu @ m


def check_criterion(
    masses: Sequence[float], p: PolygonConfig, tol: float = CRITERION_TOL
) -> CriterionReport:
    """Evaluate the equal-delta / equal-gamma criterion at this size r.

    The verdict is true when both spreads (max - min over bodies) are
    within ``tol``.  A homographic orbit requires the criterion at
    every size the orbit visits; the command-line layer re-checks it
    across a grid of r values.
    """
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    mu, nu = _kernel_matrices(p)
    m = np.asarray(masses, dtype=float)
    if len(m) != p.n:
        raise ValueError(f"expected {p.n} masses, got {len(m)}")
    if np.any(m <= 0):
        raise ValueError("masses must be positive")
    deltas = mu @ m
    gammas = nu @ m
    ds = float(deltas.max() - deltas.min())
    gs = float(gammas.max() - gammas.min())
    return CriterionReport(
        deltas=deltas,
        gammas=gammas,
        delta_matrix=mu,
        gamma_matrix=nu,
        delta_spread=ds,
        gamma_spread=gs,
        verdict=bool(ds <= tol and gs <= tol),
    )


def solve_masses(
    p: PolygonConfig,
    delta_target: float = 1.0,
    positivity_tol: float = MASS_POSITIVITY_TOL,
    gamma_rel_tol: float = GAMMA_RESIDUAL_TOL,
) -> MassSolution:
    """Solve the equal-delta linear system for the masses.

    Solves mu_matrix @ m = delta_target * ones, then evaluates the
    residual of the antisymmetric system nu_matrix @ m = 0.  The
    solution is feasible when all masses are positive (above
    ``positivity_tol`` relative to the largest) and the gamma residual
    norm is within ``gamma_rel_tol`` times the mass norm.

    Raises
    ------
    SingularMatrix
        If the symmetric system has no unique solution.
    """
    if delta_target <= 0:
        raise ValueError("delta_target must be positive")
    mu, nu = _kernel_matrices(p)
    try:
        m = np.linalg.solve(mu, np.full(p.n, float(delta_target)))
    except np.linalg.LinAlgError as e:
        raise SingularMatrix(f"equal-delta system is singular: {e}") from e
    gamma_residual = float(np.linalg.norm(nu @ m))
    mmax = float(m.max())
    positive = mmax > 0 and bool(np.all(m > positivity_tol * mmax))
    feasible = positive and gamma_residual <= gamma_rel_tol * float(np.linalg.norm(m))
    return MassSolution(masses=m, gamma_residual=gamma_residual, feasible=feasible)


def triangle_sign_test(p: PolygonConfig, ratio_tol: float = RATIO_TOL) -> SignReport:
    """Sign and compatibility analysis for a (non-equatorial) triangle.

    Labels the kernels a = mu_21, b = mu_31, c = mu_32 and u = nu_21,
    v = nu_31, w = nu_32.  The antisymmetric system has the one-line
    mass ray m proportional to (w, -v, u), so positive masses require
    the sign pattern (u, w > 0 and v < 0) or its negation.  Feeding
    that ray into the equal-delta equations yields three compatibility
    conditions, checked here as cross-multiplied residuals

        (a - c) v - b (u - w),
        (b - a) w - c (u + v),
        (b - c) u - a (v + w),

    each required to vanish within ``ratio_tol`` relative to the kernel
    scale.  The verdict (a homographic orbit is possible) requires both
    the sign pattern and the compatibility conditions; equilateral
    triangles satisfy them and non-equilateral ones do not.
    """
    if p.n != 3:
        raise InvalidPolygon(f"triangle test needs exactly 3 bodies, got {p.n}")
    mu, nu = _kernel_matrices(p)
    a, b, c = mu[0, 1], mu[0, 2], mu[1, 2]
    u, v, w = nu[0, 1], nu[0, 2], nu[1, 2]
    sign_ok = (u > 0 and w > 0 and v < 0) or (u < 0 and w < 0 and v > 0)
    residuals = np.array(
        [
            (a - c) * v - b * (u - w),
            (b - a) * w - c * (u + v),
            (b - c) * u - a * (v + w),
        ]
    )
    scale = max(abs(a), abs(b), abs(c)) * max(abs(u), abs(v), abs(w))
    ratios_ok = bool(np.all(np.abs(residuals) <= ratio_tol * scale))
    return SignReport(
        a=float(a),
        b=float(b),
        c=float(c),
        u=float(u),
        v=float(v),
        w=float(w),
        sign_pattern_holds=bool(sign_ok),
        ratios_hold=ratios_ok,
        residuals=residuals,
        verdict=bool(sign_ok and ratios_ok),
    )
