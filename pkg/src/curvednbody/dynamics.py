"""Equations of motion for the curved n-body problem.

Bodies of positive mass move on a surface of constant curvature
kappa != 0 under the cotangent potential.  This module provides the
force function, its gradient, the second-order equations of motion,
the conserved quantities (energy and sigma-signed angular momentum),
a constraint-projecting RK4 integrator, and the reduced second-order
equations for the size and angular functions (r(t), omega(t)) of a
polygonal homographic configuration.

The hot integration loop works on raw (n, 3) arrays; validated
``SystemState`` objects are materialized only at observation times.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import (
    AntipodalSingularity,
    CollisionSingularity,
    CriterionViolation,
    EquatorSingularity,
    NumericalBlowup,
)
from .geometry import Curvature, SurfacePoint, cross, inner

# Pairwise kappa*<q_i,q_j> bands treated as singular, and the coordinate
# magnitude beyond which integration is declared to have blown up.
COLLISION_EPS = 1e-12
ANTIPODAL_EPS = 1e-12
BLOWUP_LIMIT = 1e12

# Tangency tolerance for Body construction; looser than the geometric
# 1e-14 to admit states assembled from integrated trajectories.
BODY_TANGENCY_TOL = 1e-10

# Spread tolerance for the delta/gamma equalities inside reduced_rhs.
REDUCED_CRITERION_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class Body:
    """One body: mass, on-surface position, tangent velocity."""

    mass: float
    position: SurfacePoint
    velocity: np.ndarray

    def __post_init__(self) -> None:
        if not (self.mass > 0 and math.isfinite(self.mass)):
            raise ValueError(f"mass must be positive and finite, got {self.mass!r}")
        v = np.asarray(self.velocity, dtype=float)
        object.__setattr__(self, "velocity", v)
        c = self.position.curvature
        t = c.kappa * inner(self.position.coords, v, c)
        if abs(t) > BODY_TANGENCY_TOL:
            raise ValueError(f"velocity is not tangent: kappa*<q,v> = {t!r}")


@dataclass(frozen=True, eq=False)
class SystemState:
    """Snapshot of n >= 1 bodies sharing one curvature at a given time."""

    curvature: Curvature
    bodies: tuple[Body, ...]
    time: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "bodies", tuple(self.bodies))
        if len(self.bodies) < 1:
            raise ValueError("need at least one body")
        for b in self.bodies:
            if b.position.curvature.kappa != self.curvature.kappa:
                raise ValueError("all bodies must share the system curvature")
        q = self.positions
        _check_pair_guards(_pair_matrix(q, self.curvature), self.curvature)

    @property
    def n(self) -> int:
        return len(self.bodies)

    @property
    def masses(self) -> np.ndarray:
        return np.array([b.mass for b in self.bodies])

    @property
    def positions(self) -> np.ndarray:
        return np.array([b.position.coords for b in self.bodies])

    @property
    def velocities(self) -> np.ndarray:
        return np.array([b.velocity for b in self.bodies])


@dataclass(frozen=True)
class ReducedState:
    """Size and angular functions (r, omega) with their rates."""

    r: float
    r_dot: float
    omega: float
    omega_dot: float

    def __post_init__(self) -> None:
        if not (self.r > 0 and math.isfinite(self.r)):
            raise ValueError(f"size function r must be positive, got {self.r!r}")


@dataclass(frozen=True, eq=False)
class ConservedQuantities:
    """Diagnostic record of energy and angular momentum."""

    energy: float
    angular_momentum: np.ndarray


@dataclass(eq=False)
class Trajectory:
    """Observed states of one integration, plus the halt reason if any."""

    states: list[SystemState]
    conserved: list[ConservedQuantities]
    halted: Optional[str] = None

    @property
    def times(self) -> np.ndarray:
        return np.array([s.time for s in self.states])

    @property
    def energies(self) -> np.ndarray:
        return np.array([c.energy for c in self.conserved])

    @property
    def momenta(self) -> np.ndarray:
        return np.array([c.angular_momentum for c in self.conserved])

    @property
    def final(self) -> SystemState:
        return self.states[-1]


def make_state(
    curvature: Curvature,
    masses: Sequence[float],
    positions,
    velocities,
    time: float = 0.0,
) -> SystemState:
    """Assemble a SystemState from raw (n, 3) position/velocity arrays."""
    q = np.asarray(positions, dtype=float)
    v = np.asarray(velocities, dtype=float)
    bodies = tuple(
        Body(float(m), SurfacePoint(qi, curvature), vi)
        for m, qi, vi in zip(masses, q, v, strict=True)
    )
    return SystemState(curvature, bodies, time)


def _pair_matrix(q: np.ndarray, c: Curvature) -> np.ndarray:
    """W[i, j] = kappa * <q_i, q_j> for all body pairs."""
    qs = q.copy()
    qs[:, 2] *= c.sigma
    return c.kappa * (q @ qs.T)


def _check_pair_guards(w: np.ndarray, c: Curvature) -> None:
    """Raise the typed singularity for any colliding or antipodal pair.

    The diagonal (kappa <q_i, q_i> = 1) is masked by overwriting a copy
    with values safely inside the allowed band.
    """
    n = w.shape[0]
    if n < 2:
        return
    wc = w.copy()
    if c.kappa > 0:
        np.fill_diagonal(wc, 0.0)
        if wc.max() > 1.0 - COLLISION_EPS:
            raise CollisionSingularity("a pair of bodies is at collision")
        if wc.min() < -1.0 + ANTIPODAL_EPS:
            raise AntipodalSingularity("a pair of bodies is antipodal")
    else:
        np.fill_diagonal(wc, 2.0)
        if wc.min() < 1.0 + COLLISION_EPS:
            raise CollisionSingularity("a pair of bodies is at collision")


def _pair_denominators(w: np.ndarray, c: Curvature) -> np.ndarray:
    """A[i, j] = sigma * (W_ii W_jj - W_ij^2), the squared pair denominator."""
    d = np.diag(w)
    a = c.sigma * (np.outer(d, d) - w * w)
    return a


def force_function(s: SystemState) -> float:
    """Cotangent-potential force function U of the configuration.

    U = sum over pairs i < j of
    m_i m_j |kappa|^{1/2} W_ij / [sigma (W_ii W_jj - W_ij^2)]^{1/2},
    where W_ij = kappa * <q_i, q_j>.

    Raises
    ------
    CollisionSingularity, AntipodalSingularity
        If some pair denominator is not positive.
    """
    c = s.curvature
    q = s.positions
    m = s.masses
    w = _pair_matrix(q, c)
    _check_pair_guards(w, c)
    if s.n < 2:
        return 0.0
    a = _pair_denominators(w, c)
    iu = np.triu_indices(s.n, k=1)
    den = a[iu]
    if np.any(den <= 0.0):
        raise CollisionSingularity("pair denominator is not positive")
    num = np.outer(m, m)[iu] * w[iu]
    return float(math.sqrt(abs(c.kappa)) * np.sum(num / np.sqrt(den)))


def force_gradient(i: int, s: SystemState) -> np.ndarray:
    """Gradient of the force function with respect to body ``i``.

    Returns sum over j != i of
    m_i m_j |kappa|^{3/2} W_jj [W_ii q_j - W_ij q_i] / A_ij^{3/2}
    with A_ij = sigma (W_ii W_jj - W_ij^2).  The result is tangent to
    the surface at q_i.  Empty sum (n = 1) gives the zero vector.
    """
    if not 0 <= i < s.n:
        raise IndexError(f"body index {i} out of range for n={s.n}")
    c = s.curvature
    q = s.positions
    m = s.masses
    w = _pair_matrix(q, c)
    _check_pair_guards(w, c)
    if s.n < 2:
        return np.zeros(3)
    a = _pair_denominators(w, c)
    out = np.zeros(3)
    ak = abs(c.kappa) ** 1.5
    for j in range(s.n):
        if j == i:
            continue
        if a[i, j] <= 0.0:
            raise CollisionSingularity("pair denominator is not positive")
        out += (
            m[i]
            * m[j]
            * ak
            * w[j, j]
            * (w[i, i] * q[j] - w[i, j] * q[i])
            / a[i, j] ** 1.5
        )
    return out


def _accelerations(q: np.ndarray, v: np.ndarray, m: np.ndarray, c: Curvature) -> np.ndarray:
    """Accelerations of all bodies from positions/velocities (raw arrays)."""
    w = _pair_matrix(q, c)
    _check_pair_guards(w, c)
    n = q.shape[0]
    vs = v.copy()
    vs[:, 2] *= c.sigma
    kv = c.kappa * np.sum(v * vs, axis=1)
    if n < 2:
        return -kv[:, None] * q
    b = c.sigma * (1.0 - w * w)
    np.fill_diagonal(b, 1.0)
    coef = abs(c.kappa) ** 1.5 / b**1.5
    np.fill_diagonal(coef, 0.0)
    p = coef * m[None, :]
    grav = p @ q - np.sum(p * w, axis=1)[:, None] * q
    return grav - kv[:, None] * q


def acceleration(s: SystemState) -> np.ndarray:
    """Second-order equations of motion, one (3,) acceleration per body.

    For each body i:
    sum over j != i of m_j |kappa|^{3/2} [q_j - W_ij q_i] /
    (sigma - sigma W_ij^2)^{3/2}, minus the constraint term
    (kappa <qdot_i, qdot_i>) q_i.

    Raises
    ------
    CollisionSingularity, AntipodalSingularity
        When a pair enters the singular bands of kappa * <q_i, q_j>.
    """
    return _accelerations(s.positions, s.velocities, s.masses, s.curvature)


def hamiltonian(s: SystemState) -> float:
    """Total energy T - U with T = (1/2) sum m_i <v_i, v_i> (kappa <q_i, q_i>)."""
    c = s.curvature
    q = s.positions
    v = s.velocities
    vs = v.copy()
    vs[:, 2] *= c.sigma
    qs = q.copy()
    qs[:, 2] *= c.sigma
    t = 0.5 * float(np.sum(s.masses * np.sum(v * vs, axis=1) * (c.kappa * np.sum(q * qs, axis=1))))
    return t - force_function(s)


def angular_momentum(s: SystemState) -> np.ndarray:
    """Total sigma-signed angular momentum sum_i m_i q_i x v_i."""
    c = s.curvature
    out = np.zeros(3)
    for b in s.bodies:
        out += b.mass * cross(b.position.coords, b.velocity, c)
    return out


def _project(q: np.ndarray, v: np.ndarray, c: Curvature) -> tuple[np.ndarray, np.ndarray]:
    """Renormalize positions onto the surface and tangent-project velocities."""
    qs = q.copy()
    qs[:, 2] *= c.sigma
    nrm = c.kappa * np.sum(q * qs, axis=1)
    if np.any(nrm <= 0.0):
        raise NumericalBlowup("a position left the surface's cone")
    q = q / np.sqrt(nrm)[:, None]
    qs = q.copy()
    qs[:, 2] *= c.sigma
    v = v - (c.kappa * np.sum(qs * v, axis=1))[:, None] * q
    return q, v


def _rk4_step(
    q: np.ndarray, v: np.ndarray, m: np.ndarray, c: Curvature, dt: float
) -> tuple[np.ndarray, np.ndarray]:
    """One classical RK4 step on (q, v), then constraint projection."""
    k1v = _accelerations(q, v, m, c)
    q2 = q + (0.5 * dt) * v
    v2 = v + (0.5 * dt) * k1v
    k2v = _accelerations(q2, v2, m, c)
    q3 = q + (0.5 * dt) * v2
    v3 = v + (0.5 * dt) * k2v
    k3v = _accelerations(q3, v3, m, c)
    q4 = q + dt * v3
    v4 = v + dt * k3v
    k4v = _accelerations(q4, v4, m, c)
    qn = q + (dt / 6.0) * (v + 2.0 * v2 + 2.0 * v3 + v4)
    vn = v + (dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
    if np.max(np.abs(qn)) > BLOWUP_LIMIT or np.max(np.abs(vn)) > BLOWUP_LIMIT:
        raise NumericalBlowup("coordinates exceeded the blowup limit")
    return _project(qn, vn, c)


def step(s: SystemState, dt: float) -> SystemState:
    """Advance one RK4 step of size ``dt`` and re-impose the constraints.

    Positions are renormalized onto the surface and velocities
    tangent-projected after the update; time advances by ``dt``.

    Raises
    ------
    CollisionSingularity, AntipodalSingularity, NumericalBlowup
        Propagated from force evaluation, or raised if coordinates
        exceed ``BLOWUP_LIMIT``.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    q, v = _rk4_step(s.positions, s.velocities, s.masses, s.curvature, dt)
    return make_state(s.curvature, s.masses, q, v, s.time + dt)


def integrate(
    s: SystemState, dt: float, t_end: float, observer_stride: int = 1
) -> Trajectory:
    """Integrate to ``t_end``, recording every ``observer_stride`` steps.

    The initial state is always recorded, as is the final step (or the
    last completed step before a singularity halt).  On a singularity
    the trajectory's ``halted`` field carries the reason ("collision",
    "antipodal", or "blowup") instead of an exception propagating.

    Parameters
    ----------
    s : SystemState
        Initial condition.
    dt : float
        Fixed step size, > 0.
    t_end : float
        Final time, >= s.time; the step count is round((t_end - time)/dt).
    observer_stride : int
        Record one state every this many steps.

    Returns
    -------
    Trajectory
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if t_end < s.time:
        raise ValueError("t_end must not precede the state's time")
    if observer_stride < 1:
        raise ValueError("observer_stride must be >= 1")
    c = s.curvature
    m = s.masses
    q = s.positions
    v = s.velocities
    t0 = s.time
    n_steps = int(round((t_end - t0) / dt))
    states = [s]
    conserved = [ConservedQuantities(hamiltonian(s), angular_momentum(s))]
    halted: Optional[str] = None
    recorded = 0
    for k in range(1, n_steps + 1):
        try:
            q, v = _rk4_step(q, v, m, c, dt)
        except (CollisionSingularity, AntipodalSingularity, NumericalBlowup) as e:
            halted = e.reason
            break
        if k % observer_stride == 0 or k == n_steps:
            st = make_state(c, m, q, v, t0 + k * dt)
            states.append(st)
            conserved.append(ConservedQuantities(hamiltonian(st), angular_momentum(st)))
            recorded = k
    if halted is not None and recorded != k - 1 and k - 1 > 0:
        st = make_state(c, m, q, v, t0 + (k - 1) * dt)
        states.append(st)
        conserved.append(ConservedQuantities(hamiltonian(st), angular_momentum(st)))
    return Trajectory(states, conserved, halted)


def _delta_gamma_reduced(
    r: float, masses: np.ndarray, angles: np.ndarray, c: Curvature
) -> tuple[np.ndarray, np.ndarray]:
    """The per-body sums Delta_i and Gamma_i of the reduced equations."""
    k = c.kappa
    kr2 = k * r * r
    d = angles[None, :] - angles[:, None]
    cd = 1.0 - np.cos(d)
    sd = np.sin(d)
    n = len(angles)
    off = ~np.eye(n, dtype=bool)
    if np.any(cd[off] <= 1e-15):
        raise CollisionSingularity("coincident phase angles")
    stretch = 2.0 - cd * kr2
    if np.any(stretch[off] <= 1e-15):
        raise AntipodalSingularity("antipodal phase pair on the equator")
    np.fill_diagonal(cd, 1.0)
    np.fill_diagonal(stretch, 1.0)
    mu_like = (1.0 - kr2) / (np.sqrt(cd) * r * r * stretch**1.5)
    nu_like = sd / (cd**1.5 * r * r * stretch**1.5)
    np.fill_diagonal(mu_like, 0.0)
    np.fill_diagonal(nu_like, 0.0)
    deltas = mu_like @ masses
    gammas = nu_like @ masses
    return deltas, gammas


def reduced_rhs(
    rs: ReducedState,
    masses: Sequence[float],
    angles: Sequence[float],
    c: Curvature,
    criterion_tol: float = REDUCED_CRITERION_TOL,
) -> tuple[float, float]:
    """Second derivatives (r_ddot, omega_ddot) of the reduced system.

    r_ddot = r (1 - kappa r^2) omega_dot^2 - kappa r r_dot^2 / (1 - kappa r^2) - Delta_1,
    omega_ddot = (Gamma_1 - 2 r_dot omega_dot) / r,

    where Delta_i and Gamma_i are the mass-weighted kernel sums of the
    polygonal configuration.  The configuration must satisfy the
    equal-Delta / equal-Gamma criterion so that body 1 is
    representative.

    Raises
    ------
    EquatorSingularity
        When |1 - kappa r^2| < 1e-12 (the equatorial denominator vanishes).
    CriterionViolation
        When the spread of Delta_i or Gamma_i exceeds ``criterion_tol``.
    """
    m = np.asarray(masses, dtype=float)
    a = np.asarray(angles, dtype=float)
    r = rs.r
    k = c.kappa
    one_kr2 = 1.0 - k * r * r
    if abs(one_kr2) < 1e-12:
        raise EquatorSingularity("1 - kappa r^2 vanishes at this size")
    deltas, gammas = _delta_gamma_reduced(r, m, a, c)
    if deltas.max() - deltas.min() > criterion_tol:
        raise CriterionViolation(
            f"Delta_i spread {deltas.max() - deltas.min():.3e} exceeds {criterion_tol:.1e}"
        )
    if gammas.max() - gammas.min() > criterion_tol:
        raise CriterionViolation(
            f"Gamma_i spread {gammas.max() - gammas.min():.3e} exceeds {criterion_tol:.1e}"
        )
    r_ddot = r * one_kr2 * rs.omega_dot**2 - k * r * rs.r_dot**2 / one_kr2 - deltas[0]
    omega_ddot = (gammas[0] - 2.0 * rs.r_dot * rs.omega_dot) / r
    return float(r_ddot), float(omega_ddot)
