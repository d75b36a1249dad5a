"""Linear Kalman tracking filter with an optional road constraint.

State vector: [p_north, p_east, v_north, v_east] (meters, meters/second).
The dynamics couple position to velocity over the update interval T and
inject a scalar acceleration control along the road heading theta. The
constrained variant projects the updated state onto the road subspace
p_north = tan(theta) * p_east, v_north = tan(theta) * v_east using the
predicted covariance as the projection metric.

Filter state is carried as plain numpy arrays; all functions are pure, so
independent tracks can be stepped in parallel as long as each (state,
covariance) pair is touched by one thread at a time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import HeadingSingular, SingularConstraint, SingularInnovation

STATE_DIM = 4
MEAS_DIM = 2

# Condition number above which innovation / constraint solves are refused.
COND_LIMIT = 1e12

# Nominal tracking scenario: 3 s updates on a 60-degree road, conservative
# measurement noise, moderate process noise.
DEFAULT_T = 3.0
DEFAULT_HEADING = math.radians(60.0)


def _default_q() -> np.ndarray:
    return np.diag([4.0, 4.0, 1.0, 1.0])


def _default_r() -> np.ndarray:
    return np.diag([900.0, 900.0])


def default_initial_state() -> np.ndarray:
    """Nominal initial state: at the origin moving 17 m/s north, 10 m/s east."""
    return np.array([0.0, 0.0, 17.0, 10.0])


def default_initial_covariance() -> np.ndarray:
    return np.diag([900.0, 900.0, 4.0, 4.0])


@dataclass
class FilterConfig:
    """Tracking filter parameters.

    T: update interval in seconds. theta: road heading in radians,
    measured from the east axis toward north. Q, R: process and
    measurement noise covariances the filter assumes. constrained: apply
    the road projection after each update. road_offset: affine constraint
    offset d0 so D x = d0; zero means a road through the origin.
    """

    T: float = DEFAULT_T
    theta: float = DEFAULT_HEADING
    Q: np.ndarray = field(default_factory=_default_q)
    R: np.ndarray = field(default_factory=_default_r)
    constrained: bool = False
    road_offset: np.ndarray = field(default_factory=lambda: np.zeros(MEAS_DIM))

    def __post_init__(self):
        if not self.T >= 0.0:
            raise ValueError(f"update interval must be nonnegative, got {self.T}")
        self.Q = np.asarray(self.Q, dtype=float)
        self.R = np.asarray(self.R, dtype=float)
        self.road_offset = np.asarray(self.road_offset, dtype=float)
        if self.Q.shape != (STATE_DIM, STATE_DIM):
            raise ValueError("Q must be 4x4")
        if self.R.shape != (MEAS_DIM, MEAS_DIM):
            raise ValueError("R must be 2x2")
        for name, m in (("Q", self.Q), ("R", self.R)):
            if not np.allclose(m, m.T, atol=1e-9):
                raise ValueError(f"{name} must be symmetric")
            if np.linalg.eigvalsh(m).min() < -1e-9:
                raise ValueError(f"{name} must be positive semi-definite")


def dynamics_matrices(cfg: FilterConfig) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Return (F, B, H, D) for the configured interval and heading.

    F couples position to velocity over T; B injects the scalar
    acceleration control along the heading; H observes the two positions;
    D expresses the road constraint rows [1, -tan(theta), 0, 0] and
    [0, 0, 1, -tan(theta)].
    """
    if abs(math.cos(cfg.theta)) < 1e-12:
        raise HeadingSingular(f"heading {cfg.theta} rad has undefined tangent")
    T = cfg.T
    F = np.eye(STATE_DIM)
    F[0, 2] = T
    F[1, 3] = T
    B = np.array([0.0, 0.0, T * math.sin(cfg.theta), T * math.cos(cfg.theta)])
    H = np.zeros((MEAS_DIM, STATE_DIM))
    H[0, 0] = 1.0
    H[1, 1] = 1.0
    tan_theta = math.tan(cfg.theta)
    D = np.array([
        [1.0, -tan_theta, 0.0, 0.0],
        [0.0, 0.0, 1.0, -tan_theta],
    ])
    return F, B, H, D


def symmetrize(P: np.ndarray) -> np.ndarray:
    """Average P with its transpose to control floating-point drift."""
    return 0.5 * (P + P.T)


def predict(
    state: np.ndarray,
    cov: np.ndarray,
    u: float,
    cfg: FilterConfig,
) -> tuple[np.ndarray, np.ndarray]:
    """Time update: state' = F state + B u, cov' = F cov F^T + Q."""
    F, B, _, _ = dynamics_matrices(cfg)
    state_pred = F @ np.asarray(state, dtype=float) + B * u
    cov_pred = symmetrize(F @ np.asarray(cov, dtype=float) @ F.T + cfg.Q)
    return state_pred, cov_pred


def update(
    state_pred: np.ndarray,
    cov_pred: np.ndarray,
    z: np.ndarray,
    cfg: FilterConfig,
) -> tuple[np.ndarray, np.ndarray]:
    """Measurement update with gain G = P H^T (H P H^T + R)^-1."""
    _, _, H, _ = dynamics_matrices(cfg)
    cov_pred = np.asarray(cov_pred, dtype=float)
    S = H @ cov_pred @ H.T + cfg.R
    if np.linalg.cond(S) >= COND_LIMIT:
        raise SingularInnovation(f"innovation covariance is numerically singular: {S}")
    G = cov_pred @ H.T @ np.linalg.inv(S)
    innovation = np.asarray(z, dtype=float) - H @ np.asarray(state_pred, dtype=float)
    state_new = np.asarray(state_pred, dtype=float) + G @ innovation
    cov_new = symmetrize(cov_pred - G @ H @ cov_pred)
    return state_new, cov_new


def constrain(state: np.ndarray, cov_pred: np.ndarray, cfg: FilterConfig) -> np.ndarray:
    """Project the state onto the road constraint D x = road_offset.

    Uses the predicted covariance as the projection metric:
    x' = x - P D^T (D P D^T)^-1 (D x - d0). Idempotent on feasible states.
    """
    _, _, _, D = dynamics_matrices(cfg)
    cov_pred = np.asarray(cov_pred, dtype=float)
    gram = D @ cov_pred @ D.T
    if np.linalg.cond(gram) >= COND_LIMIT:
        raise SingularConstraint(f"constraint Gram matrix is numerically singular: {gram}")
    residual = D @ np.asarray(state, dtype=float) - cfg.road_offset
    return np.asarray(state, dtype=float) - cov_pred @ D.T @ np.linalg.solve(gram, residual)


def step(
    state: np.ndarray,
    cov: np.ndarray,
    z: np.ndarray,
    u: float,
    cfg: FilterConfig,
) -> tuple[np.ndarray, np.ndarray]:
    """One full cycle: predict, update, then project if the filter is constrained.

    The projection uses the predicted covariance, and the covariance
    returned is the updated (unprojected) one.
    """
    state_pred, cov_pred = predict(state, cov, u, cfg)
    state_new, cov_new = update(state_pred, cov_pred, z, cfg)
    if cfg.constrained:
        state_new = constrain(state_new, cov_pred, cfg)
    return state_new, cov_new


def is_valid_covariance(P: np.ndarray, tol: float = 1e-9) -> bool:
    """True when P is symmetric and positive semi-definite within tol."""
    P = np.asarray(P, dtype=float)
    if not np.allclose(P, P.T, atol=tol):
        return False
    return np.linalg.eigvalsh(symmetrize(P)).min() >= -tol
