"""Independent numerical oracles for the closed-form geometry.

Nothing here reuses the library's spectral machinery on the path it checks:
the geodesic ODE is integrated with classical RK4 using LAPACK solves for
gamma^-1, derivative checks are central finite differences, and the Fisher
metric is re-estimated by Monte Carlo from the Gaussian model itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DimensionMismatch, LeftCone, NotPositiveDefinite
from .gaussian import GaussianModel
from .symmat import SPD_TOL, SpdMatrix, SymmetricMatrix


@dataclass(frozen=True)
class VerificationReport:
    """Pass/fail record of one numerical check."""

    check_name: str
    residual: float
    tolerance: float
    passed: bool
    seed: int | None = None
    details: str = ""

    def __post_init__(self):
        expected = bool(self.residual <= self.tolerance)
        if self.passed != expected:
            raise ValueError(
                f"inconsistent report for {self.check_name!r}: passed={self.passed} "
                f"but residual={self.residual!r}, tolerance={self.tolerance!r}"
            )

    def as_dict(self) -> dict:
        return {
            "check_name": self.check_name,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "seed": self.seed,
            "details": self.details,
        }


def make_report(
    check_name: str,
    residual: float,
    tolerance: float,
    seed: int | None = None,
    details: str = "",
) -> VerificationReport:
    """Build a report with `passed` derived from residual <= tolerance."""
    residual = float(residual)
    tolerance = float(tolerance)
    return VerificationReport(
        check_name=check_name,
        residual=residual,
        tolerance=tolerance,
        passed=bool(residual <= tolerance),
        seed=seed,
        details=details,
    )


@dataclass(frozen=True)
class OdeSolution:
    """Trajectory of the first-order system (gamma, gamma') on a fixed grid."""

    times: np.ndarray
    states: tuple[tuple[SymmetricMatrix, SymmetricMatrix], ...]
    step_size: float

    @property
    def final(self) -> tuple[SymmetricMatrix, SymmetricMatrix]:
        return self.states[-1]


def _spd_floor_check(gamma: np.ndarray, t: float) -> None:
    values = np.linalg.eigvalsh(gamma)
    if values[0] <= SPD_TOL * values[-1]:
        raise LeftCone(t, float(values[0]))


def integrate_geodesic_ode(
    r: SpdMatrix, d: SymmetricMatrix, t_end: float, steps: int
) -> OdeSolution:
    """Integrate gamma'' = gamma' gamma^-1 gamma' by classical RK4.

    This is the geodesic equation gamma'' + Gamma_gamma(gamma', gamma') = 0
    written as a first-order system; the endpoint approximates the closed
    form with error O(step^4).  The gamma component is re-symmetrized each
    step (drift off the symmetric subspace is a floating-point artifact),
    and every step is validated to stay inside the cone.
    """
    if steps < 1:
        raise ValueError(f"need at least one step, got {steps}")
    if d.dim != r.dim:
        raise DimensionMismatch(f"direction has dim {d.dim}, base point has {r.dim}")

    def accel(gamma: np.ndarray, vel: np.ndarray, t: float) -> np.ndarray:
        # the vector field is only defined inside the cone, so every stage
        # evaluation point is validated, not just the accepted steps
        _spd_floor_check(gamma, t)
        return vel @ np.linalg.solve(gamma, vel)

    h = float(t_end) / steps
    times = np.linspace(0.0, float(t_end), steps + 1)
    gamma = np.array(r.entries)
    vel = np.array(d.entries)
    states: list[tuple[SymmetricMatrix, SymmetricMatrix]] = [(r.base, d)]
    for i in range(1, steps + 1):
        t = times[i - 1]
        k1_g, k1_v = vel, accel(gamma, vel, t)
        g2, v2 = gamma + 0.5 * h * k1_g, vel + 0.5 * h * k1_v
        k2_g, k2_v = v2, accel(g2, v2, t + 0.5 * h)
        g3, v3 = gamma + 0.5 * h * k2_g, vel + 0.5 * h * k2_v
        k3_g, k3_v = v3, accel(g3, v3, t + 0.5 * h)
        g4, v4 = gamma + h * k3_g, vel + h * k3_v
        k4_g, k4_v = v4, accel(g4, v4, times[i])
        gamma = gamma + (h / 6.0) * (k1_g + 2.0 * k2_g + 2.0 * k3_g + k4_g)
        gamma = (gamma + gamma.T) / 2.0
        vel = vel + (h / 6.0) * (k1_v + 2.0 * k2_v + 2.0 * k3_v + k4_v)
        _spd_floor_check(gamma, times[i])
        states.append((SymmetricMatrix(gamma), SymmetricMatrix(vel)))
    return OdeSolution(times=times, states=tuple(states), step_size=h)


def fd_path_derivative(
    path: Callable[[float], SymmetricMatrix | SpdMatrix],
    t: float,
    step: float,
    order: int = 1,
) -> SymmetricMatrix:
    """Central finite difference of a matrix-valued path.

    Order 1: (path(t+h) - path(t-h)) / 2h; order 2:
    (path(t+h) - 2 path(t) + path(t-h)) / h^2.
    """
    h = float(step)
    plus = np.asarray(path(t + h), dtype=float)
    minus = np.asarray(path(t - h), dtype=float)
    if order == 1:
        return SymmetricMatrix((plus - minus) / (2.0 * h))
    if order == 2:
        mid = np.asarray(path(t), dtype=float)
        return SymmetricMatrix((plus - 2.0 * mid + minus) / (h * h))
    raise ValueError(f"order must be 1 or 2, got {order}")


def check_inverse_derivative(r: SpdMatrix, d: SymmetricMatrix, step: float) -> VerificationReport:
    """Central-difference check of d/dt (R + t D)^-1 = -R^-1 D R^-1 at t=0.

    The perturbed inverses on the finite-difference side go through LAPACK;
    the analytic side uses the library's spectral inverse.  The tolerance
    C * step^2 with C = 10 (||R^-1|| ||D||)^3 (max-entry norms) is a coarse
    third-derivative bound: loose enough to avoid false failures, tight
    enough to catch sign or transpose mistakes.
    """
    if d.dim != r.dim:
        raise DimensionMismatch(f"direction has dim {d.dim}, base point has {r.dim}")
    h = float(step)
    if h <= 0.0:
        raise ValueError(f"step must be positive, got {step}")
    plus = r.entries + h * d.entries
    minus = r.entries - h * d.entries
    for perturbed in (plus, minus):
        values = np.linalg.eigvalsh(perturbed)
        if values[0] <= SPD_TOL * values[-1]:
            raise NotPositiveDefinite(values[0], values[-1], context="perturbed point")
    fd = (np.linalg.inv(plus) - np.linalg.inv(minus)) / (2.0 * h)
    rinv = r.eigen.apply(lambda v: 1.0 / v)
    analytic = -rinv @ d.entries @ rinv
    residual = float(np.max(np.abs(fd - analytic)))
    scale = float(np.max(np.abs(rinv))) * float(np.max(np.abs(d.entries)))
    tolerance = 10.0 * scale**3 * h * h
    return make_report(
        "inverse_derivative",
        residual,
        tolerance,
        details=f"p={r.dim}, step={step!r}",
    )


def mc_fisher(
    r: SpdMatrix,
    d: SymmetricMatrix,
    n: int,
    seed: int,
    form: str = "score",
) -> tuple[float, float]:
    """Monte Carlo estimate of the Fisher information along D at R.

    form="score" averages score(x)^2 over n model draws; form="hessian"
    averages -second_derivative(x).  Both estimate
    0.5 * tr((R^-1 D)^2) = g_R(D, D).  Returns (estimate, standard error);
    deterministic for a fixed seed.
    """
    if n < 2:
        raise ValueError(f"need at least two draws for a standard error, got n={n}")
    model = GaussianModel(r)
    x = model.sample(n, seed)
    if form == "score":
        values = model.score(d, x) ** 2
    elif form == "hessian":
        values = -model.second_derivative(d, x)
    else:
        raise ValueError(f"unknown estimator form {form!r}; expected 'score' or 'hessian'")
    estimate = float(np.mean(values))
    std_error = float(np.std(values, ddof=1) / math.sqrt(n))
    return estimate, std_error
