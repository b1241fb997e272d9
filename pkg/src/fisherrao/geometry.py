"""Fisher information geometry of the SPD cone.

The metric at a point R is g_R(A, B) = 0.5 * tr(R^-1 A R^-1 B); the
Levi-Civita connection has Christoffel form
Gamma_R(A, B) = -0.5 * (A R^-1 B + B R^-1 A); geodesics are
gamma(t) = R^1/2 exp(t W) R^1/2 with generator W = R^-1/2 D R^-1/2.
The geodesic distance comes in a trace form,
d(R, S)^2 = 0.5 * tr[(log R^-1/2 S R^-1/2)^2], and an equivalent
pencil-eigenvalue form, 0.5 * sum_j (log lambda_j)^2 over the generalized
eigenvalues of S - lambda R.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch
from .symmat import EigenDecomposition, SpdMatrix, SymmetricMatrix, _require_spd, sym_eigen

# ||log spectrum|| below this reports a distance of exactly 0 rather than a
# noise-dominated square root.
ZERO_DISTANCE_TOL = 1e-14

_SQRT2 = math.sqrt(2.0)


class DistanceConvention(enum.Enum):
    """Overall scaling of the geodesic distance.

    PAPER carries the 1/2 inside the trace; SMITH drops it (sum of squared
    log pencil eigenvalues), which is exactly sqrt(2) times larger.
    """

    PAPER = "paper"
    SMITH = "smith"

    @property
    def factor(self) -> float:
        return 1.0 if self is DistanceConvention.PAPER else _SQRT2


def _check_same_dim(*dims: int) -> None:
    if len(set(dims)) != 1:
        raise DimensionMismatch(f"operands have different dimensions {dims}")


@dataclass(frozen=True)
class TangentVector:
    """A symmetric direction attached to a base point of the cone."""

    base: SpdMatrix
    direction: SymmetricMatrix

    def __post_init__(self):
        _check_same_dim(self.base.dim, self.direction.dim)

    @property
    def dim(self) -> int:
        return self.base.dim

    def norm(self) -> float:
        """Metric length sqrt(g_R(D, D)) of the vector."""
        return math.sqrt(metric(self.base, self.direction, self.direction))


class Geodesic:
    """The path gamma(t) = R^1/2 exp(t W) R^1/2, W = R^-1/2 D R^-1/2.

    Defined for every real t: the closed form is a congruence of a matrix
    exponential and therefore stays inside the cone.  R^1/2, R^-1/2 and the
    eigendecomposition of W are cached at construction; instances are
    immutable and thread-safe.
    """

    __slots__ = ("_base", "_direction", "_sqrt", "_inv_sqrt", "_w_eigen")

    def __init__(self, base: SpdMatrix, direction: SymmetricMatrix):
        _check_same_dim(base.dim, direction.dim)
        self._base = base
        self._direction = direction
        self._sqrt = base.eigen.apply(np.sqrt)
        self._inv_sqrt = base.eigen.apply(lambda v: 1.0 / np.sqrt(v))
        w = self._inv_sqrt @ direction.entries @ self._inv_sqrt
        self._w_eigen = sym_eigen(SymmetricMatrix(w))

    @classmethod
    def from_tangent(cls, tangent: TangentVector) -> "Geodesic":
        return cls(tangent.base, tangent.direction)

    @property
    def base(self) -> SpdMatrix:
        return self._base

    @property
    def direction(self) -> SymmetricMatrix:
        return self._direction

    @property
    def generator(self) -> SymmetricMatrix:
        """W = R^-1/2 D R^-1/2, the exponent direction."""
        return SymmetricMatrix(self._w_eigen.compose())

    def _exp_generator(self, t: float) -> np.ndarray:
        return self._w_eigen.apply(lambda v: np.exp(t * v))

    def point(self, t: float) -> SpdMatrix:
        """gamma(t), an SPD point for every real t."""
        e = self._exp_generator(float(t))
        return SpdMatrix(self._sqrt @ e @ self._sqrt)

    def velocity(self, t: float) -> SymmetricMatrix:
        """gamma'(t) = D R^-1/2 exp(t W) R^1/2 (a symmetric matrix)."""
        e = self._exp_generator(float(t))
        return SymmetricMatrix(self._direction.entries @ self._inv_sqrt @ e @ self._sqrt)

    def __repr__(self) -> str:
        return f"Geodesic(dim={self._base.dim})"


def metric(at: SpdMatrix, a: SymmetricMatrix, b: SymmetricMatrix) -> float:
    """Fisher metric g_R(A, B) = 0.5 * tr(R^-1 A R^-1 B)."""
    _check_same_dim(at.dim, a.dim, b.dim)
    rinv = at.eigen.apply(lambda v: 1.0 / v)
    ta = rinv @ a.entries
    tb = rinv @ b.entries
    return 0.5 * float(np.sum(ta * tb.T))


def christoffel(at: SpdMatrix, a: SymmetricMatrix, b: SymmetricMatrix) -> SymmetricMatrix:
    """Christoffel form Gamma_R(A, B) = -0.5 * (A R^-1 B + B R^-1 A).

    Symmetric both as a matrix and in the (a, b) arguments.
    """
    _check_same_dim(at.dim, a.dim, b.dim)
    rinv = at.eigen.apply(lambda v: 1.0 / v)
    return SymmetricMatrix(-0.5 * (a.entries @ rinv @ b.entries + b.entries @ rinv @ a.entries))


def geodesic_point(geo: Geodesic, t: float) -> SpdMatrix:
    return geo.point(t)


def geodesic_velocity(geo: Geodesic, t: float) -> SymmetricMatrix:
    return geo.velocity(t)


def exp_map(at: SpdMatrix, v: SymmetricMatrix) -> SpdMatrix:
    """Geodesic endpoint at t=1 shooting from `at` in direction `v`."""
    return Geodesic(at, v).point(1.0)


def _pencil_eigen(r: SpdMatrix, s: SpdMatrix) -> tuple[np.ndarray, EigenDecomposition]:
    """Eigendecomposition of W = R^-1/2 S R^-1/2 plus R^1/2, validated positive."""
    _check_same_dim(r.dim, s.dim)
    r_sqrt = r.eigen.apply(np.sqrt)
    r_inv_sqrt = r.eigen.apply(lambda v: 1.0 / np.sqrt(v))
    w = SymmetricMatrix(r_inv_sqrt @ s.entries @ r_inv_sqrt)
    eig = sym_eigen(w)
    _require_spd(eig.values, context="pencil of the pair")
    return r_sqrt, eig


def log_map(from_point: SpdMatrix, to_point: SpdMatrix) -> SymmetricMatrix:
    """The direction D = R^1/2 log(R^-1/2 S R^-1/2) R^1/2 with exp_map(R, D) = S."""
    r_sqrt, eig = _pencil_eigen(from_point, to_point)
    return SymmetricMatrix(r_sqrt @ eig.apply(np.log) @ r_sqrt)


def pencil_eigenvalues(r: SpdMatrix, s: SpdMatrix) -> np.ndarray:
    """Generalized eigenvalues of the pencil S - lambda R, ascending.

    Computed as the (all positive) eigenvalues of the symmetric matrix
    R^-1/2 S R^-1/2, whose spectrum coincides with the pencil roots.
    """
    _, eig = _pencil_eigen(r, s)
    return np.array(eig.values)


def distance(
    r: SpdMatrix,
    s: SpdMatrix,
    convention: DistanceConvention | str = DistanceConvention.PAPER,
    method: str = "trace",
) -> float:
    """Geodesic distance between two SPD matrices.

    `method` selects the computation route: "trace" forms the matrix
    logarithm L = log(R^-1/2 S R^-1/2) and evaluates
    sqrt(0.5 * tr(L^2)); "pencil" sums squared logs of the pencil
    eigenvalues.  The two agree to high accuracy and exist as mutual
    cross-checks.
    """
    convention = DistanceConvention(convention)
    _, eig = _pencil_eigen(r, s)
    log_values = np.log(eig.values)
    if float(np.max(np.abs(log_values))) < ZERO_DISTANCE_TOL:
        return 0.0
    if method == "pencil":
        squared = 0.5 * float(np.sum(log_values**2))
    elif method == "trace":
        log_mat = eig.apply(np.log)
        squared = 0.5 * float(np.trace(log_mat @ log_mat))
    else:
        raise ValueError(f"unknown distance method {method!r}; expected 'trace' or 'pencil'")
    return convention.factor * math.sqrt(max(squared, 0.0))
