"""Zero-mean multivariate Gaussian model over an SPD covariance.

Density p(x; R) = (2 pi)^(-p/2) |R|^(-1/2) exp(-x^T R^-1 x / 2).  The model
caches R^-1, R^1/2 and log det R from the covariance's eigendecomposition.
log_pdf/score/second_derivative accept a single vector of shape (p,) or a
batch of shape (n, p), so the Monte Carlo estimators can stay vectorized.

Sampling is counter-addressable: draw i of the stream keyed by `seed` is
produced by Box-Muller from Philox uniforms at a fixed counter offset, so
disjoint index ranges can be generated independently (even concurrently) and
concatenated without changing the result.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DimensionMismatch
from .symmat import SpdMatrix, SymmetricMatrix

LOG_TWO_PI = math.log(2.0 * math.pi)


def _normal_stream(seed: int, start: int, count: int) -> np.ndarray:
    """Standard normals at flat indices [start, start+count) of stream `seed`.

    Normals come in Box-Muller pairs, pair k consuming uniforms (2k, 2k+1);
    uniform u lives in Philox counter block u // 4.  Jumping the counter and
    discarding the partial block makes any index range reproducible on its
    own.
    """
    if count == 0:
        return np.empty(0)
    first_pair = start // 2
    n_pairs = -((start + count) // -2) - first_pair
    block, offset = divmod(2 * first_pair, 4)
    gen = np.random.Generator(np.random.Philox(key=seed, counter=block))
    u = gen.random(offset + 2 * n_pairs)[offset:].reshape(n_pairs, 2)
    radius = np.sqrt(-2.0 * np.log1p(-u[:, 0]))
    angle = (2.0 * math.pi) * u[:, 1]
    z = np.empty(2 * n_pairs)
    z[0::2] = radius * np.cos(angle)
    z[1::2] = radius * np.sin(angle)
    lo = start - 2 * first_pair
    return z[lo:lo + count]


class GaussianModel:
    """Zero-mean Gaussian with covariance R; all operations are pure."""

    __slots__ = ("_cov", "_inv", "_sqrt", "_log_det")

    def __init__(self, covariance: SpdMatrix):
        covariance = SpdMatrix(covariance)
        self._cov = covariance
        eig = covariance.eigen
        self._inv = eig.apply(lambda v: 1.0 / v)
        self._sqrt = eig.apply(np.sqrt)
        self._log_det = float(np.sum(np.log(eig.values)))

    @property
    def covariance(self) -> SpdMatrix:
        return self._cov

    @property
    def dim(self) -> int:
        return self._cov.dim

    @property
    def log_det(self) -> float:
        return self._log_det

    def _check_x(self, x) -> np.ndarray:
        arr = np.asarray(x, dtype=float)
        if arr.ndim not in (1, 2) or arr.shape[-1] != self.dim:
            raise DimensionMismatch(
                f"sample has shape {arr.shape}, expected (..., {self.dim})"
            )
        return arr

    def _check_direction(self, d: SymmetricMatrix) -> np.ndarray:
        if d.dim != self.dim:
            raise DimensionMismatch(f"direction has dim {d.dim}, model has {self.dim}")
        return d.entries

    @staticmethod
    def _quad(m: np.ndarray, x: np.ndarray):
        if x.ndim == 1:
            return float(x @ m @ x)
        return np.sum((x @ m) * x, axis=1)

    def log_pdf(self, x):
        """log p(x; R) = -(p/2) log 2pi - (1/2) log det R - (1/2) x^T R^-1 x."""
        x = self._check_x(x)
        quad = self._quad(self._inv, x)
        return -0.5 * (self.dim * LOG_TWO_PI + self._log_det + quad)

    def score(self, d: SymmetricMatrix, x):
        """Directional derivative of log p along the covariance direction D:
        -tr(R^-1 D)/2 + x^T R^-1 D R^-1 x / 2."""
        dm = self._check_direction(d)
        x = self._check_x(x)
        rinv_d = self._inv @ dm
        m = rinv_d @ self._inv
        m = (m + m.T) / 2.0
        return -0.5 * float(np.trace(rinv_d)) + 0.5 * self._quad(m, x)

    def second_derivative(self, d: SymmetricMatrix, x):
        """Second directional derivative of log p along D:
        tr((R^-1 D)^2)/2 - x^T R^-1 D R^-1 D R^-1 x."""
        dm = self._check_direction(d)
        x = self._check_x(x)
        rinv_d = self._inv @ dm
        m = rinv_d @ rinv_d @ self._inv
        m = (m + m.T) / 2.0
        return 0.5 * float(np.sum(rinv_d * rinv_d.T)) - self._quad(m, x)

    def sample(self, n: int, seed: int, start: int = 0) -> np.ndarray:
        """n draws x_i = R^1/2 z_i as rows of an (n, p) array.

        `start` indexes into the seed's stream: sample(n, seed, start=k)
        returns rows k..k+n-1 of the infinite stream, so disjoint ranges
        concatenate deterministically.
        """
        if n < 1:
            raise ValueError(f"need at least one draw, got n={n}")
        if start < 0:
            raise ValueError(f"start index must be >= 0, got {start}")
        p = self.dim
        z = _normal_stream(seed, start * p, n * p).reshape(n, p)
        return z @ self._sqrt
