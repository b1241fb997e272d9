"""Symmetric and SPD matrix values with spectral matrix functions.

Everything is eigendecomposition-based: a cyclic Jacobi solver produces an
orthonormal eigenbasis, and exp/log/sqrt/inv_sqrt/inv are applied to the
eigenvalues in that basis.  All values are immutable and safe to share
between threads; the SPD eigendecomposition cache is populated once at
construction.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .errors import ConvergenceFailure, DimensionMismatch, NotPositiveDefinite

# Tolerances, calibrated for double precision at dimensions up to ~50.
ASYM_TOL = 1e-8  # relative asymmetry accepted at construction
SPD_TOL = 1e-12  # relative eigenvalue floor for positive definiteness
ORTHO_TOL = 1e-10  # max-entry bound on |Q^T Q - I|
RECOMPOSITION_TOL = 1e-10  # max-entry bound on |Q diag Q^T - A|, relative
ROUNDTRIP_TOL = 1e-10  # documented round-trip guarantee of matrix functions

MAX_SWEEPS = 100  # Jacobi sweep budget before ConvergenceFailure
_OFF_DIAG_TARGET = 1e-14  # off-diagonal Frobenius mass, relative to ||A||_F


def _as_square(entries) -> np.ndarray:
    a = np.array(entries, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] < 1:
        raise DimensionMismatch("matrix dimension must be at least 1")
    return a


class SymmetricMatrix:
    """Immutable real symmetric p x p matrix; the tangent-vector type.

    Construction symmetrizes via (A + A^T)/2.  Input whose asymmetry exceeds
    ASYM_TOL times the largest entry magnitude is rejected: that is user
    error, not floating-point drift.
    """

    __slots__ = ("_entries",)

    def __init__(self, entries):
        a = _as_square(entries)
        if not np.all(np.isfinite(a)):
            raise ValueError("matrix entries must be finite")
        gap = float(np.max(np.abs(a - a.T)))
        scale = float(np.max(np.abs(a)))
        if gap > ASYM_TOL * scale:
            raise ValueError(
                f"matrix is asymmetric beyond tolerance: max |a_ij - a_ji| = {gap!r}"
                f" exceeds {ASYM_TOL} * max-entry ({scale!r})"
            )
        sym = (a + a.T) / 2.0
        sym.flags.writeable = False
        self._entries = sym

    @property
    def entries(self) -> np.ndarray:
        """Read-only (p, p) array of entries."""
        return self._entries

    @property
    def dim(self) -> int:
        return self._entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        if dtype is not None:
            return self._entries.astype(dtype)
        return self._entries

    def __repr__(self) -> str:
        return f"SymmetricMatrix(dim={self.dim})"


class EigenDecomposition:
    """Orthonormal eigenvectors (columns of Q) and ascending eigenvalues."""

    __slots__ = ("_vectors", "_values")

    def __init__(self, vectors, values):
        q = np.array(vectors, dtype=float)
        v = np.array(values, dtype=float)
        n = v.shape[0]
        if q.shape != (n, n) or v.ndim != 1:
            raise DimensionMismatch(
                f"inconsistent eigendecomposition shapes {q.shape} / {v.shape}"
            )
        ortho_gap = float(np.max(np.abs(q.T @ q - np.eye(n))))
        if ortho_gap > ORTHO_TOL:
            raise ValueError(f"eigenvector matrix is not orthogonal: |Q^T Q - I| = {ortho_gap!r}")
        q.flags.writeable = False
        v.flags.writeable = False
        self._vectors = q
        self._values = v

    @property
    def vectors(self) -> np.ndarray:
        return self._vectors

    @property
    def values(self) -> np.ndarray:
        return self._values

    def apply(self, fn: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
        """Q diag(fn(values)) Q^T as a symmetrized raw array."""
        q = self._vectors
        out = (q * fn(self._values)) @ q.T
        return (out + out.T) / 2.0

    def compose(self) -> np.ndarray:
        """Reassemble Q diag(values) Q^T."""
        return self.apply(lambda v: v)


def sym_eigen(m: SymmetricMatrix | "SpdMatrix") -> EigenDecomposition:
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Eigenvalues come back ascending (ties keep the order the sweep produced;
    all downstream matrix functions are basis-invariant, so tie order cannot
    affect results).  Raises ConvergenceFailure if the off-diagonal mass has
    not vanished after MAX_SWEEPS sweeps.
    """
    if isinstance(m, SpdMatrix):
        return m.eigen
    a = np.array(m.entries)
    n = a.shape[0]
    q = np.eye(n)
    if n > 1:
        _jacobi_diagonalize(a, q)
    values = np.diag(a).copy()
    order = np.argsort(values, kind="stable")
    return EigenDecomposition(q[:, order], values[order])


def _jacobi_diagonalize(a: np.ndarray, q: np.ndarray) -> None:
    """Run threshold-skipping cyclic Jacobi sweeps in place on (a, q)."""
    n = a.shape[0]
    fro = math.sqrt(float(np.sum(a * a)))
    if fro == 0.0:
        return
    target = _OFF_DIAG_TARGET * fro
    skip = target / (2.0 * n)
    upper = np.triu_indices(n, 1)
    for _ in range(MAX_SWEEPS):
        off = math.sqrt(2.0 * float(np.sum(a[upper] ** 2)))
        if off <= target:
            return
        for k in range(n - 1):
            for l in range(k + 1, n):
                akl = a[k, l]
                if abs(akl) <= skip:
                    continue
                akk, all_ = a[k, k], a[l, l]
                theta = (all_ - akk) / (2.0 * akl)
                if abs(theta) > 1e10:
                    t = 1.0 / (2.0 * theta)
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c

                col_k = a[:, k].copy()
                col_l = a[:, l].copy()
                a[:, k] = c * col_k - s * col_l
                a[:, l] = s * col_k + c * col_l
                row_k = a[k, :].copy()
                row_l = a[l, :].copy()
                a[k, :] = c * row_k - s * row_l
                a[l, :] = s * row_k + c * row_l
                # exact zero at the annihilated pair, high-accuracy diagonal update
                a[k, l] = a[l, k] = 0.0
                a[k, k] = akk - t * akl
                a[l, l] = all_ + t * akl

                q_k = q[:, k].copy()
                q_l = q[:, l].copy()
                q[:, k] = c * q_k - s * q_l
                q[:, l] = s * q_k + c * q_l
    raise ConvergenceFailure(
        f"Jacobi eigensolver did not converge within {MAX_SWEEPS} sweeps (p={n})"
    )


_SCALAR_FUNCTIONS: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "exp": np.exp,
    "log": np.log,
    "sqrt": np.sqrt,
    "inv_sqrt": lambda v: 1.0 / np.sqrt(v),
    "inv": lambda v: 1.0 / v,
}
_NEEDS_SPD = frozenset({"log", "sqrt", "inv_sqrt", "inv"})


def _require_spd(values: np.ndarray, context: str = "") -> None:
    lam_min = float(values[0])
    lam_max = float(values[-1])
    if lam_min <= SPD_TOL * lam_max:
        raise NotPositiveDefinite(lam_min, lam_max, context)


def matrix_function(m: SymmetricMatrix | "SpdMatrix", kind: str) -> SymmetricMatrix:
    """Spectral matrix function Q diag(f(lambda)) Q^T.

    `kind` is one of exp, log, sqrt, inv_sqrt, inv.  The principal branch of
    log is well defined because all functions except exp require the input to
    be SPD (positive eigenvalues), enforced against the SPD_TOL floor.
    """
    try:
        fn = _SCALAR_FUNCTIONS[kind]
    except KeyError:
        raise ValueError(f"unknown matrix function {kind!r}; expected one of "
                         f"{sorted(_SCALAR_FUNCTIONS)}") from None
    eig = sym_eigen(m)
    if kind in _NEEDS_SPD:
        _require_spd(eig.values, context=f"matrix_function({kind!r})")
    return SymmetricMatrix(eig.apply(fn))


def congruence(m: SymmetricMatrix | "SpdMatrix", g) -> SymmetricMatrix:
    """g @ m @ g^T, symmetric by construction.

    SPD input with invertible g yields an SPD result (wrap it in SpdMatrix to
    revalidate if that matters downstream).
    """
    arr = m.entries if isinstance(m, (SymmetricMatrix, SpdMatrix)) else _as_square(m)
    g = np.asarray(g, dtype=float)
    if g.shape != arr.shape:
        raise DimensionMismatch(f"congruence factor has shape {g.shape}, matrix {arr.shape}")
    return SymmetricMatrix(g @ arr @ g.T)


class SpdMatrix:
    """Symmetric positive-definite matrix: a point of the open cone.

    The eigendecomposition is computed, validated and cached at construction
    (lambda_min must exceed SPD_TOL * lambda_max), so the spectral matrix
    functions below never re-decompose.
    """

    __slots__ = ("_base", "_eigen")

    def __init__(self, base):
        if isinstance(base, SpdMatrix):
            self._base = base._base
            self._eigen = base._eigen
            return
        base = base if isinstance(base, SymmetricMatrix) else SymmetricMatrix(base)
        eig = sym_eigen(base)
        _require_spd(eig.values)
        gap = float(np.max(np.abs(eig.compose() - base.entries)))
        scale = max(1.0, float(np.max(np.abs(base.entries))))
        if gap > RECOMPOSITION_TOL * scale:
            raise ValueError(f"eigendecomposition failed to reconstruct the matrix: gap {gap!r}")
        self._base = base
        self._eigen = eig

    @property
    def base(self) -> SymmetricMatrix:
        return self._base

    @property
    def entries(self) -> np.ndarray:
        return self._base.entries

    @property
    def dim(self) -> int:
        return self._base.dim

    @property
    def eigen(self) -> EigenDecomposition:
        return self._eigen

    def function(self, kind: str) -> SymmetricMatrix:
        """Spectral matrix function reusing the cached eigendecomposition."""
        try:
            fn = _SCALAR_FUNCTIONS[kind]
        except KeyError:
            raise ValueError(f"unknown matrix function {kind!r}") from None
        return SymmetricMatrix(self._eigen.apply(fn))

    def sqrt(self) -> SymmetricMatrix:
        return self.function("sqrt")

    def inv_sqrt(self) -> SymmetricMatrix:
        return self.function("inv_sqrt")

    def inv(self) -> SymmetricMatrix:
        return self.function("inv")

    def log(self) -> SymmetricMatrix:
        return self.function("log")

    def log_det(self) -> float:
        return float(np.sum(np.log(self._eigen.values)))

    def __array__(self, dtype=None, copy=None):
        return self._base.__array__(dtype)

    def __repr__(self) -> str:
        return f"SpdMatrix(dim={self.dim})"
