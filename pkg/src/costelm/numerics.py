"""Seeded random draws and the dense linear algebra everything else sits on."""

from __future__ import annotations

import numpy as np
import scipy.linalg as sla
from scipy.linalg import lapack

from .errors import InvalidBoundsError, NotPositiveDefiniteError, ShapeError, SingularMatrixError

# Reciprocal condition numbers below this are treated as singular.
RCOND_FLOOR = np.finfo(np.float64).eps


class Rng:
    """Single-owner random source backed by PCG64.

    PCG64 streams are specified bit-for-bit, so a seed reproduces the same
    draws on every platform numpy supports. All stochastic code in the
    package pulls from one of these, never from global numpy state.
    """

    def __init__(self, seed: int = 0):
        if seed < 0 or seed >= 2**64:
            raise ValueError(f"seed must fit in 64 unsigned bits, got {seed}")
        self.seed = int(seed)
        self._gen = np.random.Generator(np.random.PCG64(self.seed))

    def uniform(self, low=0.0, high=1.0, size=None):
        low_a, high_a = np.asarray(low, dtype=float), np.asarray(high, dtype=float)
        if np.any(low_a > high_a):
            raise InvalidBoundsError(f"low > high ({low} > {high})")
        u = self._gen.random(size)
        out = low_a + (high_a - low_a) * u
        # Rounding in low + span*u may land on high; fold it back into [low, high).
        out = np.where(out >= high_a, low_a, out)
        return float(out) if out.ndim == 0 else out

    def normal(self, size=None):
        x = self._gen.standard_normal(size)
        return x if size is not None else float(x)

    def random(self) -> float:
        return float(self._gen.random())

    def integers(self, high: int, size=None):
        return self._gen.integers(0, high, size=size)

    def permutation(self, k: int) -> np.ndarray:
        if k < 0:
            raise ValueError("permutation length must be non-negative")
        return self._gen.permutation(k)


def rng_uniform(rng: Rng, low: float, high: float) -> float:
    return rng.uniform(low, high)


def rng_normal(rng: Rng) -> float:
    return rng.normal()


def rng_permutation(rng: Rng, k: int) -> np.ndarray:
    return rng.permutation(k)


def solve_linear(A, Y) -> np.ndarray:
    """Solve ``A @ X = Y`` with a row-pivoted LU factorization.

    Raises SingularMatrixError when A is singular to working precision,
    judged by LAPACK's 1-norm reciprocal condition estimate.
    """
    A = np.asarray(A, dtype=float)
    Y = np.asarray(Y, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ShapeError(f"A must be square, got shape {A.shape}")
    if Y.shape[0] != A.shape[0]:
        raise ShapeError(f"row mismatch: A is {A.shape}, Y is {Y.shape}")
    if not np.all(np.isfinite(A)):
        raise SingularMatrixError("matrix has non-finite entries")
    lu, piv, info = lapack.dgetrf(A)
    if info > 0:
        raise SingularMatrixError(f"exactly singular (zero pivot at {info})")
    anorm = np.linalg.norm(A, 1)
    rcond, _ = lapack.dgecon(lu, anorm, norm="1")
    if not rcond > RCOND_FLOOR:
        raise SingularMatrixError(f"singular to working precision (rcond={rcond:.3g})")
    return sla.lu_solve((lu, piv), Y, check_finite=False)


def sym_generalized_eig(Sb, Sw, d: int):
    """Top-``d`` eigenpairs of the symmetric-definite pencil ``Sb w = lam Sw w``.

    Sw is Cholesky-factored, Sb whitened to ``L^-1 Sb L^-T``, and the
    resulting symmetric problem solved. Returns eigenvalues in descending
    order and a ``D x d`` matrix of unit-norm eigenvectors.
    """
    Sb = np.asarray(Sb, dtype=float)
    Sw = np.asarray(Sw, dtype=float)
    if Sb.shape != Sw.shape or Sb.ndim != 2 or Sb.shape[0] != Sb.shape[1]:
        raise ShapeError(f"pencil shapes differ or are not square: {Sb.shape}, {Sw.shape}")
    D = Sb.shape[0]
    if not 1 <= d <= D:
        raise ShapeError(f"d must lie in 1..{D}, got {d}")
    try:
        L = sla.cholesky(Sw, lower=True)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError(str(exc)) from None
    # Whitened Sb, symmetrized against roundoff.
    tmp = sla.solve_triangular(L, Sb, lower=True)
    M = sla.solve_triangular(L, tmp.T, lower=True)
    M = 0.5 * (M + M.T)
    vals, vecs = np.linalg.eigh(M)
    order = np.argsort(vals)[::-1][:d]
    vals = vals[order]
    W = sla.solve_triangular(L.T, vecs[:, order], lower=False)
    W /= np.linalg.norm(W, axis=0)
    return vals, W
