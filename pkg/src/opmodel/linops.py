"""Dense Hermitian/PSD matrix calculus shared by every other module.

Validation, rank-revealing factorization, fractional and pseudo-inverse
powers, Heinz-type contraction bounds, and the seminorm quotient primitive.
All operations are pure functions on immutable values.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import NotHermitian, NotPsd, OrderViolation

DEFAULT_TOL = 1e-10


def as_complex_matrix(m) -> np.ndarray:
    """Coerce input to a finite 2-d complex ndarray."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise ValueError(f"expected a matrix, got ndim={a.ndim}")
    if not np.all(np.isfinite(a.view(float))):
        raise ValueError("matrix has non-finite entries")
    return a


def sorted_eigh(a: np.ndarray):
    """Hermitian eigendecomposition with a deterministic convention.

    Eigenvalues descending; each eigenvector scaled so its first
    component of non-negligible modulus is positive real.
    """
    w, v = np.linalg.eigh(a)
    order = np.argsort(-w, kind="stable")
    w = w[order]
    v = v[:, order]
    for j in range(v.shape[1]):
        col = v[:, j]
        mags = np.abs(col)
        k = int(np.argmax(mags > 1e-8 * mags.max())) if mags.max() > 0 else 0
        if mags[k] > 0:
            v[:, j] = col * (np.conj(col[k]) / mags[k])
    return w, v


@dataclass(frozen=True)
class PsdMatrix:
    """A validated positive semidefinite matrix with its tolerance."""

    mat: np.ndarray
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        self.mat.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    @cached_property
    def eig(self):
        return sorted_eigh(self.mat)

    @cached_property
    def norm2(self) -> float:
        w, _ = self.eig
        return float(np.max(np.abs(w))) if w.size else 0.0

    @property
    def cutoff(self) -> float:
        return self.tol * self.norm2

    def __array__(self, dtype=None, copy=None):
        return np.array(self.mat, dtype=dtype)


@dataclass(frozen=True)
class RankFactorization:
    """Rank-revealing factorization M = factor^H factor of a PSD matrix.

    `factor` has shape (rank, d) with full row rank; `kernel_basis` has
    orthonormal columns spanning the numerical kernel.
    """

    rank: int
    factor: np.ndarray
    kernel_basis: np.ndarray

    def coords(self, x: np.ndarray) -> np.ndarray:
        """Quotient coordinates of x, so that (x, M y) = coords(x)^H coords(y)."""
        return self.factor @ x

    @cached_property
    def factor_pinv(self) -> np.ndarray:
        return np.linalg.pinv(self.factor)


def validate_psd(m, tol: float = DEFAULT_TOL) -> PsdMatrix:
    """Check Hermiticity and nonnegativity of m, returning a PsdMatrix.

    The matrix is hermitized via (m + m^H)/2 before the eigenvalue test.
    """
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    a = as_complex_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"matrix is not square: {a.shape}")
    fro = np.linalg.norm(a)
    asym = np.linalg.norm(a - a.conj().T)
    if asym > tol * max(1.0, fro):
        raise NotHermitian(f"asymmetry {asym:.3e} exceeds tol*max(1,||M||_F)")
    p = PsdMatrix((a + a.conj().T) / 2.0, tol)
    w, _ = p.eig
    if w.size and w[-1] < -tol * p.norm2:
        raise NotPsd(f"eigenvalue {w[-1]:.3e} below -tol*||M||_2")
    return p


def psd_factorize(m: PsdMatrix) -> RankFactorization:
    """Rank-revealing factorization via eigendecomposition.

    Eigenvalues at or below tol*||M||_2 count as zero; the discarded
    eigenvectors become the kernel basis.
    """
    w, v = m.eig
    keep = w > m.cutoff
    r = int(np.count_nonzero(keep))
    factor = np.sqrt(w[keep])[:, None] * v[:, keep].conj().T
    kernel = v[:, ~keep]
    return RankFactorization(r, factor, kernel)


def seminorm_quotient(gram: PsdMatrix) -> RankFactorization:
    """Quotient of a semi-normed finite-dimensional space by its null vectors.

    Identical contract to psd_factorize; exposed separately so the fiber
    construction and the metric-completion module share one primitive.
    """
    return psd_factorize(gram)


def frac_power(m: PsdMatrix, alpha: float) -> PsdMatrix:
    """M^alpha for alpha in (0, 1]; zero eigenvalues map to zero."""
    if not 0.0 < alpha <= 1.0:
        raise ValueError("alpha must lie in (0, 1]")
    w, v = m.eig
    wa = np.where(w > m.cutoff, np.maximum(w, 0.0) ** alpha, 0.0)
    return PsdMatrix((v * wa) @ v.conj().T, m.tol)


def pinv_power(m: PsdMatrix, alpha: float) -> PsdMatrix:
    """M^{-alpha} on ran(M), zero on ker(M), for alpha in (0, 1]."""
    if not 0.0 < alpha <= 1.0:
        raise ValueError("alpha must lie in (0, 1]")
    w, v = m.eig
    wa = np.where(w > m.cutoff, 1.0, 0.0)
    wa = np.divide(wa, np.where(w > m.cutoff, w, 1.0) ** alpha)
    return PsdMatrix((v * wa) @ v.conj().T, m.tol)


def range_projector(m: PsdMatrix) -> np.ndarray:
    """Orthogonal projector onto ran(M)."""
    w, v = m.eig
    keep = v[:, w > m.cutoff]
    return keep @ keep.conj().T


def _check_order(f: PsdMatrix, g: PsdMatrix):
    if f.dim != g.dim:
        raise ValueError("F and G must have the same dimension")
    diff = g.mat - f.mat
    w = np.linalg.eigvalsh((diff + diff.conj().T) / 2.0)
    tol = max(f.tol, g.tol)
    if w.size and w[0] < -tol * max(1.0, g.norm2):
        raise OrderViolation(f"G - F has eigenvalue {w[0]:.3e} below -tol")


def heinz_contraction(f: PsdMatrix, g: PsdMatrix, alpha: float) -> float:
    """Largest singular value of G^{-alpha} F^{alpha} on ran(G).

    Requires 0 <= F <= G and alpha in (0, 1/2]; the returned value is
    bounded by 1 up to roundoff for valid inputs.
    """
    if not 0.0 < alpha <= 0.5:
        raise ValueError("alpha must lie in (0, 1/2]")
    _check_order(f, g)
    a = pinv_power(g, alpha).mat @ frac_power(f, alpha).mat
    return float(np.linalg.norm(a, 2))


def range_inclusion(f: PsdMatrix, g: PsdMatrix, alpha: float,
                    tol: float = DEFAULT_TOL) -> bool:
    """Whether ran(F^alpha) lies inside ran(G^alpha), given 0 <= F <= G.

    Tested as a projector residual: || (I - P_G) F^alpha ||_F against
    tol * ||F^alpha||_F, with P_G the projector onto ran(G).
    """
    if not 0.0 < alpha <= 0.5:
        raise ValueError("alpha must lie in (0, 1/2]")
    _check_order(f, g)
    fa = frac_power(f, alpha).mat
    scale = np.linalg.norm(fa)
    if scale == 0.0:
        return True
    p = range_projector(g)
    resid = np.linalg.norm(fa - p @ fa)
    return bool(resid <= tol * scale)
