"""Finite-dimensional self-adjoint perturbations H_L = H0 + K L K^H.

Spectral families with eigenvalue clustering, the induced operator
measure on the coupling space, the m-function in resolvent and Stieltjes
form, the model unitary diagonalizing H_L, and Weyl-Titchmarsh operators
for a pair (H, N).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateCoupling, IdentityViolation, RealShift
from .linops import DEFAULT_TOL, as_complex_matrix, sorted_eigh
from .model_space import ModelSpace, build_model, multiplication_operator
from .opmeasure import AtomicOperatorMeasure, atomic_measure
from .report import Report


@dataclass(frozen=True)
class PerturbationInstance:
    """Triple (H0, K, L) defining H_L = H0 + K L K^H."""

    h0: np.ndarray  # n x n Hermitian
    kmap: np.ndarray  # n x k
    ell: np.ndarray  # k x k Hermitian

    @property
    def n(self) -> int:
        return self.h0.shape[0]

    @property
    def k(self) -> int:
        return self.kmap.shape[1]


def make_instance(h0, kmap, ell, tol: float = DEFAULT_TOL) -> PerturbationInstance:
    h0 = as_complex_matrix(h0)
    kmap = as_complex_matrix(kmap)
    ell = as_complex_matrix(ell)
    n, k = kmap.shape
    if h0.shape != (n, n) or ell.shape != (k, k):
        raise ValueError("shapes of (h0, k, l) do not conform")
    if n < k or k < 1:
        raise ValueError("need n >= k >= 1")
    for name, m in (("h0", h0), ("l", ell)):
        if np.linalg.norm(m - m.conj().T) > tol * max(1.0, np.linalg.norm(m)):
            raise ValueError(f"{name} is not Hermitian within tol")
    return PerturbationInstance(h0, kmap, ell)


@dataclass(frozen=True)
class SpectralFamily:
    """Clustered eigenvalues with orthogonal spectral projectors."""

    eigenvalues: np.ndarray
    projectors: tuple  # tuple of ndarray, summing to the identity


def build_hl(inst: PerturbationInstance) -> np.ndarray:
    h = inst.h0 + inst.kmap @ inst.ell @ inst.kmap.conj().T
    return (h + h.conj().T) / 2.0


def spectral_family(h, tol: float = DEFAULT_TOL) -> SpectralFamily:
    """Exact finite-dimensional spectral family, merging near-degenerate
    eigenvalues into single projectors (gap below tol * ||H||_2)."""
    h = as_complex_matrix(h)
    h = (h + h.conj().T) / 2.0
    w, v = np.linalg.eigh(h)
    scale = max(float(np.max(np.abs(w))) if w.size else 0.0, 1.0)
    lams, projs = [], []
    i = 0
    n = w.size
    while i < n:
        j = i + 1
        while j < n and w[j] - w[j - 1] <= tol * scale:
            j += 1
        block = v[:, i:j]
        lams.append(float(np.mean(w[i:j])))
        projs.append(block @ block.conj().T)
        i = j
    return SpectralFamily(np.array(lams), tuple(projs))


def omega_measure(inst: PerturbationInstance,
                  tol: float = DEFAULT_TOL) -> AtomicOperatorMeasure:
    """Atoms (lambda_i, K^H P_i K); total mass is K^H K."""
    if np.linalg.norm(inst.kmap) == 0.0:
        raise DegenerateCoupling("coupling map K is zero; measure has no mass")
    fam = spectral_family(build_hl(inst), tol)
    atoms = [(lam, inst.kmap.conj().T @ p @ inst.kmap)
             for lam, p in zip(fam.eigenvalues, fam.projectors)]
    return atomic_measure(inst.k, atoms, tol)


def m_function(inst: PerturbationInstance, z: complex):
    """Resolvent form K^H (H_L - z)^{-1} K and its Stieltjes-sum twin."""
    if z.imag == 0.0:
        raise RealShift("z must lie off the real axis")
    hl = build_hl(inst)
    n = inst.n
    direct = inst.kmap.conj().T @ np.linalg.solve(hl - z * np.eye(n), inst.kmap)
    omega = omega_measure(inst)
    stieltjes = sum(w.mat / (lam - z) for lam, w in omega.atoms)
    return direct, stieltjes


def generating_check(inst: PerturbationInstance, tol: float = DEFAULT_TOL):
    """Span of the spectral orbits {P_i K e_n}; generating iff it is C^n."""
    fam = spectral_family(build_hl(inst), tol)
    cols = np.hstack([p @ inst.kmap for p in fam.projectors])
    u, s, _ = np.linalg.svd(cols, full_matrices=False)
    r = int(np.count_nonzero(s > tol * max(s[0] if s.size else 0.0, 1.0)))
    basis = u[:, :r]
    return basis, r == inst.n


def model_unitary(inst: PerturbationInstance, tol: float = DEFAULT_TOL):
    """Isometry from the model space of Omega_L into the state space.

    Maps the fiber-coordinate basis via chi_{atom} e_n -> E(atom) K e_n.
    Returns (U, model_space); U has orthonormal columns, and is square
    exactly when the instance is generating.
    """
    omega = omega_measure(inst, tol)
    ms = build_model(omega, tol=tol)
    fam = spectral_family(build_hl(inst), tol)
    proj = {lam: p for lam, p in zip(fam.eigenvalues, fam.projectors)}
    blocks = []
    for fb in ms.fibers:
        p = proj[fb.lam]
        blocks.append((p @ inst.kmap @ fb.quotient.factor_pinv)
                      / np.sqrt(fb.mass))
    u = np.hstack(blocks) if blocks else np.zeros((inst.n, 0), dtype=complex)
    return u, ms


def verify_diagonalization(inst: PerturbationInstance,
                           tol: float = 1e-9) -> Report:
    """U^H H_L U equals multiplication by lambda in fiber coordinates."""
    u, ms = model_unitary(inst)
    hl = build_hl(inst)
    h_hat, family = multiplication_operator(ms)
    scale = max(float(np.linalg.norm(hl)), 1e-300)
    resid = float(np.linalg.norm(u.conj().T @ hl @ u - h_hat) / scale)
    # pulled-back spectral family must be the step projector family
    fam = spectral_family(hl)
    for lam in fam.eigenvalues:
        e_pull = u.conj().T @ sum(
            p for l, p in zip(fam.eigenvalues, fam.projectors) if l <= lam
        ) @ u
        resid = max(resid, float(np.linalg.norm(e_pull - family(lam)) /
                                 max(np.linalg.norm(family(lam)), 1.0)))
    _, generating = generating_check(inst)
    rep = Report("diagonalization", resid, tol, resid <= tol,
                 details={"generated_dim": u.shape[1], "n": inst.n,
                          "generating": bool(generating)})
    if not rep.passed:
        raise IdentityViolation(f"diagonalization residual {resid:.3e} exceeds {tol:.3e}")
    return rep


def weyl_titchmarsh(h, nbasis, z: complex) -> np.ndarray:
    """M(z) = z I_N + (1 + z^2) P_N (H - z)^{-1} P_N restricted to N.

    nbasis holds orthonormal columns spanning N; the result is expressed
    in those coordinates.
    """
    if z.imag == 0.0:
        raise RealShift("z must lie off the real axis")
    h = as_complex_matrix(h)
    nb = np.asarray(nbasis, dtype=complex)
    if nb.ndim != 2:
        nb = nb.reshape(h.shape[0], -1)
    k = nb.shape[1]
    if k == 0:
        return np.zeros((0, 0), dtype=complex)
    res = np.linalg.solve(h - z * np.eye(h.shape[0]), nb)
    return z * np.eye(k) + (1.0 + z * z) * (nb.conj().T @ res)


def weyl_titchmarsh_measure(h, nbasis, tol: float = DEFAULT_TOL) -> AtomicOperatorMeasure:
    """Atoms (lambda_i, (1+lambda_i^2) P_N E_i P_N|_N) for the pair (H, N).

    Normalized so the (1+lambda^2)^{-1}-integral is the identity on N.
    """
    nb = np.asarray(nbasis, dtype=complex)
    fam = spectral_family(h, tol)
    atoms = [(lam, (1.0 + lam * lam) * (nb.conj().T @ p @ nb))
             for lam, p in zip(fam.eigenvalues, fam.projectors)]
    return atomic_measure(nb.shape[1], atoms, tol)
