"""Finitely atomic operator-valued measures on the real line.

Evaluation on Borel sets (finite unions of half-open intervals), the
total mass T, scalar control measures, and the kernel block split
K = ker(T) + ran(T).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BlockViolation, InclusionViolation, ZeroAtom
from .linops import DEFAULT_TOL, PsdMatrix, sorted_eigh, validate_psd
from .report import Report


@dataclass(frozen=True)
class BorelSet:
    """A finite disjoint union of half-open intervals (a, b].

    Intervals are normalized: sorted, disjoint, non-adjacent. The empty
    tuple denotes the empty set; endpoints may be +-inf.
    """

    intervals: tuple = ()

    @staticmethod
    def from_intervals(pairs) -> "BorelSet":
        """Normalize arbitrary (a, b] pairs: drop empty, sort, merge."""
        items = []
        for a, b in pairs:
            a, b = float(a), float(b)
            if not a < b:
                continue
            items.append((a, b))
        items.sort()
        merged = []
        for a, b in items:
            if merged and a <= merged[-1][1]:
                merged[-1] = (merged[-1][0], max(merged[-1][1], b))
            else:
                merged.append((a, b))
        return BorelSet(tuple(merged))

    @staticmethod
    def empty() -> "BorelSet":
        return BorelSet(())

    @staticmethod
    def real_line() -> "BorelSet":
        return BorelSet(((-math.inf, math.inf),))

    def contains(self, x: float) -> bool:
        return any(a < x <= b for a, b in self.intervals)

    def union(self, other: "BorelSet") -> "BorelSet":
        return BorelSet.from_intervals(self.intervals + other.intervals)

    @property
    def is_empty(self) -> bool:
        return not self.intervals


@dataclass(frozen=True)
class AtomicOperatorMeasure:
    """Finitely many atoms (lambda_j, M_j) with M_j PSD on C^d."""

    dim: int
    atoms: tuple  # tuple of (float, PsdMatrix), lambdas strictly increasing
    tol: float = DEFAULT_TOL

    @property
    def lambdas(self) -> np.ndarray:
        return np.array([lam for lam, _ in self.atoms])

    @property
    def weights(self):
        return [w for _, w in self.atoms]


def atomic_measure(dim: int, atoms, tol: float = DEFAULT_TOL) -> AtomicOperatorMeasure:
    """Build a validated measure; duplicate lambdas are merged by addition."""
    if dim < 1:
        raise ValueError("dim must be positive")
    merged: dict = {}
    for lam, m in atoms:
        lam = float(lam)
        a = np.asarray(m, dtype=complex)
        if a.shape != (dim, dim):
            raise ValueError(f"atom weight has shape {a.shape}, expected {(dim, dim)}")
        merged[lam] = merged.get(lam, 0) + a
    out = tuple(
        (lam, validate_psd(merged[lam], tol)) for lam in sorted(merged)
    )
    if not any(w.norm2 > 0 for _, w in out):
        raise ValueError("measure needs at least one atom with nonzero weight")
    return AtomicOperatorMeasure(dim, out, tol)


@dataclass(frozen=True)
class ScalarMeasure:
    """Scalar atomic measure aligned index-by-index with a parent measure."""

    atoms: tuple  # tuple of (float, float) with positive masses

    @property
    def lambdas(self) -> np.ndarray:
        return np.array([lam for lam, _ in self.atoms])

    @property
    def masses(self) -> np.ndarray:
        return np.array([m for _, m in self.atoms])


@dataclass(frozen=True)
class KernelSplit:
    """Orthonormal frame K = ker(T) + ran(T) with T compressed to ran(T)."""

    k0_basis: np.ndarray
    k1_basis: np.ndarray
    t1: PsdMatrix


def evaluate(sigma: AtomicOperatorMeasure, b: BorelSet) -> PsdMatrix:
    """Sum of atom weights whose lambda lies in b; zero matrix for empty b."""
    acc = np.zeros((sigma.dim, sigma.dim), dtype=complex)
    for lam, w in sigma.atoms:
        if b.contains(lam):
            acc = acc + w.mat
    return validate_psd(acc, sigma.tol)


def total(sigma: AtomicOperatorMeasure) -> PsdMatrix:
    """Total mass T = Sigma(R); also checks Sigma({atom}) <= T per atom."""
    t = evaluate(sigma, BorelSet.real_line())
    for _, w in sigma.atoms:
        diff = t.mat - w.mat
        wmin = np.linalg.eigvalsh((diff + diff.conj().T) / 2.0)[0]
        if wmin < -sigma.tol * max(1.0, t.norm2):
            raise ValueError("atom weight exceeds total mass; invalid measure")
    return t


def standard_basis(d: int) -> np.ndarray:
    return np.eye(d, dtype=complex)


def control_measure(sigma: AtomicOperatorMeasure, onb=None) -> ScalarMeasure:
    """Scalar control measure mu_j = sum_n 2^{-n} (e_n, M_j e_n).

    Basis vectors are the columns of onb (default: standard basis).
    Atoms with zero weight carry zero mass and are dropped.
    """
    if onb is None:
        onb = standard_basis(sigma.dim)
    onb = np.asarray(onb, dtype=complex)
    coeff = 0.5 ** np.arange(1, sigma.dim + 1)
    out = []
    for lam, w in sigma.atoms:
        diag = np.real(np.einsum("ij,jk,ki->i", onb.conj().T, w.mat, onb))
        mass = float(coeff @ diag)
        if mass <= 0.0:
            if w.norm2 > 0.0:
                raise ZeroAtom(
                    f"atom at {lam} has nonzero weight but mass {mass:.3e}"
                )
            continue
        out.append((lam, mass))
    return ScalarMeasure(tuple(out))


def kernel_split(t: PsdMatrix) -> KernelSplit:
    """Split C^d into ker(T) and ran(T), compressing T to the range."""
    w, v = t.eig
    keep = w > t.cutoff
    k1 = v[:, keep]
    k0 = v[:, ~keep]
    t1 = validate_psd(k1.conj().T @ t.mat @ k1, t.tol)
    return KernelSplit(k0, k1, t1)


def verify_kernel_inclusion(sigma: AtomicOperatorMeasure, split: KernelSplit,
                            tol: float = DEFAULT_TOL) -> Report:
    """Every atom weight must annihilate ker(T); reports the max residual."""
    worst = 0.0
    for lam, w in sigma.atoms:
        if split.k0_basis.shape[1] == 0 or w.norm2 == 0.0:
            continue
        resid = np.linalg.norm(w.mat @ split.k0_basis, 2) / w.norm2
        worst = max(worst, float(resid))
    rep = Report("kernel_inclusion", worst, tol, worst <= tol)
    if not rep.passed:
        raise InclusionViolation(f"kernel residual {worst:.3e} exceeds {tol:.3e}")
    return rep


def block_check(sigma: AtomicOperatorMeasure, split: KernelSplit,
                tol: float = DEFAULT_TOL, probe_sets=()) -> Report:
    """Off-diagonal blocks of Sigma(B) in the ker/ran frame must vanish.

    B ranges over single atoms plus any supplied probe sets.
    """
    sets = [atom_set(sigma, j) for j in range(len(sigma.atoms))]
    sets.extend(probe_sets)
    k0, k1 = split.k0_basis, split.k1_basis
    worst = 0.0
    for b in sets:
        s = evaluate(sigma, b)
        if s.norm2 == 0.0:
            continue
        off = np.linalg.norm(k0.conj().T @ s.mat @ k1)
        corner = np.linalg.norm(k0.conj().T @ s.mat @ k0)
        worst = max(worst, float((off + corner) / s.norm2))
    rep = Report("block_diagonal", worst, tol, worst <= tol)
    if not rep.passed:
        raise BlockViolation(f"off-diagonal residual {worst:.3e} exceeds {tol:.3e}")
    return rep


def atom_set(sigma: AtomicOperatorMeasure, j: int) -> BorelSet:
    """A half-open interval containing exactly atom j of sigma.

    Uses (midpoint to previous atom, lambda_j]; lambdas are strictly
    increasing, so the window isolates the atom.
    """
    lam = float(sigma.atoms[j][0])
    lo = lam - 1.0 if j == 0 else (lam + float(sigma.atoms[j - 1][0])) / 2.0
    return BorelSet.from_intervals([(lo, lam)])
