"""Matrix-valued Herglotz functions in Stieltjes and Nevanlinna form.

Evaluation on the upper half plane, recovery of the linear coefficients
from boundary samples, Stieltjes inversion of atomic measures, and a
positivity scan of the imaginary part.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LowerHalfPlane, NonConvergent
from .linops import DEFAULT_TOL, PsdMatrix, as_complex_matrix, validate_psd
from .opmeasure import AtomicOperatorMeasure
from .report import Report

STIELTJES = "stieltjes"
NEVANLINNA = "nevanlinna"


@dataclass(frozen=True)
class MatrixHerglotz:
    """m(z) = C + D z + sum_j W_j [1/(lambda_j - z) - lambda_j/(1+lambda_j^2)].

    With form="stieltjes" the linear terms and the lambda/(1+lambda^2)
    subtraction are dropped, leaving the plain finite-measure transform.
    """

    c: np.ndarray
    d: PsdMatrix
    omega: AtomicOperatorMeasure
    form: str = NEVANLINNA

    @property
    def size(self) -> int:
        return self.c.shape[0]


def make_herglotz(c, d, omega: AtomicOperatorMeasure, form: str = NEVANLINNA,
                  tol: float = DEFAULT_TOL) -> MatrixHerglotz:
    c = as_complex_matrix(c)
    if np.linalg.norm(c - c.conj().T) > tol * max(1.0, np.linalg.norm(c)):
        raise ValueError("C must be Hermitian")
    dpsd = d if isinstance(d, PsdMatrix) else validate_psd(d, tol)
    if form not in (STIELTJES, NEVANLINNA):
        raise ValueError(f"unknown form {form!r}")
    if c.shape[0] != omega.dim or dpsd.dim != omega.dim:
        raise ValueError("C, D and the measure must share one dimension")
    return MatrixHerglotz((c + c.conj().T) / 2.0, dpsd, omega, form)


def herglotz_eval(h: MatrixHerglotz, z: complex) -> np.ndarray:
    """Evaluate m(z) for Im z > 0."""
    if not z.imag > 0.0:
        raise LowerHalfPlane("z must lie in the open upper half plane")
    return _eval_any(h, z)


def _eval_any(h: MatrixHerglotz, z: complex) -> np.ndarray:
    if h.form == STIELTJES:
        acc = np.zeros((h.size, h.size), dtype=complex)
        for lam, w in h.omega.atoms:
            acc = acc + w.mat / (lam - z)
        return acc
    acc = h.c + h.d.mat * z
    for lam, w in h.omega.atoms:
        acc = acc + w.mat * (1.0 / (lam - z) - lam / (1.0 + lam * lam))
    return acc


def herglotz_eval_reflected(h: MatrixHerglotz, z: complex) -> np.ndarray:
    """Extension to the lower half plane by m(z-bar) = m(z)^H."""
    if z.imag > 0.0:
        return herglotz_eval(h, z)
    if z.imag < 0.0:
        return herglotz_eval(h, np.conj(z)).conj().T
    raise LowerHalfPlane("z must lie off the real axis")


def imag_part(m: np.ndarray) -> np.ndarray:
    return (m - m.conj().T) / 2j


def recover_cd(evaluator, tol: float = 1e-6):
    """Recover (C, D) from boundary samples of a Nevanlinna-form function.

    C is the real part at z = i (the integral term is purely imaginary
    there); D is the extrapolated limit of m(i eta)/(i eta) over
    eta in {1e2, 1e3, 1e4}, Richardson-corrected for the 1/eta tail.
    """
    etas = (1e2, 1e3, 1e4)
    samples = [evaluator(1j * eta) / (1j * eta) for eta in etas]
    # first Richardson stage kills the 1/eta tail, second the 1/eta^2 tail
    first = [(10.0 * samples[i + 1] - samples[i]) / 9.0 for i in range(2)]
    second = (100.0 * first[1] - first[0]) / 99.0
    if np.linalg.norm(second - first[1]) > 10 * tol * max(1.0, np.linalg.norm(second)):
        raise NonConvergent("D extrapolation did not settle within tolerance")
    d = (second + second.conj().T) / 2.0
    mi = evaluator(1j)
    c = (mi + mi.conj().T) / 2.0
    return np.asarray(c, dtype=complex), np.asarray(d, dtype=complex)


def stieltjes_invert(evaluator, lambda0: float,
                     eps_ladder=(1e-3, 1e-4, 1e-5, 1e-6, 1e-7),
                     tol: float = 1e-6) -> np.ndarray:
    """Atom weight at lambda0 via the limit of eps * Im m(lambda0 + i eps).

    The off-atom contributions decay like eps^2; the last two ladder
    values are Richardson-extrapolated in eps^2 and checked for
    convergence.
    """
    vals = [eps * imag_part(evaluator(lambda0 + 1j * eps))
            for eps in eps_ladder]
    e1, e2 = eps_ladder[-2], eps_ladder[-1]
    r = (e2 / e1) ** 2
    extr = (vals[-1] - r * vals[-2]) / (1.0 - r)
    if np.linalg.norm(vals[-1] - vals[-2]) > tol * max(1.0, np.linalg.norm(vals[-1])):
        raise NonConvergent("Stieltjes inversion ladder did not settle")
    return (extr + extr.conj().T) / 2.0


def herglotz_scan(evaluator, grid, tol: float = 1e-10) -> Report:
    """Minimum eigenvalue of Im m(z) over a grid in the upper half plane."""
    worst = np.inf
    for z in grid:
        w = np.linalg.eigvalsh(imag_part(evaluator(z)))
        if w.size:
            worst = min(worst, float(w[0]))
    passed = worst >= -tol
    rep = Report("herglotz_positivity", float(-worst if worst < 0 else 0.0),
                 tol, passed, details={"min_imag_eigenvalue": float(worst)})
    return rep
