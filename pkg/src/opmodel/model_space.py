"""The model space L^2(R; d mu; M_Sigma) for a finitely atomic measure.

Fibers are quotients of C^d by the kernel of the per-atom Radon-Nikodym
Gram matrix Phi_j = M_j / mu_j. The module provides the constant-family
embedding, the intertwining operators S(B), the multiplication operator
with its spectral family, the step-function isometry, and the uniqueness
and density checks that tie the construction together.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (DimensionMismatch, IdentityViolation, UniquenessViolation)
from .linops import (DEFAULT_TOL, PsdMatrix, RankFactorization, frac_power,
                     pinv_power, seminorm_quotient, validate_psd)
from .opmeasure import (AtomicOperatorMeasure, BorelSet, KernelSplit,
                        ScalarMeasure, control_measure, evaluate, kernel_split,
                        standard_basis, total)
from .report import Report


def unit_weight(_lam: float) -> float:
    return 1.0


def w1_weight(lam: float) -> float:
    """The weight (1 + lambda^2) used by the resolvent-type embedding."""
    return 1.0 + lam * lam


@dataclass(frozen=True)
class Fiber:
    """One atom's fiber: Gram Phi_j = M_j / mu_j with its quotient map."""

    lam: float
    mass: float
    gram: PsdMatrix
    quotient: RankFactorization

    @property
    def rank(self) -> int:
        return self.quotient.rank


@dataclass(frozen=True)
class ModelSpace:
    """The finite direct integral of fibers against the control measure."""

    sigma: AtomicOperatorMeasure
    mu: ScalarMeasure
    fibers: tuple
    basis: np.ndarray  # onb used for the control measure, columns

    @property
    def dim(self) -> int:
        return self.sigma.dim

    @property
    def n_atoms(self) -> int:
        return len(self.fibers)

    @property
    def total_dim(self) -> int:
        return sum(f.rank for f in self.fibers)

    def total(self) -> PsdMatrix:
        return total(self.sigma)

    def split(self) -> KernelSplit:
        return kernel_split(self.total())

    def coordinates(self, f: "ModelVector") -> np.ndarray:
        """Isometric coordinates: concat_j sqrt(mu_j) B_j f_j in C^{total_dim}."""
        parts = [np.sqrt(fb.mass) * fb.quotient.coords(f.per_atom[j])
                 for j, fb in enumerate(self.fibers)]
        return np.concatenate(parts) if parts else np.zeros(0, dtype=complex)

    def from_coordinates(self, c: np.ndarray) -> "ModelVector":
        """A representative vector family with the given coordinates."""
        rows = np.zeros((self.n_atoms, self.dim), dtype=complex)
        pos = 0
        for j, fb in enumerate(self.fibers):
            block = c[pos:pos + fb.rank]
            rows[j] = fb.quotient.factor_pinv @ block / np.sqrt(fb.mass)
            pos += fb.rank
        return ModelVector(rows)


@dataclass(frozen=True)
class ModelVector:
    """One representative vector in C^d per atom (modulo fiber kernels)."""

    per_atom: np.ndarray  # shape (n_atoms, d)

    def __add__(self, other):
        return ModelVector(self.per_atom + other.per_atom)

    def __sub__(self, other):
        return ModelVector(self.per_atom - other.per_atom)

    def __mul__(self, scalar):
        return ModelVector(self.per_atom * scalar)

    __rmul__ = __mul__


@dataclass(frozen=True)
class StepFunction:
    """A finite sum of indicator terms chi_B(lambda) * xi."""

    terms: tuple  # tuple of (BorelSet, vector)

    def value_at(self, lam: float, dim: int) -> np.ndarray:
        acc = np.zeros(dim, dtype=complex)
        for b, xi in self.terms:
            if b.contains(lam):
                acc = acc + np.asarray(xi, dtype=complex)
        return acc


def build_model(sigma: AtomicOperatorMeasure, onb=None,
                tol: float = DEFAULT_TOL) -> ModelSpace:
    """Assemble fibers Phi_j = M_j / mu_j with their rank quotients."""
    if onb is None:
        onb = standard_basis(sigma.dim)
    onb = np.asarray(onb, dtype=complex)
    mu = control_measure(sigma, onb)
    masses = dict(mu.atoms)
    fibers = []
    for lam, w in sigma.atoms:
        if lam not in masses:
            continue  # zero atom carries no fiber
        m = masses[lam]
        gram = validate_psd(w.mat / m, tol)
        fibers.append(Fiber(lam, m, gram, seminorm_quotient(gram)))
    return ModelSpace(sigma, mu, tuple(fibers), onb)


def inner(ms: ModelSpace, f: ModelVector, g: ModelVector, w=None) -> complex:
    """Weighted inner product sum_j w(lambda_j) mu_j f_j^H Phi_j g_j.

    Sesquilinear, linear in the second argument. The optional weight must
    be strictly positive on the atoms.
    """
    if f.per_atom.shape != (ms.n_atoms, ms.dim) or g.per_atom.shape != f.per_atom.shape:
        raise DimensionMismatch("model vectors do not conform to the space")
    acc = 0.0 + 0.0j
    for j, fb in enumerate(ms.fibers):
        wv = 1.0 if w is None else float(w(fb.lam))
        if wv <= 0.0:
            raise ValueError("weight must be strictly positive on atoms")
        acc += wv * fb.mass * (f.per_atom[j].conj() @ (fb.gram.mat @ g.per_atom[j]))
    return complex(acc)


def norm_sq(ms: ModelSpace, f: ModelVector, w=None) -> float:
    return max(float(inner(ms, f, f, w).real), 0.0)


def lambda_embed(ms: ModelSpace, xi) -> ModelVector:
    """The constant family {xi} over the atoms."""
    xi = np.asarray(xi, dtype=complex)
    if xi.shape != (ms.dim,):
        raise DimensionMismatch(f"vector of shape {xi.shape}, expected ({ms.dim},)")
    return ModelVector(np.tile(xi, (ms.n_atoms, 1)))


def gram_lambda(ms: ModelSpace, onb=None) -> np.ndarray:
    """Gram matrix of the embedded basis; equals the total mass T."""
    if onb is None:
        onb = standard_basis(ms.dim)
    onb = np.asarray(onb, dtype=complex)
    d = ms.dim
    g = np.zeros((d, d), dtype=complex)
    emb = [lambda_embed(ms, onb[:, n]) for n in range(d)]
    for m in range(d):
        for n in range(d):
            g[m, n] = inner(ms, emb[m], emb[n])
    return g


def verify_parseval(ms: ModelSpace, b: BorelSet, eta, xi,
                    tol: float = DEFAULT_TOL) -> Report:
    """(eta, Sigma(B) xi) against the fiber-sum over atoms in B."""
    eta = np.asarray(eta, dtype=complex)
    xi = np.asarray(xi, dtype=complex)
    lhs = eta.conj() @ (evaluate(ms.sigma, b).mat @ xi)
    rhs = 0.0 + 0.0j
    for fb in ms.fibers:
        if b.contains(fb.lam):
            rhs += fb.mass * (eta.conj() @ (fb.gram.mat @ xi))
    scale = max(np.linalg.norm(eta) * np.linalg.norm(xi) * ms.total().norm2, 1e-300)
    resid = abs(lhs - rhs) / scale
    rep = Report("parseval", float(resid), tol, resid <= tol)
    if not rep.passed:
        raise IdentityViolation(f"Parseval residual {resid:.3e} exceeds {tol:.3e}")
    return rep


def s_operator(ms: ModelSpace, b: BorelSet) -> np.ndarray:
    """The contraction S(B): identity on ker(T), T1^{-1/2} Sigma1(B)^{1/2} on ran(T).

    Satisfies T^{1/2} S(B) = Sigma(B)^{1/2}; S over the full line is the
    identity (returned exactly).
    """
    if all(b.contains(fb.lam) for fb in ms.fibers):
        return np.eye(ms.dim, dtype=complex)
    split = ms.split()
    k0, k1, t1 = split.k0_basis, split.k1_basis, split.t1
    sig1 = validate_psd(k1.conj().T @ evaluate(ms.sigma, b).mat @ k1, ms.sigma.tol)
    core = pinv_power(t1, 0.5).mat @ frac_power(sig1, 0.5).mat
    return k0 @ k0.conj().T + k1 @ core @ k1.conj().T


def covariance_residual(ms: ModelSpace, b: BorelSet, xi) -> float:
    """Relative L^2 distance between the embedding of S(B) xi and the
    truncated family chi_B(lambda) xi.

    Both families always carry the same norm (the Gram identity below),
    but as L^2 elements they coincide only when chi_B maps the embedded
    image into itself, e.g. for spectral-type measures or when the step
    span is no larger than the embedded image.
    """
    xi = np.asarray(xi, dtype=complex)
    u = lambda_embed(ms, s_operator(ms, b) @ xi)
    rows = np.array([xi * (1.0 if b.contains(fb.lam) else 0.0) for fb in ms.fibers])
    v = ModelVector(rows.reshape(ms.n_atoms, ms.dim))
    scale = max(float(np.linalg.norm(xi) ** 2 * ms.total().norm2), 1e-300)
    return norm_sq(ms, u - v) / scale


def covariance_gram_residual(ms: ModelSpace, b: BorelSet, eta, xi) -> float:
    """Residual of the Gram identity (chi_B Lambda eta, chi_B Lambda xi)
    = (Lambda S(B) eta, Lambda S(B) xi) = (eta, Sigma(B) xi)."""
    eta = np.asarray(eta, dtype=complex)
    xi = np.asarray(xi, dtype=complex)
    s = s_operator(ms, b)
    lhs = inner(ms, lambda_embed(ms, s @ eta), lambda_embed(ms, s @ xi))
    mid = complex(eta.conj() @ (evaluate(ms.sigma, b).mat @ xi))
    rows_e = np.array([eta * (1.0 if b.contains(fb.lam) else 0.0) for fb in ms.fibers])
    rows_x = np.array([xi * (1.0 if b.contains(fb.lam) else 0.0) for fb in ms.fibers])
    rhs = inner(ms, ModelVector(rows_e.reshape(ms.n_atoms, ms.dim)),
                ModelVector(rows_x.reshape(ms.n_atoms, ms.dim)))
    scale = max(np.linalg.norm(eta) * np.linalg.norm(xi) * ms.total().norm2, 1e-300)
    return float((abs(lhs - mid) + abs(rhs - mid)) / scale)


def verify_multiplication_covariance(ms: ModelSpace, b: BorelSet, xi,
                                     tol: float = DEFAULT_TOL) -> Report:
    """Embedding of S(B) xi equals chi_B times the embedding of xi, in L^2."""
    resid = covariance_residual(ms, b, xi)
    rep = Report("multiplication_covariance", float(resid), tol, resid <= tol)
    if not rep.passed:
        raise IdentityViolation(f"covariance residual {resid:.3e} exceeds {tol:.3e}")
    return rep


def step_to_model(ms: ModelSpace, u: StepFunction) -> ModelVector:
    """Evaluate a step function on the atoms as a model vector."""
    rows = np.array([u.value_at(fb.lam, ms.dim) for fb in ms.fibers]) \
        if ms.fibers else np.zeros((0, ms.dim), dtype=complex)
    return ModelVector(rows.reshape(ms.n_atoms, ms.dim))


def step_span_dimension(ms: ModelSpace, tol: float = DEFAULT_TOL) -> int:
    """Rank of the Gram of {chi_{atom j} e_n}; equals the space dimension."""
    vecs = []
    for j, fb in enumerate(ms.fibers):
        for n in range(ms.dim):
            rows = np.zeros((ms.n_atoms, ms.dim), dtype=complex)
            rows[j, n] = 1.0
            vecs.append(ModelVector(rows))
    g = np.array([[inner(ms, x, y) for y in vecs] for x in vecs])
    if g.size == 0:
        return 0
    w = np.linalg.eigvalsh((g + g.conj().T) / 2.0)
    return int(np.count_nonzero(w > tol * max(w.max(), 1e-300)))


def multiplication_operator(ms: ModelSpace):
    """The diagonalized operator and its spectral family in fiber coordinates.

    Returns (H_hat, family) with H_hat = blockdiag(lambda_j I_{r_j}) and
    family(lam) the projector onto fibers with lambda_j <= lam.
    """
    diag = np.concatenate([
        np.full(fb.rank, fb.lam) for fb in ms.fibers
    ]) if ms.fibers else np.zeros(0)
    h_hat = np.diag(diag).astype(complex)

    def family(lam: float) -> np.ndarray:
        return np.diag((diag <= lam).astype(float)).astype(complex)

    return h_hat, family


def berezanskii_norm(ms: ModelSpace, u: StepFunction) -> float:
    """Riemann-Stieltjes square norm sum_j (u(lambda_j), M_j u(lambda_j))."""
    acc = 0.0
    for lam, w in ms.sigma.atoms:
        val = u.value_at(lam, ms.dim)
        acc += float((val.conj() @ (w.mat @ val)).real)
    return acc


def verify_berezanskii(ms: ModelSpace, u: StepFunction,
                       tol: float = 1e-12) -> Report:
    """Step-function norm equals the model-space norm (the isometry)."""
    lhs = berezanskii_norm(ms, u)
    rhs = norm_sq(ms, step_to_model(ms, u))
    scale = max(lhs, 1e-300)
    resid = abs(lhs - rhs) / scale
    rep = Report("berezanskii_isometry", float(resid), tol, resid <= tol)
    if not rep.passed:
        raise IdentityViolation(f"isometry residual {resid:.3e} exceeds {tol:.3e}")
    return rep


def verify_uniqueness(sigma: AtomicOperatorMeasure, onb1, onb2,
                      tol: float = 1e-11) -> Report:
    """Un-normalized fiber Grams mu_j Phi_j agree for two control bases.

    Both recover the atom weight M_j, which is the Gram condition granting
    fiber unitaries between the two constructions.
    """
    m1 = build_model(sigma, onb1)
    m2 = build_model(sigma, onb2)
    if [f.lam for f in m1.fibers] != [f.lam for f in m2.fibers]:
        raise UniquenessViolation("fiber supports differ between bases")
    worst = 0.0
    for f1, f2 in zip(m1.fibers, m2.fibers):
        a = f1.mass * f1.gram.mat
        bmat = f2.mass * f2.gram.mat
        scale = max(np.linalg.norm(a), 1e-300)
        worst = max(worst, float(np.linalg.norm(a - bmat) / scale))
    rep = Report("construction_uniqueness", worst, tol, worst <= tol)
    if not rep.passed:
        raise UniquenessViolation(f"Gram mismatch {worst:.3e} exceeds {tol:.3e}")
    return rep


def gelfand_kostyuchenko_check(sigma: AtomicOperatorMeasure, kop,
                               probes, tol: float = DEFAULT_TOL) -> Report:
    """Densities Psi_j = K^H M_j K / mu_j reproduce (f, Sigma(B) g).

    probes is an iterable of (BorelSet, f, g) triples.
    """
    kop = np.asarray(kop, dtype=complex)
    kinv = np.linalg.inv(kop)
    mu = control_measure(sigma)
    masses = dict(mu.atoms)
    t = total(sigma)
    worst = 0.0
    for b, f, g in probes:
        f = np.asarray(f, dtype=complex)
        g = np.asarray(g, dtype=complex)
        lhs = f.conj() @ (evaluate(sigma, b).mat @ g)
        rhs = 0.0 + 0.0j
        for lam, w in sigma.atoms:
            if lam not in masses or not b.contains(lam):
                continue
            psi = (kop.conj().T @ w.mat @ kop) / masses[lam]
            half = frac_power(validate_psd(psi, sigma.tol), 0.5).mat
            rhs += masses[lam] * ((half @ kinv @ f).conj() @ (half @ kinv @ g))
        scale = max(np.linalg.norm(f) * np.linalg.norm(g) * t.norm2, 1e-300)
        worst = max(worst, float(abs(lhs - rhs) / scale))
    rep = Report("gelfand_kostyuchenko", worst, tol, worst <= tol)
    if not rep.passed:
        raise IdentityViolation(f"density residual {worst:.3e} exceeds {tol:.3e}")
    return rep


def weighted_embed(ms: ModelSpace, v) -> ModelVector:
    """The resolvent-type family {(lambda_j - i)^{-1} v}.

    Its squared norm with weight (1 + lambda^2) is (v, T v).
    """
    v = np.asarray(v, dtype=complex)
    if v.shape != (ms.dim,):
        raise DimensionMismatch(f"vector of shape {v.shape}, expected ({ms.dim},)")
    rows = np.array([v / (fb.lam - 1j) for fb in ms.fibers]) \
        if ms.fibers else np.zeros((0, ms.dim), dtype=complex)
    return ModelVector(rows.reshape(ms.n_atoms, ms.dim))
