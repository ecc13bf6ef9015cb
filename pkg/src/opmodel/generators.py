"""Seeded random instance generators shared by the CLI and the test suite.

Every generator draws from a PCG64 stream keyed by (seed, index), so an
instance is reproducible from its coordinates alone, independent of how
many instances were drawn before it.
"""

from __future__ import annotations

import numpy as np

from .completion import FiniteSemiMetric
from .herglotz import NEVANLINNA, MatrixHerglotz, make_herglotz
from .linops import DEFAULT_TOL, validate_psd
from .model_space import StepFunction
from .opmeasure import AtomicOperatorMeasure, BorelSet, atomic_measure
from .perturbation import PerturbationInstance, generating_check, make_instance


def rng_for(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(index)]))


def random_complex(rng, *shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_hermitian(rng, d: int) -> np.ndarray:
    a = random_complex(rng, d, d)
    return (a + a.conj().T) / 2.0


def random_psd(rng, d: int, rank: int | None = None) -> np.ndarray:
    r = d if rank is None else rank
    f = random_complex(rng, r, d)
    return f.conj().T @ f


def random_unitary(rng, d: int) -> np.ndarray:
    q, r = np.linalg.qr(random_complex(rng, d, d))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_lambdas(rng, count: int) -> np.ndarray:
    """Strictly increasing atom locations with gaps of at least 0.1."""
    gaps = 0.1 + rng.uniform(0.0, 1.0, size=count)
    return float(rng.uniform(-3.0, 0.0)) + np.cumsum(gaps)


def random_measure(rng, d_max: int = 6, atoms_max: int = 8,
                   force_kernel: bool = False,
                   tol: float = DEFAULT_TOL) -> AtomicOperatorMeasure:
    """A random atomic measure; with force_kernel the atoms share a
    common proper range, so the total mass has a nontrivial kernel."""
    d = int(rng.integers(2, d_max + 1))
    count = int(rng.integers(1, atoms_max + 1))
    lams = random_lambdas(rng, count)
    if force_kernel:
        q = int(rng.integers(1, d))  # kernel dimension
        u = random_unitary(rng, d)
        p = u[:, :d - q] @ u[:, :d - q].conj().T
    else:
        p = None
    atoms = []
    for lam in lams:
        m = random_psd(rng, d, rank=int(rng.integers(1, d + 1)))
        if p is not None:
            m = p @ m @ p
        atoms.append((float(lam), m))
    return atomic_measure(d, atoms, tol)


def random_borel_set(rng, span: float = 8.0) -> BorelSet:
    count = int(rng.integers(1, 4))
    pairs = []
    for _ in range(count):
        a = float(rng.uniform(-span / 2 - 1, span / 2 + 1))
        b = a + float(rng.uniform(0.1, span / 2))
        pairs.append((a, b))
    return BorelSet.from_intervals(pairs)


def random_step_function(rng, d: int, terms_max: int = 3) -> StepFunction:
    terms = []
    for _ in range(int(rng.integers(1, terms_max + 1))):
        terms.append((random_borel_set(rng), random_complex(rng, d)))
    return StepFunction(tuple(terms))


def random_instance(rng, n_max: int = 8, k_max: int = 3,
                    require_generating: bool = False,
                    tol: float = DEFAULT_TOL) -> PerturbationInstance:
    for _ in range(50):
        n = int(rng.integers(2, n_max + 1))
        k = int(rng.integers(1, min(k_max, n) + 1))
        inst = make_instance(random_hermitian(rng, n),
                             random_complex(rng, n, k),
                             random_hermitian(rng, k), tol)
        if not require_generating:
            return inst
        _, ok = generating_check(inst, tol)
        if ok:
            return inst
    raise RuntimeError("failed to draw a generating instance")


def random_herglotz(rng, k_max: int = 3, atoms_max: int = 5,
                    tol: float = DEFAULT_TOL) -> MatrixHerglotz:
    k = int(rng.integers(1, k_max + 1))
    count = int(rng.integers(1, atoms_max + 1))
    lams = random_lambdas(rng, count)
    atoms = [(float(lam), random_psd(rng, k, rank=int(rng.integers(1, k + 1))))
             for lam in lams]
    omega = atomic_measure(k, atoms, tol)
    c = random_hermitian(rng, k)
    d = validate_psd(random_psd(rng, k), tol)
    return make_herglotz(c, d, omega, NEVANLINNA, tol)


def random_semimetric(rng, n_max: int = 12) -> FiniteSemiMetric:
    """A valid semi-metric with a nontrivial zero-distance kernel.

    A metric is built on a few class representatives (triangle repaired
    by min-plus shortest paths), then lifted to n points through a random
    class assignment, which keeps the triangle inequality exactly and
    creates exact-zero pairs.
    """
    n = int(rng.integers(2, n_max + 1))
    q = int(rng.integers(1, n + 1))  # number of distinct classes
    base = rng.uniform(0.5, 4.0, size=(q, q))
    base = (base + base.T) / 2.0
    np.fill_diagonal(base, 0.0)
    for _ in range(q):  # Floyd-Warshall style min-plus repair
        base = np.minimum(base, np.min(base[:, :, None] + base[None, :, :], axis=1))
    assign = np.concatenate([np.arange(q), rng.integers(0, q, size=n - q)])
    rng.shuffle(assign)
    rho = base[np.ix_(assign, assign)]
    return FiniteSemiMetric(n, rho)
