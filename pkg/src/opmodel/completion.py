"""Finite semi-metric spaces and their two metrization routes.

Route I completes first (Cauchy sequences, here eventually constant,
which is fully general over a finite point set) and then quotients by
zero limit distance; route II quotients by the zero-distance relation
directly. The explicit isometry between the two results is constructed
and checked.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AxiomViolation, IsometryFailure
from .linops import PsdMatrix, RankFactorization, seminorm_quotient
from .report import Report

ZERO_TOL = 1e-12


@dataclass(frozen=True)
class FiniteSemiMetric:
    """n points with a symmetric, triangle-obeying distance; zeros allowed
    off the diagonal."""

    n: int
    rho: np.ndarray


@dataclass(frozen=True)
class CauchySequence:
    """An eventually constant sequence: finite stem, then `tail` forever.

    Over a finite semi-metric space every Cauchy sequence is eventually
    confined to one zero-distance class (there is a minimum positive
    distance), so this representation is fully general up to route-I
    equivalence.
    """

    stem: tuple
    tail: int


@dataclass(frozen=True)
class MetricSpaceResult:
    """Classes (tuples of member labels) with a true metric between them."""

    classes: tuple
    dist: np.ndarray


def validate_semimetric(rho, tol: float = ZERO_TOL) -> FiniteSemiMetric:
    """Check the three semi-metric axioms within additive tol."""
    r = np.asarray(rho, dtype=float)
    if r.ndim != 2 or r.shape[0] != r.shape[1]:
        raise ValueError("rho must be a square matrix")
    if np.any(r < -tol):
        raise AxiomViolation("negativity: rho has a negative entry")
    n = r.shape[0]
    bad = np.flatnonzero(np.abs(np.diag(r)) > tol)
    if bad.size:
        raise AxiomViolation(f"reflexivity: rho({bad[0]},{bad[0]}) != 0")
    asym = np.abs(r - r.T)
    if asym.max(initial=0.0) > tol:
        i, j = np.unravel_index(np.argmax(asym), asym.shape)
        raise AxiomViolation(f"symmetry: rho({i},{j}) != rho({j},{i})")
    for k in range(n):
        slack = r[:, k, None] + r[None, k, :] - r
        if slack.min(initial=0.0) < -tol:
            i, j = np.unravel_index(np.argmin(slack), slack.shape)
            raise AxiomViolation(
                f"triangle: rho({i},{j}) > rho({i},{k}) + rho({k},{j})")
    return FiniteSemiMetric(n, r)


def _zero_classes(s: FiniteSemiMetric, points, tol: float):
    """Partition `points` by the zero-distance relation (an equivalence,
    by the triangle inequality)."""
    points = list(points)
    classes = []
    for p in points:
        for cls in classes:
            if s.rho[p, cls[0]] <= tol:
                cls.append(p)
                break
        else:
            classes.append([p])
    return [tuple(c) for c in classes]


def route2_quotient(s: FiniteSemiMetric, tol: float = ZERO_TOL) -> MetricSpaceResult:
    """Quotient the points by zero distance; check representative
    independence of the induced metric exhaustively."""
    classes = _zero_classes(s, range(s.n), tol)
    m = len(classes)
    dist = np.zeros((m, m))
    for a in range(m):
        for b in range(m):
            vals = s.rho[np.ix_(classes[a], classes[b])]
            if vals.max() - vals.min() > tol:
                raise AxiomViolation(
                    f"quotient metric ill-defined between classes {a} and {b}")
            dist[a, b] = s.rho[classes[a][0], classes[b][0]]
    return MetricSpaceResult(tuple(classes), dist)


def route1_complete_then_quotient(s: FiniteSemiMetric, sequences,
                                  tol: float = ZERO_TOL) -> MetricSpaceResult:
    """Limit distance of eventually constant sequences is the tail
    distance; quotient the sequences by zero limit distance."""
    seqs = list(sequences)
    classes = []
    for idx, sq in enumerate(seqs):
        for cls in classes:
            if s.rho[sq.tail, seqs[cls[0]].tail] <= tol:
                cls.append(idx)
                break
        else:
            classes.append([idx])
    m = len(classes)
    dist = np.zeros((m, m))
    for a in range(m):
        for b in range(m):
            dist[a, b] = s.rho[seqs[classes[a][0]].tail, seqs[classes[b][0]].tail]
    return MetricSpaceResult(tuple(tuple(c) for c in classes), dist)


def isometry_j(r1: MetricSpaceResult, r2: MetricSpaceResult, sequences,
               tol: float = ZERO_TOL):
    """Map each route-1 class to the route-2 class holding its tail.

    Returns the index mapping; raises IsometryFailure if it is not a
    distance-preserving bijection (the sequence set must be tail-complete).
    """
    seqs = list(sequences)
    point_class = {}
    for b, cls in enumerate(r2.classes):
        for p in cls:
            point_class[p] = b
    mapping = []
    for cls in r1.classes:
        tail = seqs[cls[0]].tail
        if tail not in point_class:
            raise IsometryFailure(f"tail {tail} not covered by route-2 classes")
        mapping.append(point_class[tail])
    if sorted(mapping) != list(range(len(r2.classes))):
        raise IsometryFailure("class mapping is not a bijection")
    for a in range(len(mapping)):
        for b in range(len(mapping)):
            if abs(r1.dist[a, b] - r2.dist[mapping[a], mapping[b]]) > tol:
                raise IsometryFailure(
                    f"distance mismatch between classes {a} and {b}")
    return tuple(mapping)


def verify_isometry(s: FiniteSemiMetric, sequences=None,
                    tol: float = ZERO_TOL) -> Report:
    """Run both routes on s and confirm the explicit isometry.

    With no sequences given, one constant sequence per point is used
    (tail-complete by construction).
    """
    if sequences is None:
        sequences = [CauchySequence((), p) for p in range(s.n)]
    r2 = route2_quotient(s, tol)
    r1 = route1_complete_then_quotient(s, sequences, tol)
    mapping = isometry_j(r1, r2, sequences, tol)
    worst = 0.0
    for a in range(len(mapping)):
        for b in range(len(mapping)):
            worst = max(worst, abs(r1.dist[a, b] - r2.dist[mapping[a], mapping[b]]))
    return Report("completion_isometry", worst, tol, worst <= tol,
                  details={"classes": len(mapping)})


def seminormed_quotient_bridge(gram: PsdMatrix) -> RankFactorization:
    """Quotient of a semi-normed space by its null vectors.

    The fiber construction of the model space is the same route-II
    quotient applied to the seminorm induced by a PSD Gram matrix.
    """
    return seminorm_quotient(gram)
