import numpy as np
import pytest

from opmodel.completion import (CauchySequence, isometry_j,
                                route1_complete_then_quotient,
                                route2_quotient, seminormed_quotient_bridge,
                                validate_semimetric, verify_isometry)
from opmodel.errors import AxiomViolation, IsometryFailure
from opmodel.generators import random_semimetric, rng_for
from opmodel.linops import validate_psd


@pytest.fixture
def three_point():
    # points 0 and 1 at distance zero, point 2 at distance 1 from both
    rho = np.array([[0.0, 0.0, 1.0],
                    [0.0, 0.0, 1.0],
                    [1.0, 1.0, 0.0]])
    return validate_semimetric(rho)


def test_validate_accepts_true_metric():
    rho = np.array([[0.0, 1.0], [1.0, 0.0]])
    s = validate_semimetric(rho)
    assert s.n == 2


def test_validate_rejects_negative():
    with pytest.raises(AxiomViolation, match="negativity"):
        validate_semimetric([[0.0, -1.0], [-1.0, 0.0]])


def test_validate_rejects_nonzero_diagonal():
    with pytest.raises(AxiomViolation, match="reflexivity"):
        validate_semimetric([[1.0, 0.0], [0.0, 0.0]])


def test_validate_rejects_asymmetry():
    with pytest.raises(AxiomViolation, match="symmetry"):
        validate_semimetric([[0.0, 1.0], [2.0, 0.0]])


def test_validate_rejects_triangle_violation():
    rho = np.array([[0.0, 1.0, 1.0],
                    [1.0, 0.0, 5.0],
                    [1.0, 5.0, 0.0]])
    with pytest.raises(AxiomViolation, match="triangle"):
        validate_semimetric(rho)


def test_route2_merges_zero_pair(three_point):
    r2 = route2_quotient(three_point)
    assert r2.classes == ((0, 1), (2,))
    assert np.allclose(r2.dist, [[0.0, 1.0], [1.0, 0.0]])


def test_route2_identity_on_metric():
    rho = np.array([[0.0, 2.0], [2.0, 0.0]])
    r2 = route2_quotient(validate_semimetric(rho))
    assert r2.classes == ((0,), (1,))
    assert np.allclose(r2.dist, rho)


def test_route1_constant_sequences(three_point):
    seqs = [CauchySequence((), p) for p in range(3)]
    r1 = route1_complete_then_quotient(three_point, seqs)
    assert len(r1.classes) == 2
    assert np.allclose(sorted(r1.dist.ravel()), [0.0, 0.0, 1.0, 1.0])


def test_route1_nontrivial_stems(three_point):
    # stems are ignored: only the tail decides the limit class
    seqs = [CauchySequence((2, 2, 2), 0), CauchySequence((0,), 2)]
    r1 = route1_complete_then_quotient(three_point, seqs)
    assert r1.classes == ((0,), (1,))
    assert r1.dist[0, 1] == pytest.approx(1.0)


def test_isometry_explicit(three_point):
    seqs = [CauchySequence((), p) for p in range(3)]
    r2 = route2_quotient(three_point)
    r1 = route1_complete_then_quotient(three_point, seqs)
    mapping = isometry_j(r1, r2, seqs)
    assert sorted(mapping) == [0, 1]


def test_isometry_fails_when_not_tail_complete(three_point):
    # sequences never reach point 2's class
    seqs = [CauchySequence((), 0), CauchySequence((), 1)]
    r2 = route2_quotient(three_point)
    r1 = route1_complete_then_quotient(three_point, seqs)
    with pytest.raises(IsometryFailure):
        isometry_j(r1, r2, seqs)


def test_verify_isometry_default(three_point):
    rep = verify_isometry(three_point)
    assert rep.passed
    assert rep.details["classes"] == 2


def test_verify_isometry_single_point():
    rep = verify_isometry(validate_semimetric(np.zeros((1, 1))))
    assert rep.passed
    assert rep.details["classes"] == 1


def test_verify_isometry_all_zero():
    rep = verify_isometry(validate_semimetric(np.zeros((4, 4))))
    assert rep.passed
    assert rep.details["classes"] == 1


@pytest.mark.parametrize("seed", range(40))
def test_isometry_property(seed):
    rng = rng_for(600, seed)
    s = random_semimetric(rng)
    rep = verify_isometry(s)
    assert rep.passed
    # redundant sequence sets (several per point, mixed stems) work too
    seqs = [CauchySequence((int(rng.integers(0, s.n)),), p)
            for p in range(s.n) for _ in range(2)]
    assert verify_isometry(s, seqs).passed


def test_seminormed_bridge_matches_quotient():
    # Gram diag(1, 0): the null vector e2 is modded out, one class of
    # directions survives, exactly like the zero-distance quotient
    f = seminormed_quotient_bridge(validate_psd(np.diag([1.0, 0.0])))
    assert f.rank == 1
    assert np.allclose(np.abs(f.kernel_basis[:, 0]), [0.0, 1.0])
