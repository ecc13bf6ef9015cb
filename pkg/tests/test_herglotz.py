import numpy as np
import pytest

from opmodel.errors import LowerHalfPlane, NonConvergent
from opmodel.generators import random_herglotz, rng_for
from opmodel.herglotz import (MatrixHerglotz, herglotz_eval,
                              herglotz_eval_reflected, herglotz_scan,
                              imag_part, make_herglotz, recover_cd,
                              stieltjes_invert)
from opmodel.opmeasure import atomic_measure


@pytest.fixture
def scalar_pole():
    # m(z) = 1/(0 - z) = -1/z in Stieltjes form
    omega = atomic_measure(1, [(0.0, [[1.0]])])
    return make_herglotz(np.zeros((1, 1)), np.zeros((1, 1)), omega,
                         form="stieltjes")


@pytest.fixture
def affine_two_atom():
    omega = atomic_measure(2, [(-1.0, np.diag([1.0, 0.0])),
                               (2.0, np.array([[1.0, 1.0], [1.0, 1.0]]))])
    c = np.array([[1.0, 0.0], [0.0, -2.0]])
    d = np.diag([0.5, 0.0])
    return make_herglotz(c, d, omega)


def test_make_herglotz_validates():
    omega = atomic_measure(1, [(0.0, [[1.0]])])
    with pytest.raises(ValueError):
        make_herglotz([[1j]], np.zeros((1, 1)), omega)
    with pytest.raises(ValueError):
        make_herglotz(np.zeros((2, 2)), np.zeros((2, 2)), omega)
    with pytest.raises(ValueError):
        make_herglotz(np.zeros((1, 1)), np.zeros((1, 1)), omega, form="other")


def test_eval_scalar_pole(scalar_pole):
    # -1/i = i
    assert herglotz_eval(scalar_pole, 1j) == pytest.approx(1j)
    assert herglotz_eval(scalar_pole, 2j)[0, 0] == pytest.approx(0.5j)


def test_eval_rejects_lower_half(scalar_pole):
    with pytest.raises(LowerHalfPlane):
        herglotz_eval(scalar_pole, -1j)
    with pytest.raises(LowerHalfPlane):
        herglotz_eval(scalar_pole, 1.0 + 0.0j)


def test_eval_nevanlinna_affine(affine_two_atom):
    h = affine_two_atom
    z = 1j
    got = herglotz_eval(h, z)
    want = h.c + h.d.mat * z
    for lam, w in h.omega.atoms:
        want = want + w.mat * (1.0 / (lam - z) - lam / (1.0 + lam * lam))
    assert np.allclose(got, want)
    assert np.linalg.eigvalsh(imag_part(got))[0] >= 0.0


def test_reflection(affine_two_atom):
    for z in (1j, 0.7 + 0.2j, -3.0 + 1.5j):
        up = herglotz_eval(affine_two_atom, z)
        down = herglotz_eval_reflected(affine_two_atom, np.conj(z))
        assert np.allclose(down, up.conj().T, atol=1e-14)
    with pytest.raises(LowerHalfPlane):
        herglotz_eval_reflected(affine_two_atom, 1.0 + 0.0j)


def test_recover_cd_exact(affine_two_atom):
    h = affine_two_atom
    c, d = recover_cd(lambda z: herglotz_eval(h, z))
    assert np.allclose(c, h.c, atol=1e-6)
    assert np.allclose(d, h.d.mat, atol=1e-6)


def test_recover_cd_pure_linear():
    omega = atomic_measure(1, [(0.0, [[0.0]]), (1.0, [[1e-30]])])
    h = make_herglotz([[3.0]], [[2.0]], omega)
    c, d = recover_cd(lambda z: herglotz_eval(h, z))
    assert c[0, 0] == pytest.approx(3.0, abs=1e-8)
    assert d[0, 0] == pytest.approx(2.0, abs=1e-8)


def test_recover_cd_rejects_unstable():
    # a function that is not Herglotz-linear at infinity cannot settle
    with pytest.raises(NonConvergent):
        recover_cd(lambda z: np.array([[np.sqrt(z)]]))


def test_stieltjes_invert_on_atom(scalar_pole):
    w = stieltjes_invert(lambda z: herglotz_eval(scalar_pole, z), 0.0)
    assert w[0, 0] == pytest.approx(1.0, abs=1e-6)


def test_stieltjes_invert_off_atom(scalar_pole):
    w = stieltjes_invert(lambda z: herglotz_eval(scalar_pole, z), 5.0)
    assert abs(w[0, 0]) <= 1e-6


def test_stieltjes_invert_matrix(affine_two_atom):
    h = affine_two_atom
    ev = lambda z: herglotz_eval(h, z)
    for lam, w in h.omega.atoms:
        got = stieltjes_invert(ev, lam)
        assert np.allclose(got, w.mat, atol=1e-6)


def test_scan_positive(affine_two_atom):
    grid = [complex(x, y) for x in np.linspace(-5, 5, 11) for y in (0.1, 1.0)]
    rep = herglotz_scan(lambda z: herglotz_eval(affine_two_atom, z), grid)
    assert rep.passed


def test_scan_flags_violation():
    # minus a Herglotz function has negative imaginary part
    omega = atomic_measure(1, [(0.0, [[1.0]])])
    h = make_herglotz(np.zeros((1, 1)), np.zeros((1, 1)), omega, form="stieltjes")
    rep = herglotz_scan(lambda z: -herglotz_eval(h, z), [1j])
    assert not rep.passed
    assert rep.details["min_imag_eigenvalue"] < 0


@pytest.mark.parametrize("seed", range(20))
def test_round_trip_property(seed):
    rng = rng_for(500, seed)
    h = random_herglotz(rng)
    ev = lambda z: herglotz_eval(h, z)
    c, d = recover_cd(ev)
    assert np.allclose(c, h.c, atol=1e-6 * max(1.0, np.linalg.norm(h.c)))
    assert np.allclose(d, h.d.mat, atol=1e-6 * max(1.0, np.linalg.norm(h.d.mat)))
    for lam, w in h.omega.atoms:
        got = stieltjes_invert(ev, lam)
        assert np.allclose(got, w.mat, atol=1e-6 * max(1.0, np.linalg.norm(w.mat)))


@pytest.mark.parametrize("seed", range(10))
def test_positivity_property(seed):
    rng = rng_for(501, seed)
    h = random_herglotz(rng)
    grid = [complex(rng.uniform(-5, 5), rng.uniform(0.05, 5.0))
            for _ in range(50)]
    assert herglotz_scan(lambda z: herglotz_eval(h, z), grid).passed
