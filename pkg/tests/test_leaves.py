import numpy as np
import pytest

from moduli_lab.complex_surface.fourier import FormDegreeError, dbar, random_form
from moduli_lab.complex_surface.gauge import gauge_direction_c
from moduli_lab.complex_surface.geometry import EllipticProductSurface, MeromorphicTwoForm
from moduli_lab.complex_surface.leaves import (NonAbelianError, cohomological_vs_symplectic, harmonic_coefficients,
                                               harmonic_form, harmonic_leaf_pairing, harmonic_shift_slope,
                                               jacobian_class, leaf_invariance_check, leaf_velocity,
                                               restriction_kernel, restriction_norm, vanish_on_polar_set)

SIGMA = MeromorphicTwoForm(EllipticProductSurface.from_taus(1j, 1j), 0.5)
SKEW = MeromorphicTwoForm(EllipticProductSurface.from_taus(0.3 + 1.1j, -0.2 + 0.9j), 0.35 + 0.4j)
CLOSED = MeromorphicTwoForm.closed(SKEW.surface)


@pytest.mark.parametrize("sigma", [SIGMA, SKEW], ids=["square", "skew"])
def test_projection_vanishes_on_polar_set_and_is_idempotent(sigma):
    rng = np.random.default_rng(0)
    eps = random_form(sigma.surface, 0, 1, 2, rng)
    assert restriction_norm(sigma, eps) > 1e-2
    p = vanish_on_polar_set(sigma, eps)
    assert restriction_norm(sigma, p) <= 1e-13
    assert (vanish_on_polar_set(sigma, p) - p).max_abs() <= 1e-13


@pytest.mark.parametrize("sigma", [SIGMA, SKEW], ids=["square", "skew"])
def test_leaf_invariance_along_gauge_directions(sigma):
    rng = np.random.default_rng(1)
    for _ in range(10):
        A = random_form(sigma.surface, 1, 1, 2, rng, scale=0.5)
        eps = vanish_on_polar_set(sigma, random_form(sigma.surface, 0, 1, 2, rng, scale=0.5))
        assert leaf_invariance_check(sigma, A, eps) <= 1e-12


@pytest.mark.parametrize("sigma", [SIGMA, SKEW], ids=["square", "skew"])
def test_gauge_directions_never_move_the_class(sigma):
    # dbar of a section has no harmonic part, so the class is fixed even when eps is nonzero on P
    rng = np.random.default_rng(2)
    A = random_form(sigma.surface, 1, 1, 2, rng, scale=0.5)
    eps = random_form(sigma.surface, 0, 1, 2, rng, scale=0.5)
    v = leaf_velocity(sigma, A, gauge_direction_c(A, eps))
    assert v.max_class <= 1e-14
    assert v.max_restriction > 1e-3


def test_control_rejects_eps_not_vanishing_on_polar_set():
    rng = np.random.default_rng(3)
    A = random_form(SIGMA.surface, 1, 1, 1, rng)
    with pytest.raises(ValueError):
        leaf_invariance_check(SIGMA, A, random_form(SIGMA.surface, 0, 1, 1, rng))


@pytest.mark.parametrize("c", [1.0, 0.3 - 2j])
def test_harmonic_shift_moves_class_with_unit_slope(c):
    A = random_form(SKEW.surface, 1, 1, 1, np.random.default_rng(4))
    slopes = harmonic_shift_slope(SKEW, A, c)
    assert len(slopes) == 2
    assert all(abs(s - c) <= 1e-14 for s in slopes)


def test_jacobian_class_of_restriction():
    S = SIGMA.surface
    a = harmonic_form(SIGMA, 0.4, -1.1j) + dbar(random_form(S, 0, 1, 1, np.random.default_rng(5)))
    assert abs(jacobian_class(a.restrict(0.0, 0.0)) + 1.1j) <= 1e-14
    with pytest.raises(FormDegreeError):
        jacobian_class(random_form(S, 0, 1, 1, np.random.default_rng(6)).restrict(0.0, 0.0))


def test_nonabelian_rejected():
    rng = np.random.default_rng(7)
    A = random_form(SIGMA.surface, 1, 2, 1, rng)
    with pytest.raises(NonAbelianError):
        leaf_velocity(SIGMA, A, A)
    with pytest.raises(NonAbelianError):
        jacobian_class(A.restrict(0.0, 0.0))


def test_restriction_kernel_dimensions():
    assert restriction_kernel(CLOSED).shape == (2, 2)
    ker = restriction_kernel(SIGMA)
    assert ker.shape == (2, 1)
    assert abs(abs(ker[0, 0]) - 1) <= 1e-15 and abs(ker[1, 0]) <= 1e-15


def test_harmonic_pairing_closed_matches_symplectic_form():
    S = CLOSED.surface
    a, b = harmonic_form(CLOSED, 0.7 + 0.1j, -0.3j), harmonic_form(CLOSED, 1.2, 0.5 - 0.5j)
    pairing = harmonic_leaf_pairing(CLOSED, a, b)
    det = (0.7 + 0.1j) * (0.5 - 0.5j) - (-0.3j) * 1.2
    assert abs(pairing.value - S.volume_factor * det) <= 1e-12
    assert abs(np.linalg.det(pairing.gram)) > 0
    assert cohomological_vs_symplectic(CLOSED, a, b) <= 1e-6


def test_harmonic_pairing_on_meromorphic_kernel():
    a, b = harmonic_form(SIGMA, 1.0, 0.0), harmonic_form(SIGMA, -2.5j, 0.0)
    p = harmonic_leaf_pairing(SIGMA, a, b)
    assert p.value == 0
    assert np.all(p.gram == 0)
    assert cohomological_vs_symplectic(SIGMA, a, b) <= 1e-6
    with pytest.raises(ValueError):
        harmonic_leaf_pairing(SIGMA, harmonic_form(SIGMA, 0.0, 1.0), b)


def test_harmonic_coefficients_reject_nonconstant():
    S = SIGMA.surface
    assert np.allclose(harmonic_coefficients(harmonic_form(SIGMA, 2.0, 3.0)), [2.0, 3.0])
    with pytest.raises(ValueError):
        harmonic_coefficients(random_form(S, 1, 1, 1, np.random.default_rng(8)))
