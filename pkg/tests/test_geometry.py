import numpy as np
import pytest

from moduli_lab.complex_surface.geometry import (EllipticProductSurface, MeromorphicTwoForm, PolarComponent,
                                                 PolarSetError, contour_residue, residue_of_sigma)
from moduli_lab.complex_surface.weierstrass import EllipticCurve

LATTICES = [(1j, 1j, 0.5), (0.5 + 0.8660254037844386j, 1j, 0.3 + 0.4j), (0.2 + 1.3j, -0.4 + 0.7j, 0.25 + 0.6j),
            (1j, 2j, -0.3 + 0.1j), (0.1 + 0.35j, 1j, 0.5 + 0.2j)]


@pytest.mark.parametrize("tau1,tau2,p", LATTICES)
def test_contour_residues_match_symbolic(tau1, tau2, p):
    sigma = MeromorphicTwoForm(EllipticProductSurface.from_taus(tau1, tau2), p)
    comps = sigma.components()
    assert [c.residue_sign for c in comps] == [1, -1]
    for c in comps:
        assert abs(contour_residue(sigma, c) - residue_of_sigma(sigma, c)) <= 1e-8


@pytest.mark.parametrize("tau1,tau2,p", LATTICES)
def test_eta_is_elliptic(tau1, tau2, p):
    sigma = MeromorphicTwoForm(EllipticProductSurface.from_taus(tau1, tau2), p)
    E1 = sigma.surface.E1
    rng = np.random.default_rng(0)
    z = E1.to_point(rng.uniform(0.05, 0.45, 10), rng.uniform(0.55, 0.95, 10))
    base = sigma.eta(z)
    for w in (E1.omega1, E1.omega2, 2 * E1.omega1 - E1.omega2):
        assert np.max(np.abs(sigma.eta(z + w) - base)) <= 1e-9 * max(1, np.abs(base).max())


def test_sum_of_residues_vanishes():
    sigma = MeromorphicTwoForm(EllipticProductSurface.from_taus(0.3 + 1.1j, 1j), 0.4 + 0.3j)
    assert sum(residue_of_sigma(sigma, c) for c in sigma.components()) == 0


def test_closed_form_has_no_polar_set():
    sigma = MeromorphicTwoForm.closed(EllipticProductSurface.from_taus(1j, 1j))
    assert sigma.is_closed
    assert sigma.components() == ()
    assert np.all(sigma.eta(np.array([0.1, 0.3j])) == 1)


def test_lattice_offset_rejected():
    S = EllipticProductSurface.from_taus(1j, 1j)
    for p in (0.0, 1.0, 1j, 2 - 3j):
        with pytest.raises(PolarSetError):
            MeromorphicTwoForm(S, p)


def test_foreign_component_rejected():
    sigma = MeromorphicTwoForm(EllipticProductSurface.from_taus(1j, 1j), 0.5)
    with pytest.raises(PolarSetError):
        residue_of_sigma(sigma, PolarComponent(0.25 + 0j, 1, 0))


@pytest.mark.parametrize("tau1,tau2,p", LATTICES)
def test_volume_factor_is_jacobian(tau1, tau2, p):
    # columns d/dx1, d/dy1, d/dx2, d/dy2 of (z1, z2, z1bar, z2bar)
    S = EllipticProductSurface(EllipticCurve(1.2 - 0.3j, (1.2 - 0.3j) * tau1), EllipticCurve(0.8j, 0.8j * tau2))
    w1, w2 = S.E1.omega1, S.E1.omega2
    v1, v2 = S.E2.omega1, S.E2.omega2
    J = np.array([[w1, w2, 0, 0], [0, 0, v1, v2],
                  [np.conj(w1), np.conj(w2), 0, 0], [0, 0, np.conj(v1), np.conj(v2)]])
    assert abs(abs(np.linalg.det(J)) - S.volume_factor) <= 1e-12 * S.volume_factor


def test_pole_angles_reduced():
    sigma = MeromorphicTwoForm(EllipticProductSurface.from_taus(1j, 1j), -0.25 + 1.5j)
    (x0, y0), (x1, y1) = sigma.pole_angles()
    assert (x0, y0) == (0.0, 0.0)
    assert abs(x1 - 0.75) <= 1e-14 and abs(y1 - 0.5) <= 1e-14
