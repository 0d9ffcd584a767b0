import numpy as np
import pytest

from moduli_lab.complex_surface.fourier import (FormDegreeError, FourierForm, constant_form, graded_bracket,
                                                random_form, zero_form)
from moduli_lab.complex_surface.gauge import (cocycle_c, curvature_c, dual_pairing_c, extension_terms_c,
                                              gauge_direction_c, hamiltonian_c, hamiltonian_variation_c,
                                              momentum_c, symplectic_Wc, variation_defect_c,
                                              verify_extension_identity_c)
from moduli_lab.complex_surface.geometry import EllipticProductSurface, MeromorphicTwoForm
from moduli_lab.complex_surface.quadrature import QuadratureScheme

SIGMA = MeromorphicTwoForm(EllipticProductSurface.from_taus(1j, 1j), 0.5)
SKEW = MeromorphicTwoForm(EllipticProductSurface.from_taus(0.3 + 1.1j, -0.2 + 0.9j), 0.35 + 0.4j)
CLOSED = MeromorphicTwoForm.closed(SKEW.surface)


def sample(sigma, n, seed, K=1):
    rng = np.random.default_rng(seed)
    S = sigma.surface
    A = random_form(S, 1, n, K, rng, scale=0.5)
    e1, e2 = random_form(S, 0, n, K, rng, scale=0.5), random_form(S, 0, n, K, rng, scale=0.5)
    a = random_form(S, 1, n, K, rng, scale=0.5)
    return A, e1, e2, a


@pytest.mark.parametrize("sigma", [SIGMA, SKEW], ids=["square", "skew"])
@pytest.mark.parametrize("n", [1, 2])
def test_variation_identity_tightens_with_depth(sigma, n):
    A, eps, _, a = sample(sigma, n, 1)
    defects = [variation_defect_c(sigma, A, eps, a, QuadratureScheme(depth=L)) for L in (2, 3, 4)]
    assert defects[0] > defects[1] > defects[2]
    assert defects[2] <= 1e-3


def test_variation_is_exact_for_closed_sigma():
    A, eps, _, a = sample(CLOSED, 2, 2)
    assert variation_defect_c(CLOSED, A, eps, a) <= 1e-12


def test_variation_matches_finite_difference():
    A, eps, _, a = sample(SKEW, 2, 3)
    scheme = QuadratureScheme(depth=2)
    h = 0.25
    fd = (hamiltonian_c(SKEW, A + a * h, eps, scheme) - hamiltonian_c(SKEW, A - a * h, eps, scheme)) / (2 * h)
    exact = hamiltonian_variation_c(SKEW, A, eps, a, scheme)
    # H is quadratic in A and both sides share one quadrature rule
    assert abs(fd - exact) <= 1e-12 * max(1.0, abs(exact))


@pytest.mark.parametrize("sigma", [SIGMA, SKEW], ids=["square", "skew"])
@pytest.mark.parametrize("n", [1, 2])
def test_extension_identity(sigma, n):
    A, e1, e2, _ = sample(sigma, n, 4)
    coarse = verify_extension_identity_c(sigma, A, e1, e2, QuadratureScheme(depth=2))
    fine = verify_extension_identity_c(sigma, A, e1, e2, QuadratureScheme(depth=4))
    assert fine < coarse
    assert fine <= 1e-3


def test_extension_identity_exact_for_closed_sigma():
    A, e1, e2, _ = sample(CLOSED, 2, 5)
    terms = extension_terms_c(CLOSED, A, e1, e2)
    assert terms.cocycle == 0
    assert terms.residual <= 1e-12


def test_abelian_cocycle_is_visible():
    A, e1, e2, _ = sample(SIGMA, 1, 6)
    terms = extension_terms_c(SIGMA, A, e1, e2)
    assert abs(terms.cocycle) > 1e-3
    assert abs(graded_bracket(e1, e2).max_abs()) <= 1e-14


def test_cocycle_antisymmetric_and_constant_kernel():
    _, e1, e2, _ = sample(SKEW, 2, 7, K=2)
    assert abs(cocycle_c(SKEW, e1, e2) + cocycle_c(SKEW, e2, e1)) <= 1e-13
    const = constant_form(SKEW.surface, 0, [np.array([[1.0, 2.0], [0.5, -1.0]])])
    assert cocycle_c(SKEW, e1, const) == 0
    assert cocycle_c(CLOSED, e1, e2) == 0


def test_dual_pairing_reproduces_hamiltonian():
    A, eps, _, _ = sample(SKEW, 2, 8)
    scheme = QuadratureScheme(depth=2)
    mu = momentum_c(SKEW, A)
    z = 0.3 - 0.1j
    got = dual_pairing_c(SKEW, mu, eps, z, scheme)
    want = hamiltonian_c(SKEW, A, eps, scheme) + z
    assert abs(got - want) <= 1e-12 * max(1.0, abs(want))


def test_momentum_at_zero_connection():
    mu = momentum_c(SIGMA, zero_form(SIGMA.surface, 1, 2))
    assert mu.F02.max_abs() == 0
    assert len(mu.restrictions) == 2
    assert all(r.max_abs() == 0 for r in mu.restrictions)
    assert mu.x == 1.0


def test_hamiltonian_vanishes_at_zero_connection():
    _, eps, _, _ = sample(SIGMA, 2, 9)
    assert hamiltonian_c(SIGMA, zero_form(SIGMA.surface, 1, 2), eps) == 0


def test_Wc_antisymmetric_and_conjugation_invariant():
    rng = np.random.default_rng(10)
    S = SKEW.surface
    a, b = random_form(S, 1, 2, 1, rng, scale=0.5), random_form(S, 1, 2, 1, rng, scale=0.5)
    scheme = QuadratureScheme(depth=2)
    w = symplectic_Wc(SKEW, a, b, scheme)
    assert abs(w + symplectic_Wc(SKEW, b, a, scheme)) <= 1e-12 * max(1, abs(w))
    g = np.array([[1.2, 0.3 - 0.4j], [-0.5j, 0.9]])
    gi = np.linalg.inv(g)
    conj = lambda f: FourierForm(f.surface, f.q, np.einsum("ij,...jk,kl->...il", gi, f.coeffs, g))
    assert abs(symplectic_Wc(SKEW, conj(a), conj(b), scheme) - w) <= 1e-12 * max(1, abs(w))


def test_gauge_direction_abelian_is_dbar():
    A, eps, _, _ = sample(SIGMA, 1, 11)
    from moduli_lab.complex_surface.fourier import dbar
    assert (gauge_direction_c(A, eps) - dbar(eps)).max_abs() <= 1e-14


def test_curvature_and_degree_errors():
    A, eps, _, _ = sample(SIGMA, 2, 12)
    assert curvature_c(A).q == 2
    with pytest.raises(FormDegreeError):
        curvature_c(eps)
    with pytest.raises(FormDegreeError):
        gauge_direction_c(A, A)
    with pytest.raises(FormDegreeError):
        symplectic_Wc(SIGMA, A, eps)
    with pytest.raises(FormDegreeError):
        cocycle_c(SIGMA, A, eps)
