import numpy as np
import pytest

from moduli_lab.lie import GL2, SU2, U1, random_group
from moduli_lab.real_surface.forms import (bubble_one_form, constant_zero_form, exterior_d, p1_zero_form,
                                           random_one_form, random_zero_form, zero_form)
from moduli_lab.real_surface.gauge import (BoundaryForm, ConnectionA, cocycle, cocycle_jacobi_defect,
                                           conjugate_form, dual_pairing, extended_jacobi_defect, gauge_direction,
                                           gauge_transform_at, hamiltonian, hamiltonian_variation, momentum,
                                           relative_residual, sampled_W_gauge_defect, surface_moment_check,
                                           symplectic_W, verify_extension_identity, verify_momentum_bracket, w_gram)
from moduli_lab.real_surface.mesh import SurfaceError, build_surface

SURFACES = [(0, 1), (0, 2), (1, 1), (1, 2), (2, 1)]


def data(g, k, group=SU2, seed=0, refine=0):
    s = build_surface(g, k, refine)
    rng = np.random.default_rng(seed)
    return s, rng, ConnectionA(random_one_form(s, group, rng), group)


def interior_zero_form(s, rng):
    boundary = {v for loop in s.boundary_loops for v in loop}
    vals = np.array([0.0 if v in boundary else rng.normal() for v in range(s.n_vertices)])
    return p1_zero_form(s, vals)


@pytest.mark.parametrize("g,k", SURFACES)
def test_variation_equals_W_pairing(g, k):
    s, rng, A = data(g, k, seed=1)
    for _ in range(5):
        eps, a = random_zero_form(s, SU2, rng), random_one_form(s, SU2, rng)
        lhs = hamiltonian_variation(A, eps, a)
        rhs = symplectic_W(a, gauge_direction(A, eps))
        assert relative_residual(lhs - rhs, lhs, rhs) <= 1e-10


@pytest.mark.parametrize("g,k", SURFACES)
def test_variation_matches_finite_difference(g, k):
    s, rng, A = data(g, k, seed=2)
    eps, a = random_zero_form(s, SU2, rng), random_one_form(s, SU2, rng)
    for h in (1e-1, 1e-3):
        fd = (hamiltonian(A.shifted(a, h), eps) - hamiltonian(A.shifted(a, -h), eps)) / (2 * h)
        exact = hamiltonian_variation(A, eps, a)
        # H is quadratic in A, so the central difference is exact up to rounding
        assert relative_residual(fd - exact, exact) <= 1e-6


def test_hamiltonian_vanishes_at_zero_connection():
    s = build_surface(1, 1)
    eps = random_zero_form(s, SU2, np.random.default_rng(3))
    assert hamiltonian(zero_form(s, 1, 2), eps) == 0


def test_hamiltonian_vanishes_for_closed_abelian_and_interior_eps():
    s = build_surface(0, 2)
    rng = np.random.default_rng(4)
    phi = random_zero_form(s, U1, rng)
    A = exterior_d(phi)
    eps = interior_zero_form(s, rng)
    assert abs(hamiltonian(A, eps)) <= 1e-13


def test_cocycle_examples():
    s = build_surface(1, 2)
    rng = np.random.default_rng(5)
    e1, e2 = random_zero_form(s, SU2, rng), random_zero_form(s, SU2, rng)
    const = constant_zero_form(s, random_group(SU2, rng).m - random_group(SU2, rng).m.conj().T)
    assert abs(cocycle(e1, const)) <= 1e-13
    assert abs(cocycle(e1, e2) + cocycle(e2, e1)) <= 1e-12
    closed = build_surface(1, 0)
    assert cocycle(random_zero_form(closed, SU2, rng), random_zero_form(closed, SU2, rng)) == 0


@pytest.mark.parametrize("g,k", SURFACES)
@pytest.mark.parametrize("group", [SU2, GL2], ids=["su2", "gl2"])
def test_extension_identity(g, k, group):
    s, rng, A = data(g, k, group, seed=6)
    for _ in range(3):
        e1, e2 = random_zero_form(s, group, rng), random_zero_form(s, group, rng)
        assert verify_extension_identity(A, e1, e2) <= 1e-10


def test_cocycle_and_extended_jacobi():
    s, rng, A = data(1, 2, seed=7)
    for _ in range(5):
        es = [random_zero_form(s, SU2, rng) for _ in range(3)]
        assert cocycle_jacobi_defect(*es) <= 1e-10
        assert extended_jacobi_defect(A, *es) <= 1e-10


def test_cocycle_nonzero_on_bordered_surface():
    s = build_surface(0, 1)
    rng = np.random.default_rng(8)
    vals = [c for c in (abs(cocycle(random_zero_form(s, SU2, rng), random_zero_form(s, SU2, rng)))
                        for _ in range(5))]
    assert max(vals) > 1e-3


def test_momentum_at_zero_connection():
    s = build_surface(1, 1)
    mu = momentum(zero_form(s, 1, 2))
    assert np.all(mu.F.coeffs == 0)
    assert mu.C.is_zero()
    assert mu.x == 1.0


def test_momentum_dual_pairing_matches_hamiltonian():
    s, rng, A = data(1, 2, seed=9)
    for _ in range(5):
        eps = random_zero_form(s, SU2, rng)
        z = rng.normal()
        got = dual_pairing(momentum(A), eps, z)
        want = hamiltonian(A, eps) + z
        assert relative_residual(got - want, want) <= 1e-12


def test_boundary_restriction_vanishes_for_bubble_connections():
    s = build_surface(0, 2)
    rng = np.random.default_rng(10)
    m = random_group(SU2, rng).m
    a = bubble_one_form(s, 0, 0, value=m - m.conj().T) + bubble_one_form(s, 3, 1, value=m - m.conj().T)
    assert BoundaryForm.restrict(a).is_zero(1e-15)
    eps = random_zero_form(s, SU2, rng)
    bulk_only = dual_pairing(momentum(a), eps)
    assert relative_residual(bulk_only - hamiltonian(a, eps), bulk_only) <= 1e-12


def test_momentum_bracket_many_trials():
    s, rng, _ = data(1, 2, seed=11)
    worst = 0.0
    for _ in range(200):
        A = random_one_form(s, SU2, rng)
        e1, e2 = random_zero_form(s, SU2, rng), random_zero_form(s, SU2, rng)
        worst = max(worst, verify_momentum_bracket(A, e1, e2))
    assert worst <= 1e-10


def test_gauge_orbit_derivative():
    s, rng, A = data(1, 1, seed=12)
    eps = random_zero_form(s, SU2, rng)
    pts = (rng.uniform(0, 0.5, 6), rng.uniform(0, 0.5, 6))
    h = 1e-5
    direction = gauge_direction(A, eps)
    for f in (0, 7):
        fd = (gauge_transform_at(A, eps, h, f, *pts) - gauge_transform_at(A, eps, -h, f, *pts)) / (2 * h)
        assert np.max(np.abs(fd - direction.evaluate(f, *pts))) <= 1e-8
        assert np.max(np.abs(gauge_transform_at(A, eps, 0.0, f, *pts) - A.a.evaluate(f, *pts))) <= 1e-15


def test_W_antisymmetric_and_degree_checked():
    s, rng, _ = data(1, 1, seed=13)
    a, b = random_one_form(s, SU2, rng), random_one_form(s, SU2, rng)
    assert abs(symplectic_W(a, b) + symplectic_W(b, a)) <= 1e-12
    assert abs(symplectic_W(a, a)) <= 1e-12
    with pytest.raises(SurfaceError):
        symplectic_W(a, random_zero_form(s, SU2, rng))


@pytest.mark.parametrize("group", [SU2, GL2], ids=["su2", "gl2"])
def test_W_invariant_under_constant_gauge(group):
    s, rng, _ = data(1, 2, group, seed=14)
    a, b = random_one_form(s, group, rng), random_one_form(s, group, rng)
    g = random_group(group, rng).m
    w, wg = symplectic_W(a, b), symplectic_W(conjugate_form(a, g), conjugate_form(b, g))
    assert relative_residual(w - wg, w) <= 1e-12


def test_W_invariant_under_smooth_gauge():
    s, rng, _ = data(0, 1, seed=15)
    a, b = random_one_form(s, SU2, rng), random_one_form(s, SU2, rng)
    eps = random_zero_form(s, SU2, rng)
    assert sampled_W_gauge_defect(a, b, eps) <= 1e-12


def test_W_nondegenerate_on_bubble_basis():
    s = build_surface(0, 1)
    forms = [bubble_one_form(s, f, c) for f in range(s.n_triangles) for c in (0, 1)]
    G = w_gram(forms)
    assert np.linalg.matrix_rank(G, tol=1e-12) == len(forms)


def test_exact_moments():
    assert surface_moment_check() <= 1e-15


def test_connection_validation():
    s = build_surface(0, 1)
    with pytest.raises(SurfaceError):
        ConnectionA(random_zero_form(s, SU2, np.random.default_rng(0)), SU2)
    with pytest.raises(SurfaceError):
        ConnectionA(random_one_form(s, U1, np.random.default_rng(0)), SU2)
