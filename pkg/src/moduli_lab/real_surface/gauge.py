"""Symplectic form, gauge Hamiltonians, boundary cocycle and momentum map on the
affine space of connections d + A over a triangulated surface.

Every quantity is an exact integral of a piecewise polynomial, so the
identities checked here hold to rounding error.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from ..lie import StructureGroup
from .forms import (PwPolyForm, exterior_d, graded_bracket, integrate_boundary,
                    integrate_surface, wedge, _moments)
from .mesh import SurfaceError


@dataclass(frozen=True, eq=False)
class ConnectionA:
    """The connection d + A; ``a`` is the algebra-valued 1-form A."""

    a: PwPolyForm
    group: StructureGroup

    def __post_init__(self):
        if self.a.degree != 1:
            raise SurfaceError("a connection form has degree 1")
        if self.a.n != self.group.n:
            raise SurfaceError("connection values do not match the structure group")

    @property
    def surface(self):
        return self.a.surface

    def shifted(self, direction: PwPolyForm, t: float) -> ConnectionA:
        return ConnectionA(self.a + t * direction, self.group)


def _form(A) -> PwPolyForm:
    return A.a if isinstance(A, ConnectionA) else A


def relative_residual(diff, *scales) -> float:
    return float(abs(diff) / max(1.0, *(abs(s) for s in scales)))


# -- symplectic structure and Hamiltonians -------------------------------------------

def symplectic_W(a: PwPolyForm, b: PwPolyForm) -> complex:
    """W(a, b) = integral of tr(a ^ b) for tangent vectors a, b."""
    if a.degree != 1 or b.degree != 1:
        raise SurfaceError("W pairs two 1-forms")
    return integrate_surface(wedge(a, b))


def curvature(A) -> PwPolyForm:
    A = _form(A)
    return exterior_d(A) + wedge(A, A)


def gauge_direction(A, eps: PwPolyForm) -> PwPolyForm:
    """nabla_A eps = d eps + [A, eps], the infinitesimal gauge transformation."""
    A = _form(A)
    if eps.degree != 0:
        raise SurfaceError("gauge parameters are 0-forms")
    return exterior_d(eps) + graded_bracket(A, eps)


def hamiltonian(A, eps: PwPolyForm) -> complex:
    """H_eps(A) = int tr(eps (dA + A^A)) - int_boundary tr(eps A)."""
    A = _form(A)
    return integrate_surface(wedge(eps, curvature(A))) - integrate_boundary(wedge(eps, A))


def hamiltonian_variation(A, eps: PwPolyForm, a: PwPolyForm) -> complex:
    """Analytic first variation of H_eps at A in the direction a.

    Computed from dF = da + a^A + A^a, independently of the W-pairing.
    """
    A = _form(A)
    dF = exterior_d(a) + wedge(a, A) + wedge(A, a)
    return integrate_surface(wedge(eps, dF)) - integrate_boundary(wedge(eps, a))


def cocycle(eps1: PwPolyForm, eps2: PwPolyForm) -> complex:
    """c(eps1, eps2) = int_boundary tr(eps1 d eps2)."""
    if not eps1.surface.boundary_loops:
        return 0j
    return integrate_boundary(wedge(eps1, exterior_d(eps2)))


def bracket0(eps1: PwPolyForm, eps2: PwPolyForm) -> PwPolyForm:
    return graded_bracket(eps1, eps2)


def poisson_bracket(A, eps1: PwPolyForm, eps2: PwPolyForm) -> complex:
    """{H_eps1, H_eps2}(A) = W(nabla eps1, nabla eps2)."""
    return symplectic_W(gauge_direction(A, eps1), gauge_direction(A, eps2))


def extension_terms(A, eps1, eps2):
    """(bracket, H_[eps1,eps2], c(eps1, eps2)) at A."""
    return (poisson_bracket(A, eps1, eps2),
            hamiltonian(A, bracket0(eps1, eps2)),
            cocycle(eps1, eps2))


def verify_extension_identity(A, eps1, eps2) -> float:
    """Relative residual of {H1, H2} = H_[eps1,eps2] + c(eps1, eps2)."""
    pb, h, c = extension_terms(A, eps1, eps2)
    return relative_residual(pb - h - c, pb, h, c)


def cocycle_jacobi_defect(eps1, eps2, eps3) -> float:
    """|c([e1,e2],e3) + c([e2,e3],e1) + c([e3,e1],e2)|."""
    total = (cocycle(bracket0(eps1, eps2), eps3) + cocycle(bracket0(eps2, eps3), eps1)
             + cocycle(bracket0(eps3, eps1), eps2))
    return float(abs(total))


def extended_jacobi_defect(A, eps1, eps2, eps3) -> float:
    """Cyclic sum of H_[[e1,e2],e3] + c([e1,e2],e3), which vanishes by Jacobi."""
    total = 0j
    for x, y, z in ((eps1, eps2, eps3), (eps2, eps3, eps1), (eps3, eps1, eps2)):
        xy = bracket0(x, y)
        total += hamiltonian(A, bracket0(xy, z)) + cocycle(xy, z)
    return float(abs(total))


# -- momentum map --------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class BoundaryForm:
    """A form on the boundary circles: 1D polynomial coefficients per boundary edge.

    ``coeffs[e]`` has shape (L, n, n); for degree 1 it is the d(lambda)
    coefficient along the oriented boundary edge e.
    """

    surface: object
    degree: int
    coeffs: tuple

    @classmethod
    def restrict(cls, form: PwPolyForm) -> BoundaryForm:
        return cls(form.surface, form.degree,
                   tuple(form.restrict_edge(f, le) for f, le in form.surface.boundary_edges))

    def is_zero(self, tol: float = 0.0) -> bool:
        return all(np.max(np.abs(c), initial=0.0) <= tol for c in self.coeffs)


@dataclass(frozen=True, eq=False)
class MomentumValue:
    F: PwPolyForm
    C: BoundaryForm
    x: float = 1.0


def momentum(A) -> MomentumValue:
    """A -> (dA + A^A, A restricted to the boundary, 1)."""
    A = _form(A)
    return MomentumValue(curvature(A), BoundaryForm.restrict(A), 1.0)


def _poly1_trace_integral(p: np.ndarray, q: np.ndarray) -> complex:
    """int_0^1 tr(p(lam) q(lam)) dlam for matrix polynomials in lam."""
    total = 0j
    for i in range(p.shape[0]):
        for j in range(q.shape[0]):
            total += np.einsum("ab,ba->", p[i], q[j]) / (i + j + 1)
    return total


def dual_pairing(mu: MomentumValue, eps: PwPolyForm, z: float = 0.0) -> complex:
    """<(F, C, x), (eps, z)> = int tr(eps F) - int_boundary tr(eps C) + z x."""
    if eps.degree != 0:
        raise SurfaceError("the extended algebra pairs with 0-forms")
    bulk = integrate_surface(wedge(eps, mu.F))
    eps_b = BoundaryForm.restrict(eps)
    edge = sum((_poly1_trace_integral(e, c) for e, c in zip(eps_b.coeffs, mu.C.coeffs)), 0j)
    return complex(bulk - edge + z * mu.x)


def verify_momentum_bracket(A, eps1, eps2, step: float = 0.5) -> float:
    """Relative residual of {<mu, e1>, <mu, e2>}(A) = <mu(A), [e1, e2]> + c(e1, e2).

    The bracket is the derivative of <mu(.), e2> along the Hamiltonian field
    nabla_A e1 of <mu(.), e1>.  The pulled-back functional is quadratic in A,
    so the symmetric difference quotient is exact for any step.
    """
    A = _form(A)
    X1 = gauge_direction(A, eps1)
    up = dual_pairing(momentum(A + step * X1), eps2)
    down = dual_pairing(momentum(A - step * X1), eps2)
    pb = (up - down) / (2 * step)
    rhs_h = dual_pairing(momentum(A), bracket0(eps1, eps2))
    c = cocycle(eps1, eps2)
    return relative_residual(pb - rhs_h - c, pb, rhs_h, c)


# -- gauge action -----------------------------------------------------------------------

def conjugate_form(a: PwPolyForm, g: np.ndarray) -> PwPolyForm:
    """g^-1 a g for a constant group element g."""
    return a.scale_matrix(left=np.linalg.inv(g), right=g)


def gauge_transform_constant(A, g: np.ndarray) -> PwPolyForm:
    """A -> g^-1 A g + g^-1 dg for constant g (the second term vanishes)."""
    return conjugate_form(_form(A), g)


def gauge_transform_at(A, eps: PwPolyForm, tau: float, f: int, s, t) -> np.ndarray:
    """(g^-1 A g + g^-1 dg) at points of triangle f, for g = exp(tau eps(x)).

    Returns (npts, 2, n, n) in (ds, dt) components; dg comes from the Frechet
    derivative of the matrix exponential.
    """
    A = _form(A)
    Av = A.evaluate(f, s, t)
    ev = eps.evaluate(f, s, t)[:, 0]
    deps = exterior_d(eps).evaluate(f, s, t)
    out = np.empty_like(Av)
    for p in range(len(ev)):
        g = scipy.linalg.expm(tau * ev[p])
        ginv = np.linalg.inv(g)
        for comp in range(2):
            _, dg = scipy.linalg.expm_frechet(tau * ev[p], tau * deps[p, comp])
            out[p, comp] = ginv @ Av[p, comp] @ g + ginv @ dg
    return out


def _triangle_rule(order: int):
    """Collapsed Gauss-Legendre rule on the reference triangle."""
    x, w = np.polynomial.legendre.leggauss(order)
    x, w = 0.5 * (x + 1), 0.5 * w
    u, v = np.meshgrid(x, x, indexing="ij")
    wu, wv = np.meshgrid(w, w, indexing="ij")
    s = u.ravel()
    t = ((1 - u) * v).ravel()
    weight = (wu * wv * (1 - u)).ravel()
    return s, t, weight


def sampled_W_gauge_defect(a: PwPolyForm, b: PwPolyForm, eps: PwPolyForm) -> float:
    """|W(g^-1 a g, g^-1 b g) - W(a, b)| for the smooth gauge field g = exp(eps(x)).

    g is not polynomial, so the transformed integral is computed with a
    collapsed Gauss rule of sufficient order for the untransformed integrand.
    """
    order = (a.poly_degree + b.poly_degree) // 2 + 3
    s, t, w = _triangle_rule(order)
    exact = symplectic_W(a, b)
    total = 0j
    for f in range(a.surface.n_triangles):
        av, bv = a.evaluate(f, s, t), b.evaluate(f, s, t)
        ev = eps.evaluate(f, s, t)[:, 0]
        g = np.array([scipy.linalg.expm(e) for e in ev])
        ginv = np.linalg.inv(g)
        ag = ginv[:, None] @ av @ g[:, None]
        bg = ginv[:, None] @ bv @ g[:, None]
        dens = (np.einsum("pab,pba->p", ag[:, 0], bg[:, 1])
                - np.einsum("pab,pba->p", ag[:, 1], bg[:, 0]))
        total += np.sum(w * dens)
    return relative_residual(total - exact, exact)


def w_gram(forms) -> np.ndarray:
    """Matrix of W over a list of 1-forms."""
    n = len(forms)
    G = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(i + 1, n):
            G[i, j] = symplectic_W(forms[i], forms[j])
            G[j, i] = -G[i, j]
    return G


def surface_moment_check(P: int = 6) -> float:
    """Largest error of the exact monomial moments against a Gauss rule (sanity hook)."""
    s, t, w = _triangle_rule(P + 2)
    M = _moments(P)
    worst = 0.0
    for i in range(P):
        for j in range(P - i):
            worst = max(worst, abs(np.sum(w * s ** i * t ** j) - M[i, j]))
    return worst
