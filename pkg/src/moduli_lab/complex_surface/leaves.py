"""Abelian leaf invariants: Jacobian classes of restrictions to the polar curves
and the pairing on harmonic (0,1)-classes.

For a rank-one bundle the restriction of dbar + A to a polar curve P_j is
classified by the harmonic part of A|_{P_j}, i.e. by the zero Fourier mode
of its dz2bar coefficient.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .fourier import CurveForm, FormDegreeError, FourierForm, constant_form
from .gauge import gauge_direction_c, symplectic_Wc
from .geometry import MeromorphicTwoForm
from .quadrature import QuadratureScheme

RESTRICTION_TOL = 1e-12


class NonAbelianError(ValueError):
    """Leaf invariants are only realized for rank-one bundles."""


def _require_abelian(f):
    if f.n != 1:
        raise NonAbelianError("Jacobian classes are realized for the abelian case only")


def jacobian_class(C: CurveForm) -> complex:
    """Harmonic coefficient c0 of C = c0 dz2bar + dbar(phi)."""
    if C.q != 1:
        raise FormDegreeError("the Jacobian class is defined for (0,1)-forms")
    _require_abelian(C)
    return complex(C.mean()[0, 0])


def _component_angles(sigma: MeromorphicTwoForm):
    E1 = sigma.surface.E1
    return [tuple(float(v) for v in E1.to_angles(c.location)) for c in sigma.components()]


def restriction_norm(sigma: MeromorphicTwoForm, eps: FourierForm) -> float:
    """Largest Fourier coefficient of eps restricted to any polar component."""
    return max((eps.restrict(x, y).max_abs() for x, y in _component_angles(sigma)), default=0.0)


def vanish_on_polar_set(sigma: MeromorphicTwoForm, eps: FourierForm) -> FourierForm:
    """Orthogonal projection of eps onto sections vanishing on every polar component.

    The restriction to {z1 = c_j} x E2 acts on each E2 frequency separately
    as the row vector exp(2 pi i (k1 x_j + k2 y_j)); the projection removes
    the span of these rows from every E2 frequency slice.
    """
    if eps.q != 0:
        raise FormDegreeError("only sections are projected")
    angles = _component_angles(sigma)
    if not angles:
        return eps
    K = eps.K
    k = np.arange(-K, K + 1)
    rows = np.array([np.outer(np.exp(2j * np.pi * k * x), np.exp(2j * np.pi * k * y)).ravel()
                     for x, y in angles])
    M = 2 * K + 1
    c = eps.coeffs[0]                                  # (M, M, M, M, n, n)
    flat = np.moveaxis(c.reshape(M * M, M, M, *c.shape[-2:]), 0, -1)   # (..., M*M)
    gram = rows @ rows.conj().T
    coef = np.linalg.solve(gram, np.einsum("jm,...m->...j", rows, flat)[..., None])[..., 0]
    flat = flat - np.einsum("...j,jm->...m", coef, rows.conj())
    out = np.moveaxis(flat, -1, 0).reshape(c.shape)
    return FourierForm(eps.surface, 0, out[None])


@dataclass(frozen=True)
class LeafVelocity:
    """Per polar component: d/dt of the Jacobian class and size of d/dt of the restriction."""

    class_velocity: tuple
    restriction_velocity: tuple

    @property
    def max_class(self) -> float:
        return max((abs(v) for v in self.class_velocity), default=0.0)

    @property
    def max_restriction(self) -> float:
        return max(self.restriction_velocity, default=0.0)


def leaf_velocity(sigma: MeromorphicTwoForm, A: FourierForm, direction: FourierForm) -> LeafVelocity:
    """Velocity of the polar restrictions of A + t * direction at t = 0.

    Restriction is linear, so the derivative is the restriction of the direction.
    """
    _require_abelian(A)
    cls, res = [], []
    for x, y in _component_angles(sigma):
        r = direction.restrict(x, y)
        cls.append(jacobian_class(r))
        res.append(r.max_abs())
    return LeafVelocity(tuple(cls), tuple(res))


def leaf_invariance_check(sigma: MeromorphicTwoForm, A: FourierForm, eps: FourierForm,
                          tol: float = RESTRICTION_TOL) -> float:
    """Largest label velocity along the gauge direction of an eps vanishing on P.

    Raises ValueError when eps does not vanish on the polar set.
    """
    _require_abelian(A)
    size = restriction_norm(sigma, eps)
    if size > tol * max(1.0, eps.max_abs()):
        raise ValueError(f"eps does not vanish on the polar set (restriction size {size:.3e})")
    v = leaf_velocity(sigma, A, gauge_direction_c(A, eps))
    return max(v.max_class, v.max_restriction)


# -- harmonic classes ---------------------------------------------------------------------------

def harmonic_coefficients(a: FourierForm, tol: float = 1e-12) -> np.ndarray:
    """(a1, a2) for a = a1 dz1bar + a2 dz2bar with constant scalar coefficients."""
    if a.q != 1:
        raise FormDegreeError("harmonic classes here are (0,1)-forms")
    _require_abelian(a)
    K = a.K
    c = a.coeffs[:, :, :, :, :, 0, 0].copy()
    const = c[:, K, K, K, K].copy()
    c[:, K, K, K, K] = 0
    if np.max(np.abs(c), initial=0.0) > tol * max(1.0, np.max(np.abs(const))):
        raise ValueError("input is not a harmonic (constant-coefficient) (0,1)-form")
    return const


def restriction_matrix(sigma: MeromorphicTwoForm) -> np.ndarray:
    """Matrix of (a1, a2) -> (dz2bar coefficient of a on each polar component)."""
    return np.array([[0.0, 1.0] for _ in sigma.components()]).reshape(-1, 2)


def restriction_kernel(sigma: MeromorphicTwoForm) -> np.ndarray:
    """Orthonormal basis (columns) of the kernel of restriction on harmonic classes."""
    R = restriction_matrix(sigma)
    if R.shape[0] == 0:
        return np.eye(2)
    return scipy.linalg.null_space(R)


@dataclass(frozen=True)
class HarmonicPairing:
    kernel: np.ndarray      # columns span the kernel of restriction
    gram: np.ndarray        # pairing matrix on the kernel basis
    value: complex          # pairing of the two inputs


def harmonic_leaf_pairing(sigma: MeromorphicTwoForm, a: FourierForm, b: FourierForm,
                          tol: float = 1e-12) -> HarmonicPairing:
    """Pairing int_S sigma ^ a ^ b on harmonic classes in the kernel of restriction to P.

    On constant coefficients the integrand is (a1 b2 - a2 b1) sigma ^ dz1bar ^ dz2bar,
    so the pairing is a multiple of the determinant.  For the holomorphic
    form the multiple is the closed-form volume 4 area(E1) area(E2).
    """
    ca, cb = harmonic_coefficients(a), harmonic_coefficients(b)
    ker = restriction_kernel(sigma)
    R = restriction_matrix(sigma)
    for c in (ca, cb):
        if R.size and np.max(np.abs(R @ c)) > tol * max(1.0, np.max(np.abs(c))):
            raise ValueError("class does not lie in the kernel of restriction to the polar set")
    if sigma.is_closed:
        scale = sigma.surface.volume_factor
    else:
        # the kernel is a line, where every determinant vanishes
        scale = 0.0
    J = np.array([[0.0, 1.0], [-1.0, 0.0]])
    gram = scale * (ker.T @ J @ ker)
    value = scale * (ca[0] * cb[1] - ca[1] * cb[0])
    return HarmonicPairing(ker, gram, complex(value))


def harmonic_form(sigma: MeromorphicTwoForm, a1: complex, a2: complex) -> FourierForm:
    return constant_form(sigma.surface, 1, [[[a1]], [[a2]]])


def cohomological_vs_symplectic(sigma: MeromorphicTwoForm, a: FourierForm, b: FourierForm,
                                scheme: QuadratureScheme | None = None) -> float:
    """|pairing - W_C| on harmonic representatives, relative to max(1, |W_C|)."""
    p = harmonic_leaf_pairing(sigma, a, b).value
    w = symplectic_Wc(sigma, a, b, scheme)
    return float(abs(p - w) / max(1.0, abs(w)))


def harmonic_shift_slope(sigma: MeromorphicTwoForm, A: FourierForm, c: complex = 1.0) -> tuple:
    """Jacobian-class slopes along the harmonic direction c dz2bar (expected c per component)."""
    direction = constant_form(sigma.surface, 1, [[[0.0]], [[c]]])
    return leaf_velocity(sigma, A, direction).class_velocity

