"""Holomorphic symplectic form, complex gauge Hamiltonians, the polar cocycle and
the momentum map on (0,1)-connections dbar + A over S = E1 x E2.

Surface integrals go through the singular quadrature; everything on the
polar set is exact Fourier restriction.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fourier import (CurveForm, FormDegreeError, FourierForm, dbar, graded_bracket, wedge)
from .geometry import MeromorphicTwoForm
from .quadrature import QuadratureScheme, chain_pair, polar_pairing


def _check(A: FourierForm, q: int, what: str):
    if A.q != q:
        raise FormDegreeError(f"{what} must be a (0,{q})-form, got (0,{A.q})")


def symplectic_Wc(sigma: MeromorphicTwoForm, a: FourierForm, b: FourierForm,
                  scheme: QuadratureScheme | None = None) -> complex:
    """W_C(a, b) = int_S sigma ^ tr(a ^ b)."""
    _check(a, 1, "a")
    _check(b, 1, "b")
    return chain_pair(sigma, wedge(a, b), scheme)


def curvature_c(A: FourierForm) -> FourierForm:
    """(0,2)-curvature dbar A + A ^ A."""
    _check(A, 1, "A")
    return dbar(A) + wedge(A, A)


def gauge_direction_c(A: FourierForm, eps: FourierForm) -> FourierForm:
    """dbar eps + [A, eps]."""
    _check(A, 1, "A")
    _check(eps, 0, "eps")
    return dbar(eps) + graded_bracket(A, eps)


def _polar_term(sigma, w: FourierForm) -> complex:
    if sigma.is_closed:
        return 0j
    return 2j * np.pi * polar_pairing(sigma, w)


def hamiltonian_c(sigma: MeromorphicTwoForm, A: FourierForm, eps: FourierForm,
                  scheme: QuadratureScheme | None = None) -> complex:
    """H_eps(A) = int sigma ^ tr(eps F(A)) - 2 pi i int_P res sigma ^ tr(eps A)."""
    _check(eps, 0, "eps")
    return chain_pair(sigma, wedge(eps, curvature_c(A)), scheme) - _polar_term(sigma, wedge(eps, A))


def hamiltonian_variation_c(sigma: MeromorphicTwoForm, A: FourierForm, eps: FourierForm,
                            a: FourierForm, scheme: QuadratureScheme | None = None) -> complex:
    """Analytic derivative of H_eps at A along a, from dF = dbar a + a ^ A + A ^ a."""
    dF = dbar(a) + wedge(a, A) + wedge(A, a)
    return chain_pair(sigma, wedge(eps, dF), scheme) - _polar_term(sigma, wedge(eps, a))


def cocycle_c(sigma: MeromorphicTwoForm, eps1: FourierForm, eps2: FourierForm) -> complex:
    """c(eps1, eps2) = 2 pi i int_P res sigma ^ tr(eps1 dbar eps2)."""
    _check(eps1, 0, "eps1")
    _check(eps2, 0, "eps2")
    return _polar_term(sigma, wedge(eps1, dbar(eps2)))


@dataclass(frozen=True)
class ExtensionTermsC:
    bracket: complex
    hamiltonian: complex
    cocycle: complex

    @property
    def residual(self) -> float:
        diff = self.bracket - self.hamiltonian - self.cocycle
        return float(abs(diff) / max(1.0, abs(self.bracket), abs(self.hamiltonian), abs(self.cocycle)))


def extension_terms_c(sigma, A, eps1, eps2, scheme: QuadratureScheme | None = None) -> ExtensionTermsC:
    pb = symplectic_Wc(sigma, gauge_direction_c(A, eps1), gauge_direction_c(A, eps2), scheme)
    h = hamiltonian_c(sigma, A, graded_bracket(eps1, eps2), scheme)
    return ExtensionTermsC(pb, h, cocycle_c(sigma, eps1, eps2))


def verify_extension_identity_c(sigma, A, eps1, eps2, scheme: QuadratureScheme | None = None) -> float:
    """Relative residual of {H1, H2} = H_[eps1,eps2] + c(eps1, eps2)."""
    return extension_terms_c(sigma, A, eps1, eps2, scheme).residual


def variation_defect_c(sigma, A, eps, a, scheme: QuadratureScheme | None = None) -> float:
    """Relative gap between the analytic variation of H_eps and W_C(a, dbar eps + [A, eps])."""
    dh = hamiltonian_variation_c(sigma, A, eps, a, scheme)
    w = symplectic_Wc(sigma, a, gauge_direction_c(A, eps), scheme)
    return float(abs(dh - w) / max(1.0, abs(dh), abs(w)))


# -- momentum map ---------------------------------------------------------------------------

def _curve_product(f: CurveForm, g: CurveForm) -> CurveForm:
    L = f.coeffs.shape[1] + g.coeffs.shape[1] - 1
    ff = np.fft.fft2(f.coeffs[0], s=(L, L), axes=(0, 1))
    fg = np.fft.fft2(g.coeffs[0], s=(L, L), axes=(0, 1))
    prod = np.fft.ifft2(np.einsum("abij,abjk->abik", ff, fg), axes=(0, 1))
    return CurveForm(f.curve, f.q + g.q, prod[None])


@dataclass(frozen=True, eq=False)
class MomentumValueC:
    F02: FourierForm
    restrictions: tuple   # CurveForm per polar component, the dz2bar part of A there
    x: float = 1.0


def momentum_c(sigma: MeromorphicTwoForm, A: FourierForm) -> MomentumValueC:
    _check(A, 1, "A")
    E1 = sigma.surface.E1
    rs = []
    for comp in sigma.components():
        x, y = E1.to_angles(comp.location)
        rs.append(A.restrict(float(x), float(y)))
    return MomentumValueC(curvature_c(A), tuple(rs), 1.0)


def dual_pairing_c(sigma: MeromorphicTwoForm, mu: MomentumValueC, eps: FourierForm, z: complex = 0.0,
                   scheme: QuadratureScheme | None = None) -> complex:
    """<(F, C, x), (eps, z)> = int sigma ^ tr(eps F) - 2 pi i sum res int_E2 tr(eps|_P C) + z x.

    The polar sum uses the same orientation as ``polar_pairing``.
    """
    _check(eps, 0, "eps")
    bulk = chain_pair(sigma, wedge(eps, mu.F02), scheme)
    E1 = sigma.surface.E1
    area = sigma.surface.E2.area
    edge = 0j
    for comp, C in zip(sigma.components(), mu.restrictions):
        x, y = E1.to_angles(comp.location)
        prod = _curve_product(eps.restrict(float(x), float(y)), C)
        edge += comp.residue_sign * 2j * area * np.trace(prod.mean())
    return complex(bulk - 2j * np.pi * edge + z * mu.x)
