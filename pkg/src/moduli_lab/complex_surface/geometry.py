"""The product surface S = E1 x E2 and the meromorphic 2-form sigma with its polar set.

sigma = (zeta(z1) - zeta(z1 - p)) dz1 ^ dz2 has simple poles along
{0} x E2 and {p} x E2.  With p = None the form is the holomorphic dz1 ^ dz2
and the polar set is empty.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .weierstrass import EllipticCurve


class PolarSetError(ValueError):
    """A component that does not belong to the polar set of sigma."""


@dataclass(frozen=True)
class EllipticProductSurface:
    E1: EllipticCurve
    E2: EllipticCurve

    @classmethod
    def from_taus(cls, tau1: complex, tau2: complex) -> EllipticProductSurface:
        return cls(EllipticCurve.from_tau(tau1), EllipticCurve.from_tau(tau2))

    @property
    def volume_factor(self) -> float:
        """dz1 dz2 dz1bar dz2bar = volume_factor * dx1 dy1 dx2 dy2 in angle coordinates."""
        return 4.0 * self.E1.area * self.E2.area


@dataclass(frozen=True)
class PolarComponent:
    location: complex
    residue_sign: int
    index: int

    @property
    def residue_form(self) -> complex:
        """Coefficient of dz2 in the residue of sigma along this component."""
        return complex(self.residue_sign)


@dataclass(frozen=True)
class MeromorphicTwoForm:
    surface: EllipticProductSurface
    p: complex | None = 0.5

    def __post_init__(self):
        if self.p is None:
            return
        p = complex(self.p)
        object.__setattr__(self, "p", p)
        x, y = self.surface.E1.to_angles(p)
        if abs(x - round(float(x))) < 1e-9 and abs(y - round(float(y))) < 1e-9:
            raise PolarSetError("the pole offset p must not be a lattice point")

    @classmethod
    def closed(cls, surface: EllipticProductSurface) -> MeromorphicTwoForm:
        return cls(surface, None)

    @property
    def is_closed(self) -> bool:
        return self.p is None

    def eta(self, z1):
        """Coefficient eta_p(z1) of dz1 ^ dz2."""
        z1 = np.asarray(z1, dtype=complex)
        if self.is_closed:
            return np.ones_like(z1)
        E1 = self.surface.E1
        return E1.zeta(z1) - E1.zeta(z1 - self.p)

    def eta_angles(self, x, y):
        return self.eta(self.surface.E1.to_point(x, y))

    def components(self) -> tuple:
        if self.is_closed:
            return ()
        return (PolarComponent(0j, 1, 0), PolarComponent(self.p, -1, 1))

    def pole_angles(self) -> list:
        """Angle coordinates (x1, y1) of the poles of eta_p, reduced to [0, 1)."""
        out = []
        for c in self.components():
            x, y = self.surface.E1.to_angles(c.location)
            out.append((float(x) % 1.0, float(y) % 1.0))
        return out

    def _check(self, comp: PolarComponent):
        if comp not in self.components():
            raise PolarSetError(f"{comp} is not a component of the polar set")


def residue_of_sigma(sigma: MeromorphicTwoForm, comp: PolarComponent) -> complex:
    """dz2-coefficient of the residue along ``comp`` (symbolic: +1 at 0, -1 at p)."""
    sigma._check(comp)
    return comp.residue_form


def contour_residue(sigma: MeromorphicTwoForm, comp: PolarComponent,
                    radius: float | None = None, npts: int = 256) -> complex:
    """(1 / 2 pi i) times the contour integral of eta_p around the component's location."""
    sigma._check(comp)
    E1 = sigma.surface.E1
    if radius is None:
        shifts = [m * E1.omega1 + n * E1.omega2 for m in range(-2, 3) for n in range(-2, 3)]
        sep = min([abs(w) for w in shifts if w != 0] + [abs(sigma.p + w) for w in shifts])
        radius = 0.25 * sep
    theta = 2 * np.pi * np.arange(npts) / npts
    z = comp.location + radius * np.exp(1j * theta)
    # dz = i r e^{i theta} d theta; trapezoid on a periodic integrand
    integral = np.mean(sigma.eta(z) * 1j * radius * np.exp(1j * theta)) * 2 * np.pi
    return complex(integral / (2j * np.pi))
