"""Weierstrass zeta function and quasi-periods of a lattice Z w1 + Z w2.

Evaluation goes through a reduced basis (tau in the standard fundamental
domain, so the nome satisfies |q| <= exp(-pi sqrt(3)/2)) and the
q-expansion of zeta around the centered period cell.  Points outside that
cell are brought back with quasi-periodicity.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

ZETA_TOL = 1e-11


class LatticePointError(ValueError):
    """zeta was asked for its value at a pole."""


def _reduce_tau(tau: complex):
    """SL2(Z) matrix (a, b, c, d) with (a tau + b)/(c tau + d) in the fundamental domain."""
    a, b, c, d = 1, 0, 0, 1
    t = complex(tau)
    for _ in range(200):
        n = round(t.real)
        if n:
            t -= n
            a, b = a - n * c, b - n * d
        if abs(t) < 1 - 1e-14:
            t = -1 / t
            a, b, c, d = -c, -d, a, b
        else:
            break
    return t, (a, b, c, d)


@dataclass(frozen=True)
class EllipticCurve:
    """C / (Z w1 + Z w2) with Im(w2 / w1) > 0; eta1, eta2 are the quasi-periods."""

    omega1: complex
    omega2: complex
    eta1: complex = field(init=False, compare=False)
    eta2: complex = field(init=False, compare=False)
    _basis: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        w1, w2 = complex(self.omega1), complex(self.omega2)
        object.__setattr__(self, "omega1", w1)
        object.__setattr__(self, "omega2", w2)
        if w1 == 0 or (w2 / w1).imag <= 0:
            raise ValueError("periods must satisfy Im(omega2/omega1) > 0")
        tau_r, (a, b, c, d) = _reduce_tau(w2 / w1)
        # reduced basis: v2 = a w2 + b w1, v1 = c w2 + d w1
        v1 = c * w2 + d * w1
        v2 = a * w2 + b * w1
        q = np.exp(1j * np.pi * tau_r)
        nterms = int(np.ceil(40 / max(np.pi * tau_r.imag, 1e-3))) + 2
        n = np.arange(1, nterms + 1)
        q2n = q ** (2 * n)
        lam = q2n / (1 - q2n)
        e2 = 1 - 24 * np.sum(n * lam)
        h1 = np.pi ** 2 / (3 * v1) * e2
        object.__setattr__(self, "_basis", (v1, v2, h1, None, n, lam))
        # second quasi-period straight from the series at the half period
        h2 = 2 * self._zeta_cell(np.array([v2 / 2]))[0]
        object.__setattr__(self, "_basis", (v1, v2, h1, h2, n, lam))
        # w1 = a v1 - c v2 and w2 = d v2 - b v1 (inverse of a unimodular matrix)
        object.__setattr__(self, "eta1", complex(a * h1 - c * h2))
        object.__setattr__(self, "eta2", complex(d * h2 - b * h1))

    @classmethod
    def from_tau(cls, tau: complex) -> EllipticCurve:
        return cls(1.0, tau)

    @property
    def tau(self) -> complex:
        return self.omega2 / self.omega1

    @property
    def area(self) -> float:
        return float((self.omega1.conjugate() * self.omega2).imag)

    def legendre_defect(self) -> float:
        return float(abs(self.eta1 * self.omega2 - self.eta2 * self.omega1 - 2j * np.pi))

    def to_point(self, x, y):
        """Complex coordinate of the real angle coordinates (x, y)."""
        return self.omega1 * np.asarray(x) + self.omega2 * np.asarray(y)

    def to_angles(self, z):
        z = np.asarray(z, dtype=complex)
        w1, w2 = self.omega1, self.omega2
        det = (w1.conjugate() * w2).imag
        x = (z * w2.conjugate()).imag / (-det)
        y = (w1.conjugate() * z).imag / det
        return x, y

    def _zeta_cell(self, z: np.ndarray) -> np.ndarray:
        v1, _, h1, _, n, lam = self._basis
        u = np.pi * z / v1
        series = 4 * np.sum(lam[:, None] * np.sin(2 * n[:, None] * u[None, :]), axis=0)
        return h1 * z / v1 + np.pi / v1 * (1 / np.tan(u) + series)

    def zeta(self, z):
        """Weierstrass zeta, vectorized over z."""
        z = np.asarray(z, dtype=complex)
        shape = z.shape
        z = z.ravel()
        v1, v2, h1, h2, _, _ = self._basis
        det = (v1.conjugate() * v2).imag
        x = (z * v2.conjugate()).imag / (-det)
        y = (v1.conjugate() * z).imag / det
        m, k = np.round(x), np.round(y)
        z0 = z - m * v1 - k * v2
        scale = max(abs(v1), abs(v2))
        if np.any(np.abs(z0) <= 1e-14 * scale):
            raise LatticePointError("zeta has a pole at lattice points")
        out = self._zeta_cell(z0) + m * h1 + k * h2
        return out.reshape(shape)

    def quasi_period(self, m: int, n: int) -> complex:
        """zeta(z + m w1 + n w2) - zeta(z)."""
        return m * self.eta1 + n * self.eta2
