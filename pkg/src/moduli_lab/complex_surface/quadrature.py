"""Integrals of sigma ^ v over S with the 1/|z1| singularities of sigma resolved.

The E2 integral of a truncated Fourier series is exact (its zero mode),
which leaves a 2D integral over E1 of eta_p times a trigonometric
polynomial.  Around each pole a square patch of half-width ``patch`` (in
angle coordinates) is split into dyadic square annuli, 12 Gauss cells
each; the innermost square of half-width patch / 2^depth is left out.
Since 1/z is odd about the pole, the omitted piece is O(rho^2) in its
half-width rho.  The rest of the torus is a tensor grid of Gauss cells
whose breakpoints include the patch edges.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass, replace

import numpy as np

from .fourier import FormDegreeError, FourierForm, dbar
from .geometry import MeromorphicTwoForm


class QuadratureError(RuntimeError):
    """The singular quadrature failed to settle under refinement."""


@dataclass(frozen=True)
class QuadratureScheme:
    """``grid``: base cells per angle; ``depth``: number of dyadic annuli per pole."""

    grid: int = 32
    depth: int = 4
    patch: float = 1 / 32
    order: int = 10

    def __post_init__(self):
        if self.grid < 2 or self.depth < 0 or self.order < 1:
            raise ValueError("grid >= 2, depth >= 0 and order >= 1 are required")
        if not 0 < self.patch < 0.25:
            raise ValueError("patch half-width must lie in (0, 0.25)")

    def at_depth(self, depth: int) -> QuadratureScheme:
        return replace(self, depth=depth)

    def exclusion_radius(self, depth: int | None = None) -> float:
        d = self.depth if depth is None else depth
        return self.patch / 2 ** d


def _gauss(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    return 0.5 * (x + 1), 0.5 * w


def _tensor_cells(x0, x1, y0, y1, order):
    """Gauss nodes and weights on a batch of rectangles [x0,x1] x [y0,y1]."""
    g, w = _gauss(order)
    gx = x0[:, None] + (x1 - x0)[:, None] * g[None, :]
    gy = y0[:, None] + (y1 - y0)[:, None] * g[None, :]
    wx = (x1 - x0)[:, None] * w[None, :]
    wy = (y1 - y0)[:, None] * w[None, :]
    X = (gx[:, :, None] * np.ones(order)[None, None, :]).ravel()
    Y = (np.ones(order)[None, :, None] * gy[:, None, :]).ravel()
    W = (wx[:, :, None] * wy[:, None, :]).ravel()
    return X, Y, W


def _wrapped(d):
    return (d + 0.5) % 1.0 - 0.5


def _outer_nodes(poles, scheme: QuadratureScheme):
    h = scheme.patch
    bx = [np.linspace(0.0, 1.0, scheme.grid + 1)]
    by = [np.linspace(0.0, 1.0, scheme.grid + 1)]
    for px, py in poles:
        bx.append(np.array([(px - h) % 1.0, (px + h) % 1.0]))
        by.append(np.array([(py - h) % 1.0, (py + h) % 1.0]))

    def merge(parts):
        b = np.unique(np.concatenate(parts))
        keep = np.concatenate([[True], np.diff(b) > 1e-12])
        b = b[keep]
        if b[-1] < 1.0 - 1e-12:
            b = np.append(b, 1.0)
        b[-1] = 1.0
        return b

    bx, by = merge(bx), merge(by)
    X0, Y0 = np.meshgrid(bx[:-1], by[:-1], indexing="ij")
    X1, Y1 = np.meshgrid(bx[1:], by[1:], indexing="ij")
    cx, cy = 0.5 * (X0 + X1), 0.5 * (Y0 + Y1)
    inside = np.zeros(cx.shape, dtype=bool)
    for px, py in poles:
        inside |= (np.abs(_wrapped(cx - px)) < h) & (np.abs(_wrapped(cy - py)) < h)
    keep = ~inside
    return _tensor_cells(X0[keep], X1[keep], Y0[keep], Y1[keep], scheme.order)


def _annulus_nodes(px, py, half, order):
    """Square annulus between half-widths half/2 and half around (px, py)."""
    edges = np.linspace(-half, half, 5)
    cells = [(i, j) for i in range(4) for j in range(4) if not (i in (1, 2) and j in (1, 2))]
    x0 = np.array([edges[i] for i, _ in cells]) + px
    x1 = np.array([edges[i + 1] for i, _ in cells]) + px
    y0 = np.array([edges[j] for _, j in cells]) + py
    y1 = np.array([edges[j + 1] for _, j in cells]) + py
    return _tensor_cells(x0, x1, y0, y1, order)


class SigmaIntegrator:
    """Nodes and eta-weighted weights for integrals of sigma against E1 functions."""

    def __init__(self, sigma: MeromorphicTwoForm, scheme: QuadratureScheme):
        self.sigma = sigma
        self.scheme = scheme
        poles = sigma.pole_angles()
        parts = [_outer_nodes(poles, scheme)]
        for px, py in poles:
            for level in range(scheme.depth):
                parts.append(_annulus_nodes(px, py, scheme.patch / 2 ** level, scheme.order))
        self.x = np.concatenate([p[0] for p in parts])
        self.y = np.concatenate([p[1] for p in parts])
        w = np.concatenate([p[2] for p in parts])
        self.weights = w * sigma.eta_angles(self.x, self.y)
        self.factor = sigma.surface.volume_factor

    @property
    def n_nodes(self) -> int:
        return self.x.size

    def integrate_e1(self, coeffs2d: np.ndarray) -> complex:
        """sum of weights * eta * V for V = sum c[a, b] exp(2 pi i (a x + b y))."""
        K = (coeffs2d.shape[0] - 1) // 2
        k = np.arange(-K, K + 1)
        ex = np.exp(2j * np.pi * np.outer(self.x, k))
        ey = np.exp(2j * np.pi * np.outer(self.y, k))
        vals = np.einsum("pa,ab,pb->p", ex, coeffs2d, ey)
        return complex(np.dot(self.weights, vals))


@functools.lru_cache(maxsize=32)
def integrator(sigma: MeromorphicTwoForm, scheme: QuadratureScheme) -> SigmaIntegrator:
    return SigmaIntegrator(sigma, scheme)


def chain_pair(sigma: MeromorphicTwoForm, v: FourierForm, scheme: QuadratureScheme | None = None) -> complex:
    """Integral over S of sigma ^ tr(v) for a (0,2)-form v."""
    if v.q != 2:
        raise FormDegreeError("sigma pairs with (0,2)-forms")
    if v.surface != sigma.surface:
        raise FormDegreeError("form and sigma live on different surfaces")
    scheme = scheme or QuadratureScheme()
    V = np.trace(v.zero_mode_E2()[0], axis1=-2, axis2=-1)
    if not np.any(V):
        return 0j
    quad = integrator(sigma, scheme)
    return quad.factor * quad.integrate_e1(V)


# -- polar set ------------------------------------------------------------------------------

def polar_pairing(sigma: MeromorphicTwoForm, w: FourierForm) -> complex:
    """Sum over polar components of the integral of res sigma ^ tr(w) on E2.

    For a (0,1)-form w the restriction to {c} x E2 is w2 dz2bar, and the
    component integral is res * 2i * area(E2) * mean(w2).  The components
    are oriented as boundaries of tubes around P, which makes the
    Stokes-Leray formula read  int_S sigma ^ dbar u = 2 pi i * polar_pairing(u).
    """
    if w.q != 1:
        raise FormDegreeError("the polar pairing takes (0,1)-forms")
    total = 0j
    area = sigma.surface.E2.area
    E1 = sigma.surface.E1
    for comp in sigma.components():
        x, y = E1.to_angles(comp.location)
        r = w.restrict(float(x), float(y))
        total += comp.residue_sign * 2j * area * np.trace(r.mean())
    return complex(total)


# -- Stokes-Leray -----------------------------------------------------------------------------

@dataclass(frozen=True)
class StokesLerayResult:
    lhs: complex
    rhs: complex
    defect: float


def stokes_leray_check(sigma: MeromorphicTwoForm, u: FourierForm,
                       scheme: QuadratureScheme | None = None,
                       stall_tol: float = 0.1) -> StokesLerayResult:
    """Compare int_S sigma ^ dbar u with 2 pi i times the polar pairing of u.

    Raises QuadratureError when the last refinement step changes the lhs by
    more than ``stall_tol`` relative to (1 + |rhs|).
    """
    if u.q != 1:
        raise FormDegreeError("the Stokes-Leray check takes a (0,1)-form")
    scheme = scheme or QuadratureScheme()
    rhs = 2j * np.pi * polar_pairing(sigma, u)
    dbu = dbar(u)
    lhs = chain_pair(sigma, dbu, scheme)
    if scheme.depth > 0 and not sigma.is_closed:
        coarse = chain_pair(sigma, dbu, scheme.at_depth(scheme.depth - 1))
        if abs(lhs - coarse) > stall_tol * (1 + abs(rhs)):
            raise QuadratureError(f"lhs moved by {abs(lhs - coarse):.3e} at the last refinement")
    defect = float(abs(lhs - rhs) / (1 + abs(rhs)))
    return StokesLerayResult(complex(lhs), complex(rhs), defect)


def refinement_study(sigma: MeromorphicTwoForm, u: FourierForm, levels,
                     scheme: QuadratureScheme | None = None) -> list:
    """Stokes-Leray results at each depth in ``levels`` (no stall check)."""
    scheme = scheme or QuadratureScheme()
    return [stokes_leray_check(sigma, u, scheme.at_depth(L), stall_tol=np.inf) for L in levels]


def observed_order(defects) -> float:
    """Smallest log2 ratio between consecutive defects of a dyadic refinement sequence."""
    d = np.asarray(defects, dtype=float)
    if d.size < 2:
        return np.nan
    with np.errstate(divide="ignore"):
        return float(np.min(np.log2(d[:-1] / d[1:])))
