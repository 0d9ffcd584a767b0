"""Truncated Fourier (0,q)-forms on S = E1 x E2 with matrix values.

A form is stored as ``coeffs[c, k1, k2, k3, k4]`` (each index shifted by K)
holding the n x n coefficient of exp(2 pi i (k1 x1 + k2 y1 + k3 x2 + k4 y2))
in component c.  Components: q = 0 has one, q = 1 has (dz1bar, dz2bar),
q = 2 has dz1bar ^ dz2bar.  Products convolve coefficient tensors via FFT,
so the frequency range grows and nothing is truncated.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import EllipticProductSurface
from .weierstrass import EllipticCurve

NCOMP = {0: 1, 1: 2, 2: 1}


class FormDegreeError(ValueError):
    """An operation received a form of the wrong bidegree."""


def dbar_symbol(E: EllipticCurve, K: int) -> np.ndarray:
    """Multiplier of d/dzbar on exp(2 pi i (a x + b y)), indexed [a + K, b + K]."""
    k = np.arange(-K, K + 1)
    a, b = np.meshgrid(k, k, indexing="ij")
    tau = E.tau
    return np.pi * (a * tau - b) / (tau.imag * np.conj(E.omega1))


def _pad(c: np.ndarray, K: int, axes) -> np.ndarray:
    Kc = (c.shape[axes[0]] - 1) // 2
    if K == Kc:
        return c
    if K < Kc:
        raise ValueError("cannot pad to a smaller frequency range")
    width = [(0, 0)] * c.ndim
    for ax in axes:
        width[ax] = (K - Kc, K - Kc)
    return np.pad(c, width)


def _convolve(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Matrix-valued 4D linear convolution; x, y have shape (M, M, M, M, n, n)."""
    L = x.shape[0] + y.shape[0] - 1
    axes = (0, 1, 2, 3)
    fx = np.fft.fftn(x, s=(L,) * 4, axes=axes)
    fy = np.fft.fftn(y, s=(L,) * 4, axes=axes)
    return np.fft.ifftn(np.einsum("abcdij,abcdjk->abcdik", fx, fy), axes=axes)


@dataclass(frozen=True, eq=False)
class FourierForm:
    surface: EllipticProductSurface
    q: int
    coeffs: np.ndarray

    def __post_init__(self):
        if self.q not in NCOMP:
            raise FormDegreeError(f"bidegree (0,{self.q}) is not supported")
        c = np.array(self.coeffs, dtype=complex)
        if c.ndim != 7 or c.shape[0] != NCOMP[self.q]:
            raise FormDegreeError(f"coefficient tensor has shape {c.shape}")
        M = c.shape[1]
        if M % 2 == 0 or c.shape[1:5] != (M,) * 4 or c.shape[5] != c.shape[6]:
            raise FormDegreeError(f"coefficient tensor has shape {c.shape}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def K(self) -> int:
        return (self.coeffs.shape[1] - 1) // 2

    @property
    def n(self) -> int:
        return self.coeffs.shape[-1]

    def padded(self, K: int) -> FourierForm:
        return FourierForm(self.surface, self.q, _pad(self.coeffs, K, (1, 2, 3, 4)))

    def _align(self, other: FourierForm):
        if not isinstance(other, FourierForm):
            return NotImplemented
        if other.q != self.q or other.n != self.n or other.surface != self.surface:
            raise FormDegreeError("forms differ in bidegree, size or surface")
        K = max(self.K, other.K)
        return self.padded(K).coeffs, other.padded(K).coeffs

    def __add__(self, other):
        a, b = self._align(other)
        return FourierForm(self.surface, self.q, a + b)

    def __sub__(self, other):
        a, b = self._align(other)
        return FourierForm(self.surface, self.q, a - b)

    def __neg__(self):
        return FourierForm(self.surface, self.q, -self.coeffs)

    def __mul__(self, scalar):
        return FourierForm(self.surface, self.q, scalar * self.coeffs)

    __rmul__ = __mul__

    def trace(self) -> FourierForm:
        return FourierForm(self.surface, self.q, np.trace(self.coeffs, axis1=-2, axis2=-1)[..., None, None])

    def component(self, c: int) -> FourierForm:
        """The c-th coefficient function as a (0,0)-form."""
        return FourierForm(self.surface, 0, self.coeffs[c:c + 1])

    def trimmed(self, tol: float = 0.0) -> FourierForm:
        """Drop outer frequency shells whose coefficients are all below ``tol``."""
        K = self.K
        mags = np.abs(self.coeffs).max(axis=(0, 5, 6))
        while K > 0:
            idx = np.arange(-K, K + 1) + self.K
            shell = np.ones((2 * K + 1,) * 4, dtype=bool)
            shell[1:-1, 1:-1, 1:-1, 1:-1] = False
            sub = mags[np.ix_(idx, idx, idx, idx)]
            if sub[shell].max() > tol:
                break
            K -= 1
        lo = self.K - K
        sl = slice(lo, lo + 2 * K + 1)
        return FourierForm(self.surface, self.q, self.coeffs[:, sl, sl, sl, sl])

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.coeffs), initial=0.0))

    def frequencies(self, tol: float = 0.0):
        """Integer 4-vectors carrying a coefficient above ``tol``."""
        mags = np.abs(self.coeffs).max(axis=(0, 5, 6))
        return np.argwhere(mags > tol) - self.K

    def evaluate(self, theta) -> np.ndarray:
        """Values at angle points theta of shape (npts, 4); returns (npts, ncomp, n, n)."""
        theta = np.atleast_2d(np.asarray(theta, dtype=float))
        k = np.arange(-self.K, self.K + 1)
        e = [np.exp(2j * np.pi * np.outer(theta[:, i], k)) for i in range(4)]
        return np.einsum("pa,pb,pc,pd,sabcdij->psij", *e, self.coeffs, optimize=True)

    def zero_mode_E2(self) -> np.ndarray:
        """Average over E2: coefficients (ncomp, M, M, n, n) over the E1 frequencies."""
        return self.coeffs[:, :, :, self.K, self.K]

    def restrict(self, x1: float, y1: float) -> CurveForm:
        """Pull back to {z1} x E2 at angle coordinates (x1, y1) of z1.

        Only the dz2bar component of a (0,1)-form survives; (0,2)-forms
        restrict to zero on a curve.
        """
        k = np.arange(-self.K, self.K + 1)
        ex = np.exp(2j * np.pi * k * x1)
        ey = np.exp(2j * np.pi * k * y1)
        vals = np.einsum("a,b,sabcdij->scdij", ex, ey, self.coeffs)
        E2 = self.surface.E2
        if self.q == 0:
            return CurveForm(E2, 0, vals)
        if self.q == 1:
            return CurveForm(E2, 1, vals[1:2])
        return CurveForm(E2, 1, np.zeros_like(vals))


@dataclass(frozen=True, eq=False)
class CurveForm:
    """Truncated Fourier (0,q)-form on a single elliptic curve, q in {0, 1}.

    ``coeffs`` has shape (1, M, M, n, n); for q = 1 it is the dzbar coefficient.
    """

    curve: EllipticCurve
    q: int
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex)
        if self.q not in (0, 1) or c.ndim != 5 or c.shape[0] != 1 or c.shape[1] != c.shape[2]:
            raise FormDegreeError(f"curve form of degree {self.q} with shape {c.shape}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def K(self) -> int:
        return (self.coeffs.shape[1] - 1) // 2

    @property
    def n(self) -> int:
        return self.coeffs.shape[-1]

    def padded(self, K: int) -> CurveForm:
        return CurveForm(self.curve, self.q, _pad(self.coeffs, K, (1, 2)))

    def __add__(self, other):
        if not isinstance(other, CurveForm):
            return NotImplemented
        if other.q != self.q or other.n != self.n or other.curve != self.curve:
            raise FormDegreeError("curve forms differ in degree, size or curve")
        K = max(self.K, other.K)
        return CurveForm(self.curve, self.q, self.padded(K).coeffs + other.padded(K).coeffs)

    def __mul__(self, scalar):
        return CurveForm(self.curve, self.q, scalar * self.coeffs)

    __rmul__ = __mul__

    def mean(self) -> np.ndarray:
        """Average over the curve (the zero mode), an n x n matrix."""
        return self.coeffs[0, self.K, self.K]

    def dbar(self) -> CurveForm:
        if self.q != 0:
            raise FormDegreeError("dbar of a (0,1)-form on a curve vanishes identically")
        sym = dbar_symbol(self.curve, self.K)
        return CurveForm(self.curve, 1, sym[None, :, :, None, None] * self.coeffs)

    def evaluate(self, x, y) -> np.ndarray:
        k = np.arange(-self.K, self.K + 1)
        ex = np.exp(2j * np.pi * np.outer(np.atleast_1d(x), k))
        ey = np.exp(2j * np.pi * np.outer(np.atleast_1d(y), k))
        return np.einsum("pa,pb,abij->pij", ex, ey, self.coeffs[0])

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.coeffs), initial=0.0))


# -- calculus -----------------------------------------------------------------------------

def dbar(f: FourierForm) -> FourierForm:
    """The reference operator dbar, diagonal in Fourier space."""
    if f.q >= 2:
        raise FormDegreeError("dbar of a (0,2)-form leaves the surface's bidegree range")
    K = f.K
    s1 = dbar_symbol(f.surface.E1, K)[:, :, None, None, None, None]
    s2 = dbar_symbol(f.surface.E2, K)[None, None, :, :, None, None]
    c = f.coeffs
    if f.q == 0:
        return FourierForm(f.surface, 1, np.stack([s1 * c[0], s2 * c[0]]))
    return FourierForm(f.surface, 2, (s1 * c[1] - s2 * c[0])[None])


def wedge(a: FourierForm, b: FourierForm) -> FourierForm:
    """Matrix-valued wedge product a ^ b (matrix product of coefficients)."""
    if a.surface != b.surface or a.n != b.n:
        raise FormDegreeError("wedge of forms on different surfaces or sizes")
    q = a.q + b.q
    if q > 2:
        raise FormDegreeError(f"a (0,{q})-form vanishes on a complex surface")
    A, B = a.coeffs, b.coeffs
    if a.q == 0:
        out = np.stack([_convolve(A[0], B[c]) for c in range(B.shape[0])])
    elif b.q == 0:
        out = np.stack([_convolve(A[c], B[0]) for c in range(A.shape[0])])
    else:
        out = (_convolve(A[0], B[1]) - _convolve(A[1], B[0]))[None]
    return FourierForm(a.surface, q, out)


def graded_bracket(a: FourierForm, b: FourierForm) -> FourierForm:
    """[a, b] = a ^ b - (-1)^(qa qb) b ^ a."""
    sign = -1 if (a.q * b.q) % 2 else 1
    return wedge(a, b) - sign * wedge(b, a)


# -- constructors --------------------------------------------------------------------------

def zero_form(surface: EllipticProductSurface, q: int, n: int = 1, K: int = 0) -> FourierForm:
    M = 2 * K + 1
    return FourierForm(surface, q, np.zeros((NCOMP[q], M, M, M, M, n, n), dtype=complex))


def constant_form(surface: EllipticProductSurface, q: int, values) -> FourierForm:
    """Constant coefficients; ``values`` is a list of n x n matrices, one per component."""
    values = [np.atleast_2d(np.asarray(v, dtype=complex)) for v in values]
    if len(values) != NCOMP[q]:
        raise FormDegreeError(f"(0,{q})-forms have {NCOMP[q]} components")
    n = values[0].shape[0]
    c = np.zeros((NCOMP[q], 1, 1, 1, 1, n, n), dtype=complex)
    for i, v in enumerate(values):
        c[i, 0, 0, 0, 0] = v
    return FourierForm(surface, q, c)


def mode_form(surface: EllipticProductSurface, q: int, comp: int, k, value, K: int | None = None) -> FourierForm:
    """A single Fourier mode exp(2 pi i k . theta) times ``value`` in component ``comp``."""
    k = tuple(int(v) for v in k)
    value = np.atleast_2d(np.asarray(value, dtype=complex))
    if K is None:
        K = max(abs(v) for v in k)
    f = zero_form(surface, q, value.shape[0], K)
    c = f.coeffs.copy()
    c[(comp,) + tuple(v + K for v in k)] = value
    return FourierForm(surface, q, c)


def random_form(surface: EllipticProductSurface, q: int, n: int, K: int,
                rng: np.random.Generator, scale: float = 1.0, decay: float = 1.0) -> FourierForm:
    """Random complex coefficients damped by (1 + |k|^2)^(-decay), normalized to max size ``scale``."""
    M = 2 * K + 1
    shape = (NCOMP[q], M, M, M, M, n, n)
    c = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    k = np.arange(-K, K + 1)
    k2 = (k[:, None, None, None] ** 2 + k[None, :, None, None] ** 2
          + k[None, None, :, None] ** 2 + k[None, None, None, :] ** 2)
    c *= ((1.0 + k2) ** (-decay))[None, :, :, :, :, None, None]
    c *= scale / np.max(np.abs(c))
    return FourierForm(surface, q, c)
