"""Piecewise-polynomial, matrix-valued differential forms on a triangulated surface.

On triangle f a form of degree q is stored as polynomial coefficients in the
reference coordinates (s, t)::

    coeffs[f, c, i, j] = n x n matrix multiplying s**i t**j

with component index c = 0 for 0- and 2-forms (the 2-form is
``coeffs * ds^dt``) and c in {0, 1} for the ds and dt parts of a 1-form.
Products are kept exactly (the polynomial degree grows), so every identity
that holds for smooth forms holds here up to rounding.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

import numpy as np

from ..lie import StructureGroup, random_algebra_matrix
from .mesh import LOCAL_EDGES, SurfaceError, TriangulatedSurface

# gradients of the barycentric coordinates (1 - s - t, s, t) in (ds, dt) components
_DLAMBDA = np.array([[-1.0, -1.0], [1.0, 0.0], [0.0, 1.0]])
MAX_POLY_DEGREE = 40


def _ncomp(degree: int) -> int:
    return 2 if degree == 1 else 1


@dataclass(frozen=True, eq=False)
class PwPolyForm:
    surface: TriangulatedSurface
    degree: int
    coeffs: np.ndarray

    def __post_init__(self):
        if self.degree not in (0, 1, 2):
            raise SurfaceError(f"form degree must be 0, 1 or 2, got {self.degree}")
        c = np.asarray(self.coeffs, dtype=complex)
        if c.ndim != 6 or c.shape[0] != self.surface.n_triangles or c.shape[1] != _ncomp(self.degree):
            raise SurfaceError(f"bad coefficient shape {c.shape} for a {self.degree}-form")
        if c.shape[2] != c.shape[3] or c.shape[4] != c.shape[5]:
            raise SurfaceError("coefficient arrays must be square in both polynomial and matrix axes")
        c = c.copy()
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    # -- shape helpers -----------------------------------------------------

    @property
    def n(self) -> int:
        return self.coeffs.shape[-1]

    @property
    def size(self) -> int:
        """Polynomial array side P (monomials s^i t^j with i, j < P)."""
        return self.coeffs.shape[2]

    @property
    def poly_degree(self) -> int:
        nz = np.any(self.coeffs != 0, axis=(0, 1, 4, 5))
        idx = np.argwhere(nz)
        return int(idx.sum(axis=1).max()) if len(idx) else 0

    def _like(self, coeffs, degree=None):
        return PwPolyForm(self.surface, self.degree if degree is None else degree, coeffs)

    def _check(self, other):
        if other.surface is not self.surface:
            raise SurfaceError("forms live on different surfaces")
        if other.n != self.n:
            raise SurfaceError(f"matrix sizes differ: {self.n} vs {other.n}")

    # -- linear structure --------------------------------------------------

    def __add__(self, other):
        self._check(other)
        if other.degree != self.degree:
            raise SurfaceError("cannot add forms of different degree")
        a, b = _pad_pair(self.coeffs, other.coeffs)
        return self._like(a + b)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return self._like(-self.coeffs)

    def __mul__(self, scalar):
        return self._like(scalar * self.coeffs)

    __rmul__ = __mul__

    def scale_matrix(self, left=None, right=None):
        """Multiply every coefficient by constant matrices: left @ c @ right."""
        c = self.coeffs
        if left is not None:
            c = np.einsum("ab,...bc->...ac", left, c)
        if right is not None:
            c = np.einsum("...ab,bc->...ac", c, right)
        return self._like(c)

    def trace(self):
        return self._like(np.einsum("...ii->...", self.coeffs)[..., None, None])

    def evaluate(self, f: int, s, t) -> np.ndarray:
        """Values at points of triangle f, shape (npts, ncomp, n, n)."""
        s, t = np.atleast_1d(s), np.atleast_1d(t)
        P = self.size
        vs = s[:, None] ** np.arange(P)
        vt = t[:, None] ** np.arange(P)
        return np.einsum("pi,pj,cijab->pcab", vs, vt, self.coeffs[f])

    def restrict_edge(self, f: int, local_edge: int) -> np.ndarray:
        """Pull back to the oriented local edge, parametrized by lambda in [0, 1].

        Returns 1D coefficients in lambda of shape (L, n, n): the value for a
        0-form, the d(lambda) coefficient for a 1-form.
        """
        if self.degree == 2:
            raise SurfaceError("2-forms restrict to zero on edges")
        T = _edge_transfer(self.size, local_edge)
        c = self.coeffs[f]
        if self.degree == 0:
            return np.einsum("lij,ijab->lab", T, c[0])
        ds, dt = _EDGE_VELOCITY[local_edge]
        return np.einsum("lij,ijab->lab", T, ds * c[0] + dt * c[1])

    def continuity_defect(self) -> float:
        """Max mismatch of (tangential) traces across interior edges."""
        if self.degree == 2:
            return 0.0
        worst = 0.0
        for entries in self.surface.edge_incidence.values():
            if len(entries) != 2:
                continue
            (f1, e1, s1), (f2, e2, s2) = entries
            q1 = self.restrict_edge(f1, e1)
            q2 = _reverse_param(self.restrict_edge(f2, e2))
            if self.degree == 1:
                q2 = -q2
            worst = max(worst, float(np.max(np.abs(q1 - q2))))
        return worst


_EDGE_VELOCITY = ((1.0, 0.0), (-1.0, 1.0), (0.0, -1.0))


@lru_cache(maxsize=None)
def _edge_transfer(P: int, local_edge: int) -> np.ndarray:
    """Matrix T[l, i, j]: coefficient of lambda^l in s^i t^j along the edge."""
    L = 2 * P - 1
    T = np.zeros((L, P, P))
    for i in range(P):
        for j in range(P):
            if local_edge == 0:      # s = lam, t = 0
                if j == 0:
                    T[i, i, 0] = 1.0
            elif local_edge == 1:    # s = 1 - lam, t = lam
                for r in range(i + 1):
                    T[j + r, i, j] += comb(i, r) * (-1) ** r
            else:                    # s = 0, t = 1 - lam
                if i == 0:
                    for r in range(j + 1):
                        T[r, 0, j] += comb(j, r) * (-1) ** r
    return T


def _reverse_param(q: np.ndarray) -> np.ndarray:
    """Coefficients of p(1 - lam) from those of p(lam)."""
    L = q.shape[0]
    R = np.zeros((L, L))
    for m in range(L):
        for r in range(m + 1):
            R[r, m] = comb(m, r) * (-1) ** r
    return np.einsum("rm,m...->r...", R, q)


@lru_cache(maxsize=None)
def _moments(P: int) -> np.ndarray:
    """Exact integrals of s^i t^j over the reference triangle."""
    M = np.zeros((P, P))
    for i in range(P):
        for j in range(P):
            M[i, j] = float(Fraction(factorial(i) * factorial(j), factorial(i + j + 2)))
    return M


def _pad(c: np.ndarray, P: int) -> np.ndarray:
    if c.shape[2] == P:
        return c
    out = np.zeros(c.shape[:2] + (P, P) + c.shape[4:], dtype=complex)
    out[:, :, :c.shape[2], :c.shape[3]] = c
    return out


def _pad_pair(a, b):
    P = max(a.shape[2], b.shape[2])
    return _pad(a, P), _pad(b, P)


def _polymul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Product of per-triangle matrix polynomials, shapes (F, P, P, n, m) x (F, Q, Q, m, r)."""
    F, P = a.shape[0], a.shape[1]
    Q = b.shape[1]
    out = np.zeros((F, P + Q - 1, P + Q - 1, a.shape[-2], b.shape[-1]), dtype=complex)
    live = np.argwhere(np.any(a != 0, axis=(0, 3, 4)))
    for i, j in live:
        out[:, i:i + Q, j:j + Q] += np.einsum("fab,fijbc->fijac", a[:, i, j], b)
    return out


def _trim(c: np.ndarray) -> np.ndarray:
    """Drop trailing all-zero polynomial rows/columns."""
    nz = np.any(c != 0, axis=(0, 1, 4, 5))
    idx = np.argwhere(nz)
    P = int(idx.max()) + 1 if len(idx) else 1
    if P > MAX_POLY_DEGREE + 1:
        raise SurfaceError(f"polynomial degree exceeds supported order {MAX_POLY_DEGREE}")
    return np.ascontiguousarray(c[:, :, :P, :P])


# -- calculus ------------------------------------------------------------------

def _diff(c: np.ndarray, axis: int) -> np.ndarray:
    """Derivative along s (axis 0) or t (axis 1) of (F, P, P, n, n) coefficients."""
    P = c.shape[1]
    out = np.zeros_like(c)
    k = np.arange(1, P)
    if axis == 0:
        out[:, :-1] = c[:, 1:] * k[None, :, None, None, None]
    else:
        out[:, :, :-1] = c[:, :, 1:] * k[None, None, :, None, None]
    return out


def exterior_d(f: PwPolyForm) -> PwPolyForm:
    """Exterior derivative, exact on each triangle."""
    c = f.coeffs
    if f.degree == 0:
        out = np.stack([_diff(c[:, 0], 0), _diff(c[:, 0], 1)], axis=1)
        return f._like(_trim(out), degree=1)
    if f.degree == 1:
        out = (_diff(c[:, 1], 0) - _diff(c[:, 0], 1))[:, None]
        return f._like(_trim(out), degree=2)
    raise SurfaceError("exterior derivative of a 2-form on a surface is not defined here")


def wedge(a: PwPolyForm, b: PwPolyForm) -> PwPolyForm:
    """Wedge product with matrix multiplication of the values (a on the left)."""
    a._check(b)
    deg = a.degree + b.degree
    if deg > 2:
        return a._like(np.zeros((a.surface.n_triangles, 1, 1, 1, a.n, a.n), dtype=complex), degree=2)
    ca, cb = a.coeffs, b.coeffs
    if a.degree == 0:
        out = np.stack([_polymul(ca[:, 0], cb[:, c]) for c in range(cb.shape[1])], axis=1)
    elif b.degree == 0:
        out = np.stack([_polymul(ca[:, c], cb[:, 0]) for c in range(ca.shape[1])], axis=1)
    else:
        out = (_polymul(ca[:, 0], cb[:, 1]) - _polymul(ca[:, 1], cb[:, 0]))[:, None]
    return a._like(_trim(out), degree=deg)


def graded_bracket(a: PwPolyForm, b: PwPolyForm) -> PwPolyForm:
    """[a, b] = a^b - (-1)^{pq} b^a; for a 1-form and a 0-form this is A eps - eps A."""
    sign = -1 if (a.degree * b.degree) % 2 else 1
    return wedge(a, b) - sign * wedge(b, a)


def integrate_surface(w: PwPolyForm) -> complex:
    """Integral of a 2-form over the surface; matrix-valued forms are traced first."""
    if w.degree != 2:
        raise SurfaceError("only 2-forms integrate over the surface")
    if w.n > 1:
        w = w.trace()
    M = _moments(w.size)
    return complex(np.einsum("fij,ij->", w.coeffs[:, 0, :, :, 0, 0], M))


def integrate_boundary(w: PwPolyForm, loop: int | None = None) -> complex:
    """Integral of a 1-form over the oriented boundary (or one boundary loop)."""
    if w.degree != 1:
        raise SurfaceError("only 1-forms integrate over the boundary")
    if w.n > 1:
        w = w.trace()
    edges = w.surface.boundary_edges if loop is None else w.surface.loop_edges(loop)
    total = 0j
    for f, le in edges:
        q = w.restrict_edge(f, le)[:, 0, 0]
        total += np.sum(q / np.arange(1, len(q) + 1))
    return complex(total)


# -- constructors ----------------------------------------------------------------

def zero_form(surface: TriangulatedSurface, degree: int, n: int) -> PwPolyForm:
    return PwPolyForm(surface, degree, np.zeros((surface.n_triangles, _ncomp(degree), 1, 1, n, n), dtype=complex))


def constant_zero_form(surface: TriangulatedSurface, value) -> PwPolyForm:
    value = np.atleast_2d(np.asarray(value, dtype=complex))
    c = np.zeros((surface.n_triangles, 1, 1, 1) + value.shape, dtype=complex)
    c[:, 0, 0, 0] = value
    return PwPolyForm(surface, 0, c)


def _barycentric(local: int) -> np.ndarray:
    lam = np.zeros((2, 2))
    if local == 0:
        lam[0, 0], lam[1, 0], lam[0, 1] = 1.0, -1.0, -1.0
    elif local == 1:
        lam[1, 0] = 1.0
    else:
        lam[0, 1] = 1.0
    return lam


def p1_zero_form(surface: TriangulatedSurface, vertex_values) -> PwPolyForm:
    """Continuous piecewise-linear 0-form with the given values at vertices."""
    vals = np.asarray(vertex_values, dtype=complex)
    if vals.ndim == 1:
        vals = vals[:, None, None]
    n = vals.shape[-1]
    c = np.zeros((surface.n_triangles, 1, 2, 2, n, n), dtype=complex)
    for local in range(3):
        c[:, 0] += np.einsum("ij,fab->fijab", _barycentric(local), vals[surface.triangles[:, local]])
    return PwPolyForm(surface, 0, c)


def p2_zero_form(surface: TriangulatedSurface, vertex_values, edge_values) -> PwPolyForm:
    """Continuous 0-form sum_v X_v lam_v + sum_e Y_e lam_a lam_b (edge bubbles)."""
    base = p1_zero_form(surface, vertex_values)
    ev = np.asarray(edge_values, dtype=complex)
    if ev.ndim == 1:
        ev = ev[:, None, None]
    n = ev.shape[-1]
    c = np.zeros((surface.n_triangles, 1, 3, 3, n, n), dtype=complex)
    lam = [np.pad(_barycentric(l), ((0, 1), (0, 1))) for l in range(3)]
    for i, j in LOCAL_EDGES:
        a, b = surface.triangles[:, i], surface.triangles[:, j]
        idx = [surface.edge_index[(int(min(x, y)), int(max(x, y)))] for x, y in zip(a, b)]
        bubble = _scalar_polymul(lam[i], lam[j])[:3, :3]
        c[:, 0] += np.einsum("ij,fab->fijab", bubble, ev[idx])
    return base + PwPolyForm(surface, 0, c)


def _scalar_polymul(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    out = np.zeros((p.shape[0] + q.shape[0] - 1, p.shape[1] + q.shape[1] - 1))
    for i, j in np.argwhere(p != 0):
        out[i:i + q.shape[0], j:j + q.shape[1]] += p[i, j] * q
    return out


def whitney_one_form(surface: TriangulatedSurface, edge_values) -> PwPolyForm:
    """Sum of lowest-order Whitney 1-forms, edges oriented from lower to higher vertex id."""
    ev = np.asarray(edge_values, dtype=complex)
    if ev.ndim == 1:
        ev = ev[:, None, None]
    n = ev.shape[-1]
    c = np.zeros((surface.n_triangles, 2, 2, 2, n, n), dtype=complex)
    for i, j in LOCAL_EDGES:
        a, b = surface.triangles[:, i], surface.triangles[:, j]
        sign = np.where(a < b, 1.0, -1.0)
        idx = [surface.edge_index[(int(min(x, y)), int(max(x, y)))] for x, y in zip(a, b)]
        vals = ev[idx] * sign[:, None, None]
        lam_i, lam_j = _barycentric(i), _barycentric(j)
        for comp in range(2):
            poly = lam_i * _DLAMBDA[j, comp] - lam_j * _DLAMBDA[i, comp]
            c[:, comp] += np.einsum("ij,fab->fijab", poly, vals)
    return PwPolyForm(surface, 1, c)


def bubble_one_form(surface: TriangulatedSurface, f: int, component: int, monomial=(0, 0), value=None) -> PwPolyForm:
    """lam0 lam1 lam2 s^i t^j d(s or t) supported in triangle f; vanishes on all edges."""
    value = np.eye(1) if value is None else np.atleast_2d(value)
    bub = _scalar_polymul(_scalar_polymul(_barycentric(0), _barycentric(1)), _barycentric(2))
    mono = np.zeros((monomial[0] + 1, monomial[1] + 1))
    mono[monomial] = 1.0
    poly = _scalar_polymul(bub, mono)
    P = max(poly.shape)
    c = np.zeros((surface.n_triangles, 2, P, P) + value.shape, dtype=complex)
    c[f, component, :poly.shape[0], :poly.shape[1]] = poly[:, :, None, None] * value
    return PwPolyForm(surface, 1, c)


def from_layout(surface: TriangulatedSurface, degree: int, components) -> PwPolyForm:
    """Pull back a global polynomial form written in layout coordinates (x, y).

    ``components`` holds coefficient arrays ``c[i, j]`` of x^i y^j: one array
    for a 0-form or for the dx^dy coefficient of a 2-form, two (dx, dy) for a
    1-form.  Arrays may carry trailing matrix axes.
    """
    comps = [np.asarray(c, dtype=complex) for c in components]
    comps = [c if c.ndim == 4 else c[..., None, None] for c in comps]
    n = comps[0].shape[-1]
    P = max(c.shape[0] for c in comps)
    cxy = surface.corner_xy
    out = np.zeros((surface.n_triangles, _ncomp(degree), P, P, n, n), dtype=complex)
    for f in range(surface.n_triangles):
        (x0, y0), (x1, y1), (x2, y2) = cxy[f]
        X = np.array([[x0, x2 - x0], [x1 - x0, 0.0]])  # x = x0 + (x1-x0) s + (x2-x0) t
        Y = np.array([[y0, y2 - y0], [y1 - y0, 0.0]])
        pulled = [_compose(c, X, Y, P) for c in comps]
        if degree == 0:
            out[f, 0] = pulled[0]
        elif degree == 1:
            out[f, 0] = pulled[0] * (x1 - x0) + pulled[1] * (y1 - y0)
            out[f, 1] = pulled[0] * (x2 - x0) + pulled[1] * (y2 - y0)
        else:
            jac = (x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0)
            out[f, 0] = pulled[0] * jac
    return PwPolyForm(surface, degree, _trim(out))


def _compose(c: np.ndarray, X: np.ndarray, Y: np.ndarray, P: int) -> np.ndarray:
    out = np.zeros((P, P) + c.shape[2:], dtype=complex)
    xpow = [np.ones((1, 1))]
    for _ in range(c.shape[0]):
        xpow.append(_scalar_polymul(xpow[-1], X))
    ypow = [np.ones((1, 1))]
    for _ in range(c.shape[1]):
        ypow.append(_scalar_polymul(ypow[-1], Y))
    for i, j in np.argwhere(np.any(c != 0, axis=(2, 3))):
        mono = _scalar_polymul(xpow[i], ypow[j])
        out[:mono.shape[0], :mono.shape[1]] += mono[:, :, None, None] * c[i, j]
    return out


def area_form(surface: TriangulatedSurface, density=1.0) -> PwPolyForm:
    """The constant 2-form density * dx^dy of the layout charts."""
    return from_layout(surface, 2, [np.full((1, 1), density)])


# -- random data -------------------------------------------------------------------

def random_zero_form(surface: TriangulatedSurface, group: StructureGroup, rng: np.random.Generator) -> PwPolyForm:
    """Continuous quadratic algebra-valued 0-form with coefficients of norm <= 1."""
    V, E = surface.n_vertices, len(surface.edges)
    vv = np.array([random_algebra_matrix(group, rng) for _ in range(V)])
    ev = np.array([random_algebra_matrix(group, rng) for _ in range(E)])
    return p2_zero_form(surface, vv, ev)


def random_one_form(surface: TriangulatedSurface, group: StructureGroup, rng: np.random.Generator) -> PwPolyForm:
    """Algebra-valued 1-form with continuous tangential traces.

    Whitney part + d(quadratic 0-form) + (real quadratic function) x (Whitney part).
    """
    E = len(surface.edges)
    w1 = whitney_one_form(surface, np.array([random_algebra_matrix(group, rng) for _ in range(E)]))
    w2 = whitney_one_form(surface, np.array([random_algebra_matrix(group, rng) for _ in range(E)]))
    h = random_zero_form(surface, group, rng)
    scal = p2_zero_form(surface, rng.uniform(-1, 1, surface.n_vertices), rng.uniform(-1, 1, E))
    scal = PwPolyForm(surface, 0, np.broadcast_to(scal.coeffs, scal.coeffs.shape[:4] + (1, 1)) * np.eye(group.n))
    return w1 + exterior_d(h) + wedge(scal, w2)
