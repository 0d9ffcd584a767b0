"""Matrix Lie groups and algebras.

Every group is handled through a faithful matrix realization: SU(n) and
U(1) inside GL(n, C), C* as GL(1, C).  The invariant form ``tr`` is the
literal matrix trace of the defining representation.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

COMPACT_UNITARY = "compact-unitary"
COMPLEX_GENERAL = "complex-general"
ABELIAN_COMPACT = "abelian-compact"
ABELIAN_COMPLEX = "abelian-complex"

KINDS = (COMPACT_UNITARY, COMPLEX_GENERAL, ABELIAN_COMPACT, ABELIAN_COMPLEX)

STRUCTURAL_TOL = 1e-12
DERIVED_TOL = 1e-10


class LieError(ValueError):
    """Raised for size or group mismatches between Lie-theoretic objects."""


@dataclass(frozen=True)
class StructureGroup:
    kind: str
    n: int

    def __post_init__(self):
        if self.kind not in KINDS:
            raise LieError(f"unknown group kind {self.kind!r}")
        if self.n < 1:
            raise LieError("matrix size must be positive")
        if self.is_abelian and self.n != 1:
            raise LieError("abelian groups are realized by 1x1 matrices")

    @property
    def is_abelian(self) -> bool:
        return self.kind in (ABELIAN_COMPACT, ABELIAN_COMPLEX)

    @property
    def is_compact(self) -> bool:
        return self.kind in (COMPACT_UNITARY, ABELIAN_COMPACT)

    def algebra_basis(self) -> np.ndarray:
        """A real basis of the Lie algebra, shape ``(dim, n, n)``.

        For the compact kinds this is su(n) (or u(1)); for the complex kinds
        it is a complex basis of gl(n, C) (real span is enough for the Gram
        test since ``tr`` is complex bilinear).
        """
        n = self.n
        if self.kind == ABELIAN_COMPACT:
            return np.array([[[1j]]])
        if self.kind == ABELIAN_COMPLEX:
            return np.array([[[1.0 + 0j]]])
        if self.kind == COMPLEX_GENERAL:
            basis = np.zeros((n * n, n, n), dtype=complex)
            for idx in range(n * n):
                basis[idx].flat[idx] = 1.0
            return basis
        mats = []
        for i in range(n):
            for j in range(i + 1, n):
                e = np.zeros((n, n), dtype=complex)
                e[i, j], e[j, i] = 1.0, -1.0
                mats.append(e)
                e = np.zeros((n, n), dtype=complex)
                e[i, j] = e[j, i] = 1j
                mats.append(e)
        for i in range(n - 1):
            e = np.zeros((n, n), dtype=complex)
            e[i, i], e[i + 1, i + 1] = 1j, -1j
            mats.append(e)
        return np.array(mats)

    def gram_matrix(self) -> np.ndarray:
        basis = self.algebra_basis()
        return np.einsum("aij,bji->ab", basis, basis)

    def check_algebra(self, m: np.ndarray, tol: float = STRUCTURAL_TOL) -> None:
        m = np.asarray(m)
        if m.shape != (self.n, self.n):
            raise LieError(f"expected {self.n}x{self.n} matrix, got {m.shape}")
        if self.is_compact and np.max(np.abs(m + m.conj().T), initial=0.0) > tol:
            raise LieError("compact algebra element must be anti-Hermitian")

    def check_group(self, m: np.ndarray, tol: float = STRUCTURAL_TOL) -> None:
        m = np.asarray(m)
        if m.shape != (self.n, self.n):
            raise LieError(f"expected {self.n}x{self.n} matrix, got {m.shape}")
        if not abs(np.linalg.det(m)) > 0:
            raise LieError("group element must be invertible")
        if self.is_compact:
            defect = np.max(np.abs(m.conj().T @ m - np.eye(self.n)))
            if defect > tol:
                raise LieError(f"compact group element not unitary (defect {defect:.2e})")


SU2 = StructureGroup(COMPACT_UNITARY, 2)
GL2 = StructureGroup(COMPLEX_GENERAL, 2)
U1 = StructureGroup(ABELIAN_COMPACT, 1)
CSTAR = StructureGroup(ABELIAN_COMPLEX, 1)


def group_from_name(name: str) -> StructureGroup:
    """Parse names like ``su2``, ``su3``, ``gl2``, ``u1``, ``cstar``."""
    key = name.strip().lower().replace("(", "").replace(")", "").replace("-", "")
    if key in ("u1", "abeliancompact"):
        return U1
    if key in ("cstar", "c*", "gl1", "abeliancomplex"):
        return CSTAR
    if key.startswith("su") and key[2:].isdigit():
        return StructureGroup(COMPACT_UNITARY, int(key[2:]))
    if key.startswith("gl") and key[2:].isdigit():
        return StructureGroup(COMPLEX_GENERAL, int(key[2:]))
    raise LieError(f"unrecognized group name {name!r}")


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    m: np.ndarray
    group: StructureGroup

    def __post_init__(self):
        m = np.array(self.m, dtype=complex)
        m.setflags(write=False)
        object.__setattr__(self, "m", m)
        self.group.check_algebra(m)

    def __add__(self, other):
        _same(self, other)
        return AlgebraElement(self.m + other.m, self.group)

    def __sub__(self, other):
        _same(self, other)
        return AlgebraElement(self.m - other.m, self.group)

    def __neg__(self):
        return AlgebraElement(-self.m, self.group)

    def __mul__(self, scalar):
        return AlgebraElement(scalar * self.m, self.group)

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class GroupElement:
    m: np.ndarray
    group: StructureGroup

    def __post_init__(self):
        m = np.array(self.m, dtype=complex)
        m.setflags(write=False)
        object.__setattr__(self, "m", m)
        self.group.check_group(m)

    def __matmul__(self, other):
        _same(self, other)
        return GroupElement(self.m @ other.m, self.group)

    def inverse(self):
        if self.group.is_compact:
            return GroupElement(self.m.conj().T, self.group)
        return GroupElement(np.linalg.inv(self.m), self.group)

    @classmethod
    def identity(cls, group: StructureGroup) -> GroupElement:
        return cls(np.eye(group.n), group)


@dataclass(frozen=True)
class ConjugacyInvariant:
    """Characteristic-polynomial coefficients, leading 1 omitted."""

    coeffs: tuple

    def distance(self, other: ConjugacyInvariant) -> float:
        return float(np.max(np.abs(np.subtract(self.coeffs, other.coeffs)), initial=0.0))


def _same(x, y):
    if x.group != y.group:
        raise LieError(f"group mismatch: {x.group} vs {y.group}")


def bracket(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    _same(x, y)
    return AlgebraElement(x.m @ y.m - y.m @ x.m, x.group)


def trace_pair(x: AlgebraElement, y: AlgebraElement) -> complex:
    _same(x, y)
    return complex(np.einsum("ij,ji->", x.m, y.m))


def exp_map(x: AlgebraElement) -> GroupElement:
    # scipy's expm is Al-Mohy/Higham scaling-and-squaring with Pade approximants
    return GroupElement(scipy.linalg.expm(x.m), x.group)


def conjugacy_invariant(g: GroupElement) -> ConjugacyInvariant:
    return ConjugacyInvariant(tuple(complex(c) for c in np.poly(g.m)[1:]))


def group_commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b @ np.linalg.inv(a) @ np.linalg.inv(b)


def relation_product(handles, holes) -> np.ndarray:
    """prod_i [A_i, B_i] * prod_j M_j as a raw matrix."""
    mats = [m for pair in handles for m in pair] + list(holes)
    if not mats:
        return np.eye(1, dtype=complex)
    groups = {x.group for x in mats}
    if len(groups) > 1:
        raise LieError("relation arguments carry different groups")
    n = mats[0].group.n
    prod = np.eye(n, dtype=complex)
    for a, b in handles:
        prod = prod @ group_commutator(a.m, b.m)
    for m in holes:
        prod = prod @ m.m
    return prod


def relation_defect(handles, holes) -> float:
    """Operator norm of prod [A_i, B_i] prod M_j - id."""
    prod = relation_product(handles, holes)
    return float(np.linalg.norm(prod - np.eye(prod.shape[0]), 2))


# -- random data -------------------------------------------------------------

def random_algebra_matrix(group: StructureGroup, rng: np.random.Generator) -> np.ndarray:
    """Random algebra matrix with operator norm at most 1."""
    n = group.n
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    if group.kind == COMPACT_UNITARY:
        m = 0.5 * (z - z.conj().T)
        m -= np.trace(m) / n * np.eye(n)
    elif group.kind == ABELIAN_COMPACT:
        m = 1j * z.imag
    else:
        m = z
    norm = np.linalg.norm(m, 2)
    return m * (rng.uniform(0.2, 1.0) / norm) if norm > 0 else m


def random_algebra(group: StructureGroup, rng: np.random.Generator) -> AlgebraElement:
    return AlgebraElement(random_algebra_matrix(group, rng), group)


def random_group(group: StructureGroup, rng: np.random.Generator, scale: float = np.pi) -> GroupElement:
    return exp_map(scale * random_algebra(group, rng))
