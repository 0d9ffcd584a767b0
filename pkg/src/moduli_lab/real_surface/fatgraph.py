"""Flat connections as group-valued holonomies on a fat graph.

The graph for genus g with k holes has a base vertex v0 carrying loops a_i,
b_i for the handles; each hole j has an r-cycle of vertices w_j^0..w_j^{r-1}
joined to v0 by a spoke s_j.  The single contractible face has boundary word

    prod_i [a_i, b_i] * prod_j s_j h_j s_j^-1

where h_j is the hole cycle read from w_j^0.  The hole cycles themselves
bound the k holes.  Holonomy of a path e1 e2 ... is U_e1 U_e2 ..., and a
vertex gauge transformation acts by U_e -> h(src)^-1 U_e h(tgt).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..lie import (ConjugacyInvariant, GroupElement, StructureGroup, conjugacy_invariant,
                   random_group, relation_defect)

FLAT_TOL = 1e-10
HOLE_CYCLE = 3


class RelationError(ValueError):
    """Holonomy data violating the fundamental-group relation."""

    def __init__(self, defect: float):
        super().__init__(f"holonomies violate the surface relation (defect {defect:.3e})")
        self.defect = defect


@dataclass(frozen=True)
class FatGraph:
    genus: int
    holes: int
    n_vertices: int
    edges: tuple            # (name, src, tgt)
    face: tuple             # word of (edge index, +1/-1) around the contractible face
    hole_cycles: tuple      # per hole: tuple of edge indices read from w_j^0
    base: int = 0

    @classmethod
    def standard(cls, g: int, k: int, cycle: int = HOLE_CYCLE) -> FatGraph:
        edges = []
        for i in range(g):
            edges.append((f"a{i + 1}", 0, 0))
            edges.append((f"b{i + 1}", 0, 0))
        nv = 1
        spokes, cycles = [], []
        for j in range(k):
            ws = list(range(nv, nv + cycle))
            nv += cycle
            spokes.append(len(edges))
            edges.append((f"s{j + 1}", 0, ws[0]))
            cyc = []
            for r in range(cycle):
                cyc.append(len(edges))
                edges.append((f"h{j + 1}_{r}", ws[r], ws[(r + 1) % cycle]))
            cycles.append(tuple(cyc))
        face = []
        for i in range(g):
            a, b = 2 * i, 2 * i + 1
            face += [(a, 1), (b, 1), (a, -1), (b, -1)]
        for s, cyc in zip(spokes, cycles):
            face += [(s, 1)] + [(e, 1) for e in cyc] + [(s, -1)]
        return cls(g, k, nv, tuple(edges), tuple(face), tuple(cycles))

    def euler_characteristic(self) -> int:
        # one contractible face; holes are not faces
        return self.n_vertices - len(self.edges) + 1


@dataclass(frozen=True, eq=False)
class FatGraphConnection:
    graph: FatGraph
    U: np.ndarray                 # (E, n, n) edge holonomies
    group: StructureGroup
    flat: bool = field(default=False)

    def __post_init__(self):
        U = np.array(self.U, dtype=complex)
        U.setflags(write=False)
        object.__setattr__(self, "U", U)
        object.__setattr__(self, "flat", self.face_defect() <= self.flat_tolerance())

    def word_holonomy(self, word) -> np.ndarray:
        prod = np.eye(self.group.n, dtype=complex)
        for e, sign in word:
            prod = prod @ (self.U[e] if sign > 0 else np.linalg.inv(self.U[e]))
        return prod

    def face_defect(self) -> float:
        hol = self.word_holonomy(self.graph.face)
        return float(np.linalg.norm(hol - np.eye(self.group.n), 2))

    def flat_tolerance(self) -> float:
        """FLAT_TOL, widened by the rounding bound of the face product for non-unitary holonomies."""
        word = self.graph.face
        scale = 1.0
        for e, sign in word:
            scale *= np.linalg.norm(self.U[e] if sign > 0 else np.linalg.inv(self.U[e]), 2)
        return max(FLAT_TOL, 64 * np.finfo(float).eps * len(word) * scale)

    def boundary_holonomy(self, j: int, start: int = 0) -> GroupElement:
        """Holonomy around hole j based at the cycle vertex w_j^start."""
        cyc = self.graph.hole_cycles[j]
        order = cyc[start:] + cyc[:start]
        return GroupElement(self.word_holonomy([(e, 1) for e in order]), self.group)

    def gauge(self, h: np.ndarray) -> FatGraphConnection:
        """Vertex gauge action U_e -> h(src)^-1 U_e h(tgt); h has shape (V, n, n)."""
        hinv = np.linalg.inv(h)
        U = np.array([hinv[src] @ self.U[e] @ h[tgt] for e, (_, src, tgt) in enumerate(self.graph.edges)])
        return FatGraphConnection(self.graph, U, self.group)

    def conjugate_all(self, h: np.ndarray) -> FatGraphConnection:
        return self.gauge(np.broadcast_to(h, (self.graph.n_vertices,) + h.shape))


def flat_from_holonomy(g: int, k: int, handles, holes, group: StructureGroup | None = None,
                       rng: np.random.Generator | None = None, tol: float = FLAT_TOL) -> FatGraphConnection:
    """Build a flat fat-graph connection from generator holonomies.

    ``handles`` are pairs (A_i, B_i), ``holes`` the M_j, all GroupElements.
    The relation prod [A_i, B_i] prod M_j = id must hold to ``tol``.  With an
    ``rng`` the spokes and hole-cycle splittings are random; otherwise spokes
    are the identity and each hole cycle carries M_j on its last edge.
    """
    handles = [tuple(p) for p in handles]
    holes = list(holes)
    if len(handles) != g or len(holes) != k:
        raise ValueError(f"expected {g} handle pairs and {k} hole holonomies")
    elems = [m for p in handles for m in p] + holes
    if group is None:
        if not elems:
            raise ValueError("cannot infer the structure group from empty data")
        group = elems[0].group
    defect = relation_defect(handles, holes) if elems else 0.0
    if defect > tol:
        raise RelationError(defect)
    graph = FatGraph.standard(g, k)
    n = group.n
    U = np.zeros((len(graph.edges), n, n), dtype=complex)
    for i, (a, b) in enumerate(handles):
        U[2 * i], U[2 * i + 1] = a.m, b.m

    def rand_elem():
        return random_group(group, rng).m

    for j, m in enumerate(holes):
        spoke_idx = graph.hole_cycles[j][0] - 1
        cyc = graph.hole_cycles[j]
        S = rand_elem() if rng is not None else np.eye(n)
        U[spoke_idx] = S
        target = np.linalg.inv(S) @ m.m @ S
        prod = np.eye(n, dtype=complex)
        for e in cyc[:-1]:
            U[e] = rand_elem() if rng is not None else np.eye(n)
            prod = prod @ U[e]
        U[cyc[-1]] = np.linalg.inv(prod) @ target
    if g == 0 and k == 0:
        U = np.zeros((0, n, n), dtype=complex)
    return FatGraphConnection(graph, U, group)


def leaf_label(fgc: FatGraphConnection) -> list[ConjugacyInvariant]:
    """Conjugacy invariants of the holonomies around the holes."""
    if not fgc.flat:
        raise ValueError(f"leaf labels need a flat connection (face defect {fgc.face_defect():.3e})")
    return [conjugacy_invariant(fgc.boundary_holonomy(j)) for j in range(fgc.graph.holes)]


def label_distance(l1, l2) -> float:
    return max((a.distance(b) for a, b in zip(l1, l2)), default=0.0)
