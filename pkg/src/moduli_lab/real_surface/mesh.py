"""Oriented triangulated surfaces of genus g with k boundary circles.

A surface is built from a ringed polygon: a center vertex, concentric rings
of vertices and a triangulated annulus between consecutive rings.  For
``g >= 1`` the outer ring is the 4g-gon with side word a1 b1 a1^-1 b1^-1 ...;
holes are made by deleting vertex-disjoint interior triangles.  For
``g == 0`` the outer ring is the first boundary circle (or is coned off to
a sphere when ``k == 0``).

All calculus happens in per-triangle reference coordinates (s, t): the
triangle (v0, v1, v2) is the image of {s, t >= 0, s + t <= 1} with v0 at the
origin, v1 at (1, 0), v2 at (0, 1).  Vertex positions and the per-triangle
``corner_xy`` charts are only a layout; nothing metric enters the forms.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np


class SurfaceError(ValueError):
    pass


# local edges of the reference triangle, traversed with the triangle's orientation
LOCAL_EDGES = ((0, 1), (1, 2), (2, 0))


@dataclass(frozen=True, eq=False)
class TriangulatedSurface:
    vertices: np.ndarray          # (V, 2) layout positions
    triangles: np.ndarray         # (F, 3) oriented vertex triples
    corner_xy: np.ndarray         # (F, 3, 2) flat chart of each triangle
    boundary_loops: tuple = field(default=())  # tuple of vertex cycles
    genus: int = 0
    holes: int = 0

    def __post_init__(self):
        for name in ("vertices", "triangles", "corner_xy"):
            arr = np.array(getattr(self, name))
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if not self.boundary_loops:
            object.__setattr__(self, "boundary_loops", _boundary_cycles(self.triangles))
        loops = tuple(tuple(int(v) for v in loop) for loop in self.boundary_loops)
        object.__setattr__(self, "boundary_loops", loops)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_triangles(self) -> int:
        return len(self.triangles)

    @cached_property
    def edges(self) -> np.ndarray:
        """Sorted undirected edges, shape (E, 2), lower vertex id first."""
        pairs = np.sort(self.triangles[:, [0, 1, 1, 2, 2, 0]].reshape(-1, 2), axis=1)
        return np.unique(pairs, axis=0)

    @cached_property
    def edge_index(self) -> dict:
        return {(int(a), int(b)): i for i, (a, b) in enumerate(self.edges)}

    @cached_property
    def edge_incidence(self) -> dict:
        """Map sorted edge -> list of (triangle, local edge, sign).

        sign is +1 when the triangle traverses the edge from the lower to the
        higher vertex id.
        """
        inc: dict = {}
        for f, tri in enumerate(self.triangles):
            for le, (i, j) in enumerate(LOCAL_EDGES):
                a, b = int(tri[i]), int(tri[j])
                key = (min(a, b), max(a, b))
                inc.setdefault(key, []).append((f, le, 1 if a < b else -1))
        return inc

    @cached_property
    def boundary_edges(self) -> list:
        """(triangle, local edge) for every boundary edge, grouped by loop order."""
        lookup = {}
        for key, entries in self.edge_incidence.items():
            if len(entries) == 1:
                f, le, _ = entries[0]
                i, j = LOCAL_EDGES[le]
                lookup[(int(self.triangles[f, i]), int(self.triangles[f, j]))] = (f, le)
        out = []
        for loop in self.boundary_loops:
            for a, b in zip(loop, loop[1:] + loop[:1]):
                out.append(lookup[(a, b)])
        return out

    def loop_edges(self, j: int) -> list:
        loop = self.boundary_loops[j]
        start = sum(len(l) for l in self.boundary_loops[:j])
        return self.boundary_edges[start:start + len(loop)]

    @property
    def euler_characteristic(self) -> int:
        return self.n_vertices - len(self.edges) + self.n_triangles

    def chart_jacobian(self) -> np.ndarray:
        """det d(x, y)/d(s, t) per triangle (twice the signed layout area)."""
        c = self.corner_xy
        e1, e2 = c[:, 1] - c[:, 0], c[:, 2] - c[:, 0]
        return e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0]

    def layout_area(self) -> float:
        return float(0.5 * np.sum(self.chart_jacobian()))

    def validate(self) -> None:
        """Check that the mesh is an oriented manifold with the expected Euler characteristic."""
        tri = self.triangles
        if np.any(tri[:, 0] == tri[:, 1]) or np.any(tri[:, 1] == tri[:, 2]) or np.any(tri[:, 0] == tri[:, 2]):
            raise SurfaceError("degenerate triangle")
        for key, entries in self.edge_incidence.items():
            if len(entries) > 2:
                raise SurfaceError(f"edge {key} has {len(entries)} incident triangles")
            if len(entries) == 2 and entries[0][2] == entries[1][2]:
                raise SurfaceError(f"edge {key} has inconsistent orientation")
        bedges = {k for k, e in self.edge_incidence.items() if len(e) == 1}
        looped = set()
        for loop in self.boundary_loops:
            for a, b in zip(loop, loop[1:] + loop[:1]):
                key = (min(a, b), max(a, b))
                if key in looped:
                    raise SurfaceError("boundary loops overlap")
                looped.add(key)
        if looped != bedges:
            raise SurfaceError("boundary loops do not partition the boundary edges")
        if len(self.boundary_loops) != self.holes:
            raise SurfaceError(f"expected {self.holes} boundary loops, found {len(self.boundary_loops)}")
        chi = 2 - 2 * self.genus - self.holes
        if self.euler_characteristic != chi:
            raise SurfaceError(f"Euler characteristic {self.euler_characteristic} != {chi}")
        if np.any(self.chart_jacobian() <= 0):
            raise SurfaceError("triangle chart is not positively oriented")


def _boundary_cycles(triangles: np.ndarray) -> tuple:
    count: dict = {}
    directed = {}
    for tri in triangles:
        for i, j in LOCAL_EDGES:
            a, b = int(tri[i]), int(tri[j])
            key = (min(a, b), max(a, b))
            count[key] = count.get(key, 0) + 1
            directed[key] = (a, b)
    nxt = {}
    for key, c in count.items():
        if c == 1:
            a, b = directed[key]
            if a in nxt:
                raise SurfaceError(f"boundary vertex {a} is pinched")
            nxt[a] = b
    loops = []
    seen = set()
    for start in sorted(nxt):
        if start in seen:
            continue
        loop = [start]
        seen.add(start)
        v = nxt[start]
        while v != start:
            loop.append(v)
            seen.add(v)
            v = nxt[v]
        loops.append(tuple(loop))
    # each loop starts at its smallest vertex; loops ordered by that vertex
    loops.sort(key=lambda l: l[0])
    return tuple(loops)


def _ring_layout(n_boundary: int, rings: int, outer: np.ndarray):
    """Vertices and ccw triangles of a center + ``rings`` concentric rings."""
    verts = [np.zeros(2)]
    ring_ids = []
    for r in range(1, rings + 1):
        ids = []
        for i in range(n_boundary):
            verts.append(outer[i] * r / rings)
            ids.append(len(verts) - 1)
        ring_ids.append(ids)
    tris = []
    first = ring_ids[0]
    for i in range(n_boundary):
        tris.append((0, first[i], first[(i + 1) % n_boundary]))
    for r in range(rings - 1):
        a, b = ring_ids[r], ring_ids[r + 1]
        for i in range(n_boundary):
            i1 = (i + 1) % n_boundary
            tris.append((a[i], b[i], b[i1]))
            tris.append((a[i], b[i1], a[i1]))
    return np.array(verts), tris, ring_ids


def _polygon(n_sides: int, per_side: int) -> np.ndarray:
    corners = np.array([[np.cos(2 * np.pi * c / n_sides), np.sin(2 * np.pi * c / n_sides)]
                        for c in range(n_sides)])
    pts = []
    for c in range(n_sides):
        p, q = corners[c], corners[(c + 1) % n_sides]
        for j in range(per_side):
            pts.append(p + (q - p) * j / per_side)
    return np.array(pts)


def _hole_triangles(n_boundary: int, rings: int, count: int, ring_ids, tris, first_ring: int):
    """Pick ``count`` vertex-disjoint triangles strictly inside the layout."""
    per_annulus = n_boundary // 3
    chosen = []
    r = first_ring
    while len(chosen) < count:
        if r + 1 > rings - 1:
            raise SurfaceError("not enough room for the requested holes")
        # annulus between ring r and r+1 (0-based ring index r-1 -> r)
        a, b = ring_ids[r - 1], ring_ids[r]
        for slot in range(per_annulus):
            if len(chosen) == count:
                break
            i = 3 * slot
            chosen.append((a[i], b[i], b[(i + 1) % n_boundary]))
        r += 2
    chosen_set = {tuple(t) for t in chosen}
    return chosen_set


def _rings_needed(n_boundary: int, holes: int, first_ring: int, outer_margin: int) -> int:
    per_annulus = max(n_boundary // 3, 1)
    annuli = -(-holes // per_annulus) if holes else 0
    last = first_ring + 2 * (annuli - 1) if annuli else 0
    return max(first_ring + outer_margin, last + 1 + outer_margin, 1)


def _assemble(verts, tris, identify=None):
    """Apply a vertex identification, drop unused vertices, relabel."""
    n = len(verts)
    rep = np.arange(n) if identify is None else identify
    used = sorted({int(rep[v]) for t in tris for v in t})
    relabel = {old: new for new, old in enumerate(used)}
    triangles = np.array([[relabel[int(rep[v])] for v in t] for t in tris], dtype=np.int64)
    corner_xy = np.array([[verts[v] for v in t] for t in tris], dtype=float)
    positions = np.array([verts[old] for old in used], dtype=float)
    return positions, triangles, corner_xy


def build_surface(g: int, k: int, refine: int = 0) -> TriangulatedSurface:
    """Triangulated oriented surface of genus ``g`` with ``k`` boundary loops.

    ``refine`` applies that many rounds of uniform 1-to-4 subdivision.
    """
    if g < 0 or k < 0 or refine < 0:
        raise SurfaceError("surface parameters must be non-negative")
    if g == 0:
        n_boundary = 6
        interior_holes = max(k - 1, 0)
        rings = _rings_needed(n_boundary, interior_holes, 1, 1) if interior_holes else 1
        outer = _polygon(6, 1)
        verts, tris, ring_ids = _ring_layout(n_boundary, rings, outer)
        drop = _hole_triangles(n_boundary, rings, interior_holes, ring_ids, tris, 1)
        tris = [t for t in tris if tuple(t) not in drop]
        corner_override = {}
        if k == 0:
            apex = len(verts)
            verts = np.vstack([verts, [[0.0, 0.0]]])
            outer_ids = ring_ids[-1]
            for i in range(n_boundary):
                corner_override[len(tris)] = True
                tris.append((apex, outer_ids[(i + 1) % n_boundary], outer_ids[i]))
        positions, triangles, corner_xy = _assemble(verts, tris)
        for f in corner_override:
            corner_xy[f] = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]
    else:
        per_side = 3
        n_sides = 4 * g
        n_boundary = n_sides * per_side
        rings = _rings_needed(n_boundary, k, 1, 1) if k else 2
        outer = _polygon(n_sides, per_side)
        verts, tris, ring_ids = _ring_layout(n_boundary, rings, outer)
        drop = _hole_triangles(n_boundary, rings, k, ring_ids, tris, 1)
        tris = [t for t in tris if tuple(t) not in drop]
        ident = _side_identification(len(verts), ring_ids[-1], g, per_side)
        positions, triangles, corner_xy = _assemble(verts, tris, ident)
    surf = TriangulatedSurface(positions, triangles, corner_xy, genus=g, holes=k)
    for _ in range(refine):
        surf = subdivide(surf)
    surf.validate()
    return surf


def _side_identification(n_verts: int, outer_ids, g: int, per_side: int) -> np.ndarray:
    parent = np.arange(n_verts)

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)

    nb = len(outer_ids)
    for h in range(g):
        for first, second in ((4 * h, 4 * h + 2), (4 * h + 1, 4 * h + 3)):
            # side ``first`` read forward is side ``second`` read backward
            for j in range(per_side + 1):
                u = outer_ids[(first * per_side + j) % nb]
                w = outer_ids[(second * per_side + per_side - j) % nb]
                union(u, w)
    return np.array([find(v) for v in range(n_verts)])


def subdivide(surf: TriangulatedSurface) -> TriangulatedSurface:
    """Uniform 1-to-4 subdivision, preserving orientation and holes."""
    verts = list(surf.vertices)
    mid = {}

    def midpoint(a, b):
        key = (min(a, b), max(a, b))
        if key not in mid:
            verts.append(0.5 * (surf.vertices[a] + surf.vertices[b]))
            mid[key] = len(verts) - 1
        return mid[key]

    tris, charts = [], []
    for tri, c in zip(surf.triangles, surf.corner_xy):
        a, b, d = (int(v) for v in tri)
        ab, bd, da = midpoint(a, b), midpoint(b, d), midpoint(d, a)
        cab, cbd, cda = 0.5 * (c[0] + c[1]), 0.5 * (c[1] + c[2]), 0.5 * (c[2] + c[0])
        tris += [(a, ab, da), (ab, b, bd), (da, bd, d), (ab, bd, da)]
        charts += [(c[0], cab, cda), (cab, c[1], cbd), (cda, cbd, c[2]), (cab, cbd, cda)]
    return TriangulatedSurface(np.array(verts), np.array(tris, dtype=np.int64), np.array(charts),
                               genus=surf.genus, holes=surf.holes)
