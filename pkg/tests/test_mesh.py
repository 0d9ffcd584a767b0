import itertools

import numpy as np
import pytest

from moduli_lab.real_surface.mesh import LOCAL_EDGES, SurfaceError, TriangulatedSurface, build_surface, subdivide

CASES = [(g, k, r) for g, k, r in itertools.product(range(0, 3), range(0, 4), range(0, 2))]


@pytest.mark.parametrize("g,k,expected", [(0, 1, 1), (1, 0, 0), (1, 1, -1), (0, 0, 2), (2, 0, -2), (0, 3, -1)])
def test_euler_characteristic_examples(g, k, expected):
    assert build_surface(g, k, 1 if (g, k) == (1, 1) else 0).euler_characteristic == expected


@pytest.mark.parametrize("g,k,refine", CASES)
def test_topology_invariants(g, k, refine):
    s = build_surface(g, k, refine)
    assert s.euler_characteristic == 2 - 2 * g - k
    assert len(s.boundary_loops) == k
    for entries in s.edge_incidence.values():
        assert len(entries) in (1, 2)
        if len(entries) == 2:
            assert entries[0][2] == -entries[1][2]
    boundary = {key for key, e in s.edge_incidence.items() if len(e) == 1}
    looped = [tuple(sorted((a, b))) for loop in s.boundary_loops for a, b in zip(loop, loop[1:] + loop[:1])]
    assert len(looped) == len(set(looped))
    assert set(looped) == boundary


@pytest.mark.parametrize("g,k", [(0, 1), (1, 2), (2, 1)])
def test_charts_are_positively_oriented(g, k):
    assert np.all(build_surface(g, k).chart_jacobian() > 0)


def test_boundary_edges_follow_loops():
    s = build_surface(1, 2)
    for j, loop in enumerate(s.boundary_loops):
        edges = s.loop_edges(j)
        assert len(edges) == len(loop)
        for (f, le), a, b in zip(edges, loop, loop[1:] + loop[:1]):
            i0, i1 = LOCAL_EDGES[le]
            assert (s.triangles[f, i0], s.triangles[f, i1]) == (a, b)


def test_subdivision_quadruples_triangles_and_keeps_area():
    s = build_surface(0, 1)
    t = subdivide(s)
    assert t.n_triangles == 4 * s.n_triangles
    assert abs(t.layout_area() - s.layout_area()) <= 1e-12
    t.validate()


def test_negative_arguments_rejected():
    with pytest.raises(SurfaceError):
        build_surface(-1, 0)
    with pytest.raises(SurfaceError):
        build_surface(0, 1, -1)


def test_validate_catches_flipped_triangle():
    s = build_surface(0, 1)
    tris = np.array(s.triangles)
    tris[0] = tris[0][::-1]
    bad = TriangulatedSurface(s.vertices, tris, s.corner_xy, s.boundary_loops, 0, 1)
    with pytest.raises(SurfaceError):
        bad.validate()


def test_validate_catches_wrong_hole_count():
    s = build_surface(0, 2)
    bad = TriangulatedSurface(s.vertices, s.triangles, s.corner_xy, s.boundary_loops, 0, 1)
    with pytest.raises(SurfaceError):
        bad.validate()
