import json

import numpy as np
import pytest

from moduli_lab.complex_surface import EllipticCurve, EllipticProductSurface, MeromorphicTwoForm, QuadratureScheme
from moduli_lab.complex_surface.fourier import random_form
from moduli_lab.lie import GL2, SU2, StructureGroup
from moduli_lab.real_surface.fatgraph import flat_from_holonomy
from moduli_lab.real_surface.forms import random_one_form
from moduli_lab.real_surface.mesh import build_surface
from moduli_lab.serialization import SCHEMA_VERSION, SchemaError, decode, dumps, encode, loads
from moduli_lab.lie import GroupElement, random_group

S = EllipticProductSurface(EllipticCurve(1.0, 0.3 + 1.1j), EllipticCurve(0.5 - 0.2j, 0.1 + 0.9j))


def roundtrip(obj):
    text = dumps(obj)
    json.loads(text)
    return loads(text)


def test_structure_group():
    for g in (SU2, GL2, StructureGroup("compact-unitary", 3)):
        assert roundtrip(g) == g


def test_triangulated_surface():
    s = build_surface(1, 2, 1)
    t = roundtrip(s)
    assert np.array_equal(t.triangles, s.triangles)
    assert np.array_equal(t.corner_xy, s.corner_xy)
    assert t.boundary_loops == s.boundary_loops
    assert (t.genus, t.holes) == (1, 2)
    t.validate()


def test_pwpoly_form():
    s = build_surface(0, 2)
    w = random_one_form(s, SU2, np.random.default_rng(0))
    v = roundtrip(w)
    assert v.degree == 1
    assert np.array_equal(v.coeffs, w.coeffs)


def test_elliptic_objects():
    assert roundtrip(S.E1) == S.E1
    assert roundtrip(S) == S
    for sigma in (MeromorphicTwoForm(S, 0.25 + 0.3j), MeromorphicTwoForm.closed(S)):
        assert roundtrip(sigma) == sigma


def test_fourier_form_is_sparse_and_exact():
    f = random_form(S, 1, 2, 2, np.random.default_rng(1))
    doc = encode(f)
    assert doc["K"] == 2 and len(doc["terms"]) == 2 * 5 ** 4
    assert all(len(t["k"]) == 4 for t in doc["terms"])
    g = roundtrip(f)
    assert g.q == 1 and np.array_equal(g.coeffs, f.coeffs)


def test_fat_graph_connection():
    rng = np.random.default_rng(2)
    m = random_group(SU2, rng)
    fgc = flat_from_holonomy(0, 2, [], [m, GroupElement(np.linalg.inv(m.m), SU2)], rng=rng)
    back = roundtrip(fgc)
    assert np.array_equal(back.U, fgc.U)
    assert back.flat


def test_quadrature_scheme():
    q = QuadratureScheme(grid=16, depth=3, patch=0.0625, order=8)
    assert roundtrip(q) == q


def test_version_and_kind_checked():
    with pytest.raises(SchemaError):
        loads(json.dumps({"schema_version": "0", "object": encode(SU2)}))
    with pytest.raises(SchemaError):
        decode({"no": "kind"})
    with pytest.raises(SchemaError):
        decode({"kind": "mystery"})
    with pytest.raises(SchemaError):
        decode({"kind": "elliptic_curve", "omega1": [1.0, 0.0]})
    with pytest.raises(TypeError):
        encode(object())
    assert json.loads(dumps(SU2))["schema_version"] == SCHEMA_VERSION


def test_out_of_range_frequency_rejected():
    doc = encode(random_form(S, 0, 1, 1, np.random.default_rng(3)))
    doc["terms"][0]["k"] = [5, 0, 0, 0]
    with pytest.raises(SchemaError):
        decode(doc)
