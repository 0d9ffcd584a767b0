"""JSON encoding of the geometric data used by the package.

Complex numbers are written as [re, im] pairs.  Fourier forms are stored
sparsely as a list of terms with integer 4-vector frequencies.  Every
document carries a ``kind`` tag and the schema version.
"""
from __future__ import annotations

import json

import numpy as np

from .complex_surface.fourier import NCOMP, FourierForm
from .complex_surface.geometry import EllipticProductSurface, MeromorphicTwoForm
from .complex_surface.quadrature import QuadratureScheme
from .complex_surface.weierstrass import EllipticCurve
from .lie import StructureGroup
from .real_surface.fatgraph import FatGraph, FatGraphConnection
from .real_surface.forms import PwPolyForm
from .real_surface.mesh import TriangulatedSurface

SCHEMA_VERSION = "1"


class SchemaError(ValueError):
    """A JSON document that does not match the schema."""


def _c(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def _z(pair) -> complex:
    if not (isinstance(pair, (list, tuple)) and len(pair) == 2):
        raise SchemaError(f"expected a [re, im] pair, got {pair!r}")
    return complex(float(pair[0]), float(pair[1]))


def _carray(a: np.ndarray) -> dict:
    a = np.asarray(a, dtype=complex)
    return {"shape": list(a.shape), "re": a.real.ravel().tolist(), "im": a.imag.ravel().tolist()}


def _from_carray(d: dict) -> np.ndarray:
    shape = tuple(d["shape"])
    return (np.array(d["re"], dtype=float) + 1j * np.array(d["im"], dtype=float)).reshape(shape)


# -- encoders -------------------------------------------------------------------------------

def encode(obj) -> dict:
    """Encode a supported object as a JSON-ready dict."""
    if isinstance(obj, StructureGroup):
        return {"kind": "structure_group", "group_kind": obj.kind, "n": obj.n}
    if isinstance(obj, TriangulatedSurface):
        return {"kind": "triangulated_surface", "genus": obj.genus, "holes": obj.holes,
                "vertices": np.asarray(obj.vertices).tolist(),
                "triangles": np.asarray(obj.triangles).tolist(),
                "corner_xy": np.asarray(obj.corner_xy).tolist(),
                "boundary_loops": [list(loop) for loop in obj.boundary_loops]}
    if isinstance(obj, PwPolyForm):
        return {"kind": "pwpoly_form", "degree": obj.degree, "surface": encode(obj.surface),
                "coeffs": _carray(obj.coeffs)}
    if isinstance(obj, EllipticCurve):
        return {"kind": "elliptic_curve", "omega1": _c(obj.omega1), "omega2": _c(obj.omega2)}
    if isinstance(obj, EllipticProductSurface):
        return {"kind": "elliptic_product", "E1": encode(obj.E1), "E2": encode(obj.E2)}
    if isinstance(obj, MeromorphicTwoForm):
        return {"kind": "meromorphic_two_form", "surface": encode(obj.surface),
                "p": None if obj.p is None else _c(obj.p)}
    if isinstance(obj, FourierForm):
        terms = []
        K = obj.K
        for idx in np.argwhere(np.any(obj.coeffs != 0, axis=(5, 6))):
            c, k = int(idx[0]), [int(v) - K for v in idx[1:]]
            value = obj.coeffs[(c,) + tuple(idx[1:])]
            terms.append({"component": c, "k": k,
                          "value": [[_c(v) for v in row] for row in value]})
        return {"kind": "fourier_form", "q": obj.q, "n": obj.n, "K": K,
                "surface": encode(obj.surface), "terms": terms}
    if isinstance(obj, FatGraphConnection):
        return {"kind": "fat_graph_connection", "genus": obj.graph.genus, "holes": obj.graph.holes,
                "group": encode(obj.group), "U": _carray(obj.U)}
    if isinstance(obj, QuadratureScheme):
        return {"kind": "quadrature_scheme", "grid": obj.grid, "depth": obj.depth,
                "patch": obj.patch, "order": obj.order}
    raise TypeError(f"no JSON encoding for {type(obj).__name__}")


def decode(d: dict):
    """Inverse of ``encode``."""
    if not isinstance(d, dict) or "kind" not in d:
        raise SchemaError("document has no 'kind' tag")
    kind = d["kind"]
    try:
        if kind == "structure_group":
            return StructureGroup(d["group_kind"], int(d["n"]))
        if kind == "triangulated_surface":
            return TriangulatedSurface(np.array(d["vertices"], dtype=float),
                                       np.array(d["triangles"], dtype=int),
                                       np.array(d["corner_xy"], dtype=float),
                                       tuple(tuple(loop) for loop in d["boundary_loops"]),
                                       int(d["genus"]), int(d["holes"]))
        if kind == "pwpoly_form":
            return PwPolyForm(decode(d["surface"]), int(d["degree"]), _from_carray(d["coeffs"]))
        if kind == "elliptic_curve":
            return EllipticCurve(_z(d["omega1"]), _z(d["omega2"]))
        if kind == "elliptic_product":
            return EllipticProductSurface(decode(d["E1"]), decode(d["E2"]))
        if kind == "meromorphic_two_form":
            p = d["p"]
            return MeromorphicTwoForm(decode(d["surface"]), None if p is None else _z(p))
        if kind == "fourier_form":
            q, n, K = int(d["q"]), int(d["n"]), int(d["K"])
            M = 2 * K + 1
            c = np.zeros((NCOMP[q], M, M, M, M, n, n), dtype=complex)
            for term in d["terms"]:
                k = [int(v) for v in term["k"]]
                if len(k) != 4 or max(abs(v) for v in k) > K:
                    raise SchemaError(f"frequency {k} outside |k| <= {K}")
                c[(int(term["component"]),) + tuple(v + K for v in k)] = \
                    [[_z(v) for v in row] for row in term["value"]]
            return FourierForm(decode(d["surface"]), q, c)
        if kind == "fat_graph_connection":
            graph = FatGraph.standard(int(d["genus"]), int(d["holes"]))
            return FatGraphConnection(graph, _from_carray(d["U"]), decode(d["group"]))
        if kind == "quadrature_scheme":
            return QuadratureScheme(int(d["grid"]), int(d["depth"]), float(d["patch"]), int(d["order"]))
    except (KeyError, TypeError, IndexError) as exc:
        raise SchemaError(f"malformed {kind} document: {exc}") from exc
    raise SchemaError(f"unknown kind {kind!r}")


def dumps(obj, **kwargs) -> str:
    return json.dumps({"schema_version": SCHEMA_VERSION, "object": encode(obj)}, **kwargs)


def loads(text: str):
    doc = json.loads(text)
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise SchemaError(f"unsupported schema version {doc.get('schema_version')!r}")
    return decode(doc["object"])
