"""Flat connections through their holonomies, and the labels of symplectic leaves.

A flat SU(2) connection on a genus-1 surface with two holes is recorded by
holonomies A, B around the handle and M1, M2 around the holes, subject to
[A, B] M1 M2 = 1.  The conjugacy classes of M1 and M2 label the leaf, so they
must not change under gauge transformations.  Data violating the relation
is refused.
"""
import numpy as np

from moduli_lab.lie import SU2, GroupElement, group_commutator, random_group
from moduli_lab.real_surface import RelationError, flat_from_holonomy, label_distance, leaf_label

rng = np.random.default_rng(7)
A, B, M1 = (random_group(SU2, rng) for _ in range(3))
M2 = GroupElement(np.linalg.inv(group_commutator(A.m, B.m) @ M1.m), SU2)

conn = flat_from_holonomy(1, 2, [(A, B)], [M1, M2], rng=rng)
print(f"face defect of the fat-graph connection: {conn.face_defect():.2e}")
for j, lab in enumerate(leaf_label(conn)):
    print(f"hole {j}: characteristic polynomial coefficients {np.round(lab.coeffs, 6)}")

gauge = np.array([random_group(SU2, rng).m for _ in range(conn.graph.n_vertices)])
moved = conn.gauge(gauge)
print(f"\nlabel change under a random vertex gauge: {label_distance(leaf_label(conn), leaf_label(moved)):.2e}")

try:
    flat_from_holonomy(1, 2, [(A, B)], [M1, random_group(SU2, rng)])
except RelationError as exc:
    print(f"\nrejected inconsistent holonomies: {exc}")
