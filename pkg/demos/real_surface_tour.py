"""A walk through gauge theory on a torus with one boundary circle.

On a triangulated holed torus we draw a random su(2) connection and check,
exactly up to rounding, that
  * the gauge Hamiltonian H_eps generates the gauge direction d eps + [A, eps],
  * Poisson brackets of Hamiltonians close up to a boundary cocycle, which
    disappears once the boundary is capped off.
"""
import numpy as np

from moduli_lab.lie import SU2
from moduli_lab.real_surface import build_surface, cocycle, gauge_direction, hamiltonian_variation, symplectic_W
from moduli_lab.real_surface.forms import random_one_form, random_zero_form
from moduli_lab.real_surface.gauge import extension_terms

rng = np.random.default_rng(2024)
surface = build_surface(1, 1)
print(f"surface: genus 1, one hole, {surface.n_triangles} triangles, Euler characteristic "
      f"{surface.euler_characteristic}")

A = random_one_form(surface, SU2, rng)
eps1, eps2 = random_zero_form(surface, SU2, rng), random_zero_form(surface, SU2, rng)
a = random_one_form(surface, SU2, rng)

# Moving A in the direction a changes H_eps by the symplectic pairing with the gauge direction.
dh = hamiltonian_variation(A, eps1, a)
w = symplectic_W(a, gauge_direction(A, eps1))
print(f"\nvariation of H along a : {dh:.12f}")
print(f"W(a, nabla eps)        : {w:.12f}")

# The bracket of two Hamiltonians is the Hamiltonian of the bracket, shifted by a boundary term.
pb, h, c = extension_terms(A, eps1, eps2)
print(f"\n{{H1, H2}}             : {pb:.12f}")
print(f"H_[eps1,eps2] + c      : {h + c:.12f}   (cocycle c = {c:.6f})")

closed = build_surface(1, 0)
c_closed = cocycle(random_zero_form(closed, SU2, rng), random_zero_form(closed, SU2, rng))
print(f"\non the closed torus the cocycle is {c_closed}")
