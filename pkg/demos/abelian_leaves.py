"""Leaves of the holomorphic Poisson structure for line bundles on E1 x E2.

For rank one the leaf of dbar + A is read off from the restrictions of A
to the polar curves of sigma: each restriction defines a point of the
Jacobian of E2, namely its harmonic part.  Gauge directions never move
these points; directions whose gauge parameter vanishes on the polar set
leave even the restricted forms untouched, while a harmonic shift moves
the points with unit speed.
"""
import numpy as np

from moduli_lab.complex_surface import (EllipticProductSurface, MeromorphicTwoForm, gauge_direction_c,
                                        harmonic_leaf_pairing, leaf_velocity, random_form, restriction_kernel,
                                        vanish_on_polar_set)
from moduli_lab.complex_surface.leaves import harmonic_form, harmonic_shift_slope

sigma = MeromorphicTwoForm(EllipticProductSurface.from_taus(0.2 + 1.1j, 1j), 0.4 + 0.3j)
rng = np.random.default_rng(11)
A = random_form(sigma.surface, 1, 1, 2, rng, scale=0.5)
eps = random_form(sigma.surface, 0, 1, 2, rng, scale=0.5)

v = leaf_velocity(sigma, A, gauge_direction_c(A, eps))
print(f"generic gauge direction: class speed {v.max_class:.2e}, restriction speed {v.max_restriction:.3f}")
v = leaf_velocity(sigma, A, gauge_direction_c(A, vanish_on_polar_set(sigma, eps)))
print(f"eps vanishing on P     : class speed {v.max_class:.2e}, restriction speed {v.max_restriction:.2e}")
print(f"harmonic shift slopes  : {harmonic_shift_slope(sigma, A, 1.0)}")

ker = restriction_kernel(sigma)
print(f"\nharmonic classes restricting to zero on P: span of {ker[:, 0]} in the (dz1bar, dz2bar) basis")
p = harmonic_leaf_pairing(sigma, harmonic_form(sigma, 1.0, 0.0), harmonic_form(sigma, 2.0, 0.0))
print(f"pairing on that line: {p.value}")
