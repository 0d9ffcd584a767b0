"""The Stokes formula on E1 x E2 with a meromorphic 2-form.

sigma = (zeta(z1) - zeta(z1 - 1/2)) dz1 ^ dz2 has simple poles along two
copies of E2.  For a smooth (0,1)-form u the integral of sigma ^ dbar u is
not zero: it equals 2 pi i times the integral of u against the residue of
sigma over the polar curves.  The left side is a singular integral, and the
table shows it converging to the exact right side as the excluded squares
around the poles shrink.
"""
import numpy as np

from moduli_lab.complex_surface import (EllipticProductSurface, MeromorphicTwoForm, observed_order, random_form,
                                        refinement_study)

sigma = MeromorphicTwoForm(EllipticProductSurface.from_taus(1j, 1j), 0.5)
u = random_form(sigma.surface, 1, 2, 2, np.random.default_rng(3), scale=0.5)

results = refinement_study(sigma, u, range(1, 7))
print(f"exact polar side: {results[0].rhs:.10f}\n")
print(f"{'depth':>5}  {'integral of sigma ^ dbar u':>34}  {'defect':>10}")
for depth, r in enumerate(results, start=1):
    print(f"{depth:>5}  {r.lhs.real:>16.10f}{r.lhs.imag:+.10f}j  {r.defect:>10.3e}")
print(f"\nobserved order: {observed_order([r.defect for r in results]):.2f}")
