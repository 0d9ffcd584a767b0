"""The complex side: S = E1 x E2 with a meromorphic 2-form sigma and its polar curves."""
from .fourier import (CurveForm, FormDegreeError, FourierForm, constant_form, dbar, graded_bracket,
                      mode_form, random_form, wedge, zero_form)
from .gauge import (cocycle_c, curvature_c, dual_pairing_c, extension_terms_c, gauge_direction_c,
                    hamiltonian_c, hamiltonian_variation_c, momentum_c, symplectic_Wc,
                    variation_defect_c, verify_extension_identity_c)
from .geometry import (EllipticProductSurface, MeromorphicTwoForm, PolarComponent, PolarSetError,
                       contour_residue, residue_of_sigma)
from .leaves import (harmonic_leaf_pairing, jacobian_class, leaf_invariance_check, leaf_velocity,
                     restriction_kernel, vanish_on_polar_set)
from .quadrature import (QuadratureError, QuadratureScheme, chain_pair, observed_order, polar_pairing,
                         refinement_study, stokes_leray_check)
from .weierstrass import EllipticCurve, LatticePointError
