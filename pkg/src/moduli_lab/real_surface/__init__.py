"""The real side: connections d + A on a triangulated surface with boundary."""
from .fatgraph import (FatGraph, FatGraphConnection, RelationError, flat_from_holonomy, label_distance,
                       leaf_label)
from .forms import (PwPolyForm, area_form, bubble_one_form, constant_zero_form, exterior_d, from_layout,
                    graded_bracket, integrate_boundary, integrate_surface, p1_zero_form, p2_zero_form,
                    random_one_form, random_zero_form, wedge, whitney_one_form, zero_form)
from .gauge import (BoundaryForm, ConnectionA, MomentumValue, cocycle, cocycle_jacobi_defect, curvature,
                    dual_pairing, extended_jacobi_defect, gauge_direction, hamiltonian,
                    hamiltonian_variation, momentum, poisson_bracket, symplectic_W,
                    verify_extension_identity, verify_momentum_bracket)
from .mesh import SurfaceError, TriangulatedSurface, build_surface, subdivide
