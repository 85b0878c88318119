"""knotbeams: knotted optical vortex fields from braid words.

Given a braid word, construct complex scalar fields satisfying the paraxial
wave equation whose zero lines close to the corresponding knot, trace those
nodal curves, and verify the knot type through braid-closure invariants.
"""

from .braid import (BraidWord, LaurentPoly, alexander_polynomial, closure_permutation,
                    component_count, jones_polynomial, mirror, parse_braid_word,
                    shift_braid)
from .construct import (BasePolynomial, BasicLoop, PiecewiseLoop, TrigLoop,
                        concatenate_loops, critical_data, fourier_approximate, g_eval,
                        track_roots, winding_diagnostic)
from .field import (CoefficientField, SemiholomorphicPoly, build_semiholomorphic,
                    eval_F, restrict_z0_cylindrical)
from .pipeline import PipelineConfig, run_pipeline
from .presets import all_knot_presets, knot_preset, loop_set
from .propagate import (GaussianBeamField, P_beam, PolynomialBeamField, Q_beam,
                        assemble_gaussian_beam, assemble_polynomial_beam, laguerre,
                        paraxial_residual)
from .topo import extract_braid, identify_knot
from .trace import NodalCurve, Window, select_component, slice_zeros, trace_nodal_curves

__version__ = "0.1.0"
