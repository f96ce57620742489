"""Morphology on the bounded logarithmic grey scale.

The package provides the bounded (LIP) grey-value algebra, classical and
logarithmic sliding-window morphology with rank-filter variants, Asplund
distance maps, illumination-invariant residue operators, a vessel
segmentation pipeline for eye-fundus images, and the matching evaluation
tools.  ``logmorph.oracle`` holds independent brute-force references used
by the test suite.
"""

from .lip import (lip_add, lip_negate, lip_sub, lip_scalar_mul,
                  to_additive, from_additive, lip_luminance)
from .image import (StructuringFunction, disk, half_sphere, ring,
                    gaussian_ring, line_segment, from_array, negate_image)
from .morphology import (dilate, erode, opening, closing,
                         log_dilate, log_erode, log_opening, log_closing,
                         rank_min, rank_max, log_rank_min, log_rank_max,
                         lip_diff_maps)
from .asplund import (tolerance_counts, mlub, mglb, asplund_map,
                      asplund_map_tol, classical_tol_map, gradient,
                      lip_gradient)
from .residues import (top_hat, bottom_hat, lip_top_hat, extended_top_hat,
                       extended_lip_top_hat, bump_left, bump_right,
                       bump_detector, diff_of_openings, diff_of_log_openings)
from .vessels import (VesselProbe, PipelineConfig, build_probe,
                      contact_floor, side_responses, orientation_response,
                      vesselness, segment_vessels, estimate_zoi)
from .evaluate import (DarkeningParams, darkening_field, darken_channel,
                       darken_rgb, fit_zoi_circle, SegMetrics, confusion,
                       auc_from_map, relative_auc_diff)

__version__ = "0.1.0"
