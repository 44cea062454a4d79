"""Numerical library for unitary-orbit value sets of truncated operators.

Computes and certifies the sets {tr(C U^dag A U)} and their permutation
pairing spectra for trace-class/bounded operator pairs given in a fixed
canonical basis, together with Hausdorff-metric convergence diagnostics of
their finite truncations, essential-numerical-range center estimates, and
unitary dilation utilities.
"""

from .dilation import DilationResult, approx_unitary, dilate_contraction, psd_sqrt
from .finrange import (BirkhoffCertificate, HypothesisError, RangeEstimate,
                       SpectrumSet, birkhoff_decompose, boundary_hull,
                       c_spectrum_matrix, haar_unitaries, haar_unitary,
                       sample_range, support_value, triangular_spectrum,
                       unistochastic, wc_birkhoff_certificate, wc_point)
from .limits import (EssentialEstimate, TruncationSchedule, essential_center,
                     interleave_indices, interleave_zeros,
                     permutation_sum_set, range_sequence, sequence_report,
                     spectrum_sequence)
from .opmodel import (Decay, EigSeq, EvaluationError, OperatorSpec,
                      SchmidtTriple, SpecValidationError, block_approx, embed,
                      matrix_from_json, matrix_to_json, modified_eig_seq,
                      operator_from_json, schmidt, trace, trace_norm, truncate)
from .planarsets import (ConvergenceReport, PointCloud, Polygon, contains,
                         convex_hull, directed_hausdorff, hausdorff_cauchy_check,
                         hausdorff_distance, kuratowski_limits,
                         polygon_hausdorff, read_cloud_csv, read_polygon_csv,
                         star_violation, write_cloud_csv, write_polygon_csv)

__version__ = "0.1.0"
