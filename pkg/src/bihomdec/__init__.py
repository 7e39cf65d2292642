"""Exact decomposition of bi-homogeneous polynomials.

Rank-1 terms are products of powers of linear forms, one per factor; this
package constructs, decomposes and certifies minimal decompositions against
the two-factor product variety, entirely over the rationals, plus tangent
vectors of the k-factor variety.  See README for the module map.
"""

from .errors import (BihomError, DoesNotSplitError, ExhaustionError,
                     InfeasibleInstanceError, NoSpecialLineError,
                     NonConvergenceError, NotInSpanError, PreconditionError,
                     ShapeMismatchError, SplitMismatchError)
from .forms import (BiForm, BinaryForm, Line, PointPair, ProductCurve, Shape,
                    combine, coords_on_curve_span, coords_on_line_span,
                    essential_subspaces, evaluate, lift, rank1,
                    restrict_to_curve, span_columns)
from .instances import Instance, generate_instance, minimality_evidence
from .linalg import Matrix, format_rational, parse_rational
from .rng import SplitMix64
from .structure import (SpecialLine, SplitDecomposition, WitnessDecomposition,
                        analyze_pair, case_iii_recognizer, check_rho_prime,
                        extend_witness, find_all_special_lines,
                        find_special_line, hilbert_defect, unique_Q,
                        verify_ee7)
from .sylvester import (SylvesterResult, analyze, binary_rational_roots,
                        binary_squarefree, catalecticant, sample_solutions)
from .tangential import (JetK, TangentDecomposition, curve_through_jet,
                         dependency_set, eval_tangent, is_degenerate,
                         reducible_decompose, tangent_form,
                         tangential_decompose, tangential_rank)
from .unipoly import UniPoly, numeric_roots, rational_roots, squarefree

__version__ = "0.1.0"
