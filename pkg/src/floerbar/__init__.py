"""floerbar: exact-arithmetic toolkit for filtered Floer-type persistence.

Submodules
----------

``novikov``
    Reduced rationals and finite F2 scalars over one graded quantum variable,
    with the non-Archimedean valuation convention ``nu(variable) =
    -action_step``.
``persistence``
    Barcodes; bottleneck/interleaving distance (exact, via candidate
    tolerances and bipartite matching); the shift-quotient metric; boundary
    depth and bar-length spectra.
``complexes``
    Filtered chain complexes over a Novikov field; orthogonalising reduction,
    barcodes, spectral invariants, the spectral norm, and an independent
    rank-function oracle.
``diagrams``
    Combinatorial two-curve diagrams on the sphere or annulus; lune
    enumeration and the induced filtered complex.
``radial``
    Generator spectra of piecewise linear radial Hamiltonian profiles;
    feasible-barcode enumeration, certified boundary-depth bounds, and
    continuity pruning along profile families.
``seidel``
    One-generator quantum ring arithmetic, power-hypothesis verification,
    the exact averaging bound and its symbolic telescoping certificate.
"""

from .exactpi import PiRational
from .novikov import (LagrangianParams, NovikovScalar, NovikovSpec, Rational,
                      format_rational, nov_add, nov_mul, nov_valuation,
                      parse_rational)
from .persistence import (Bar, Barcode, INF, NEG_INF, bar_length_spectrum,
                          bottleneck_distance, boundary_depth,
                          brute_force_bottleneck, interleaving_distance,
                          shift_barcode, shifted_bottleneck)
from .complexes import (FilteredComplex, Generator, barcode,
                        brute_force_barcode, complex_from_json,
                        complex_to_json, gamma, spectral_invariant, uz_reduce)
from .diagrams import (TwoCurveDiagram, build_complex, diagram_beta,
                       diagram_gamma, enumerate_lunes, equator_pair_annulus,
                       equator_pair_diagram, two_circle_diagram,
                       validate_diagram)
from .radial import (GeneratorSpectrum, RadialProfile, degree_actions,
                     degree_class_actions, feasible_barcodes, fold_profile,
                     forced_bar_bound, generators, homotopy_filter)
from .seidel import (QHPresentation, RingElement, SeidelData, averaging_bound,
                     example_case, qh_mul, quasimorphism_defect_bound,
                     telescoping_check, verify_hypotheses)

__version__ = "0.1.0"
