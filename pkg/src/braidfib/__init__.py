"""braidfib: braids as loops of monic complex polynomials.

Braid words and their inhomogeneity counts, trigonometric strand systems,
root / saddle-point / critical-value tracking, argument-map critical
points (pseudo-fibrations), cacti and square diagrams, fiber level-set
meshes, and the semiholomorphic mixed-polynomial scaffold.
"""

__version__ = "0.1.0"

from .argmap import (ArgCriticalPoint, PFiberedCertificate, arg_critical_points,
                     is_p_fibered, morse_count_report)
from .braidwords import (BraidWord, Permutation, PlaneTree, beta,
                         closure_components, is_homogeneous, mn_upper_bound,
                         parse_word, format_word, permutation_of, tree_edge_to_band)
from .foliations import (Cactus, SquareDiagram, cactus_of, embedded_tree_of,
                         fiber_band_word, square_diagram)
from .meshes import FiberMesh, euler_characteristic, level_set, sweep_report
from .mixedpoly import (MixedPolynomial, NewtonData, check_symmetry, derivative_u,
                        minimal_k, newton_data, semiholomorphic, verify_cone)
from .polyloops import (CriticalData, PolyLoop, SampledBraid, concatenate,
                        critical_data, from_roots, prescribe_saddle, roots_at,
                        track, twist_concatenation, twist_loop)
from .strands import (StrandSystem, builtin_52, parametrize, recover_word)
from .trigcurves import TrigCurve

__all__ = [
    "ArgCriticalPoint", "BraidWord", "Cactus", "CriticalData", "FiberMesh",
    "MixedPolynomial", "NewtonData", "Permutation", "PFiberedCertificate",
    "PlaneTree", "PolyLoop", "SampledBraid", "SquareDiagram", "StrandSystem",
    "TrigCurve", "arg_critical_points", "beta", "builtin_52", "cactus_of",
    "check_symmetry", "closure_components", "concatenate", "critical_data",
    "derivative_u", "embedded_tree_of", "euler_characteristic",
    "fiber_band_word", "format_word", "from_roots", "is_homogeneous",
    "is_p_fibered", "level_set", "minimal_k", "mn_upper_bound",
    "morse_count_report", "newton_data", "parametrize", "parse_word",
    "permutation_of", "prescribe_saddle", "recover_word", "roots_at",
    "semiholomorphic", "square_diagram", "sweep_report", "track",
    "tree_edge_to_band", "twist_concatenation", "twist_loop", "verify_cone",
]
