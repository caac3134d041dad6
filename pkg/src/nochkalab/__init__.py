"""Exact position invariants, Nochka-type weights and Weil height experiments
for weighted hypersurface configurations in P^n over Q."""

from .config import (AbstractNodeSpec, DivisorComponent, DivisorEntry, WeightedConfiguration,
                     parse_config, serialize_config, simple_configuration)
from .errors import (ConfigSyntaxError, FactorizationLimitError, InternalCheckError, NochkaLabError,
                     NodeLimitError, PointOnDivisorError, ValidationError)
from .harness import PointFamily, generate_family, proof_trace, run_inequality_experiment
from .heights import (global_height, local_weil, min_weil, multi_weil, proximity_counting,
                      seshadri_pn)
from .incidence import IncidenceStructure, abstract_structure, alpha, build_lattice, structure_for
from .nochka import (ChebyshevInstance, admissible_max_subset, b_coefficient, chebyshev_max_bound,
                     chebyshev_min_bound, decompose_divisors, low_dim_weights, nochka_diagram,
                     verify_nochka_property)
from .poly import HomogeneousPolynomial, ProjectivePoint, evaluate_form, parse_polynomial
from .position import (analyze, bezout_check, coefficient_menu, distributive_constant, index_kappa,
                       max_alpha_ratio, min_subgeneral_m)
from .rational import ARCH, LogRational, Place, PlaceSet, arch_abs, padic_abs

__version__ = "0.1.0"
