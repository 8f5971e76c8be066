"""varprop: variances of node probabilities in belief networks whose
stored conditional probabilities are themselves uncertain."""

from .bounds import relative_std_bound, variance_upper_bound
from .errors import (ConvergenceError, CutsetError, DataError, NetworkFormatError,
                     OracleError, PlanningCapError, SimplexError,
                     UnsupportedAnalysisError, UnsupportedEvidenceError,
                     VarpropError, ZeroProbabilityEvidenceError)
from .inference import (PointNetwork, exact_marginals, instantiate_expected,
                        point_network, query_marginal)
from .kernels import active_backend, mix_second_moments, set_backend
from .model import (EMPTY_EVIDENCE, DistributionSpec, Evidence, Network, NodeSpec,
                    TopologyReport, Violation, classify_topology, dirichlet_spec,
                    finite_spec, parse_evidence, parse_network, point_spec,
                    serialize_network, validate_network)
from .moments import MomentTable, dirichlet_moments, finite_support_moments, spec_moments
from .montecarlo import (SampleSummary, StdCI, minmax_tolerance_gamma,
                         order_stat_gamma, order_stat_tolerance_gamma,
                         plan_n_absolute, plan_n_relative, plan_tolerance_n,
                         run_trials, std_confidence_interval, width_factor)
from .oracle import enumerate_all_moments, enumerate_exact_moments
from .propagation import (ConditionedMoments, NodeMoments, conditioned_prior_moments,
                          downstream_evidence_moments, mix_child_moments,
                          propagate_prior_moments, variance_of)
from .sampling import RandomStream, beta_inverse_cdf, sample_parameter_vector

__version__ = "0.1.0"

__all__ = [
    "ConditionedMoments", "ConvergenceError", "CutsetError", "DataError",
    "DistributionSpec", "EMPTY_EVIDENCE", "Evidence", "MomentTable", "Network",
    "NetworkFormatError", "NodeMoments", "NodeSpec", "OracleError",
    "PlanningCapError", "PointNetwork", "RandomStream", "SampleSummary",
    "SimplexError", "StdCI", "TopologyReport", "UnsupportedAnalysisError",
    "UnsupportedEvidenceError", "VarpropError", "Violation",
    "ZeroProbabilityEvidenceError", "active_backend", "beta_inverse_cdf",
    "classify_topology",
    "conditioned_prior_moments", "dirichlet_moments", "dirichlet_spec",
    "downstream_evidence_moments", "enumerate_all_moments",
    "enumerate_exact_moments", "exact_marginals", "finite_spec",
    "finite_support_moments", "instantiate_expected", "minmax_tolerance_gamma",
    "mix_child_moments", "mix_second_moments", "order_stat_gamma",
    "order_stat_tolerance_gamma",
    "parse_evidence", "parse_network", "plan_n_absolute", "plan_n_relative",
    "plan_tolerance_n", "point_network", "point_spec", "propagate_prior_moments",
    "query_marginal", "relative_std_bound", "run_trials",
    "sample_parameter_vector", "serialize_network", "set_backend", "spec_moments",
    "std_confidence_interval", "validate_network", "variance_of",
    "variance_upper_bound", "width_factor",
]
