"""Monte Carlo estimation of the spread of an inferred probability.

Each trial draws every stored probability vector independently, runs
exact point inference, and records the inferred probability as one
sample point. From the squared deviations about the propagated expected
value a 95% confidence interval on the standard deviation follows from
the chi-square construction with

    a(n) = (z_.975 + sqrt(2n-1))^2 / 2,   b(n) = (z_.025 + sqrt(2n-1))^2 / 2,
    z_.975 = -1.96, z_.025 = 1.96  (valid for n > 100),

as [sqrt(S/b(n)), sqrt(S/a(n))] where S = sum_i (x_i - E)^2. Sample-size
planners invert the worst-case width bound

    sqrt(n) * MAX[E, 1-E] * (1/sqrt(a(n)) - 1/sqrt(b(n))) < epsilon

(or its relative variant with MAX[1, (1-E)/E]). Nonparametric tolerance
intervals come from order statistics: with gamma = 1 + (n-1)p^n - np^(n-1)
the sample range [u, U] is a 100*gamma% tolerance interval for 100p% of
the distribution, and interior order-statistic pairs (x_i, x_j) give
gamma' = 1 - I_p(j-i, n-j+i+1) with I the regularized incomplete beta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import betainc

from .errors import PlanningCapError, ZeroProbabilityEvidenceError
from .inference import instantiate_expected, point_network, query_marginal
from .model import Evidence, Network
from .sampling import RandomStream, sample_parameter_vector

Z_HI = 1.96  # z_.025; z_.975 = -1.96
N_FLOOR = 101  # chi-square construction requires n > 100
PLAN_CAP = 10**9


@dataclass(frozen=True)
class SampleSummary:
    """Record of one Monte Carlo run for a single inferred probability."""

    node: str
    alternative: int
    evidence: Evidence
    n: int
    reference_mean: float          # from expected-value propagation
    sq_dev_sum: float              # sum_i (x_i - reference_mean)^2
    sorted_sample: np.ndarray      # ascending
    sample_min: float
    sample_max: float


@dataclass(frozen=True)
class StdCI:
    level: float
    a_n: float
    b_n: float
    lower: float
    upper: float


def a_of_n(n: int) -> float:
    return 0.5 * (-Z_HI + math.sqrt(2 * n - 1)) ** 2


def b_of_n(n: int) -> float:
    return 0.5 * (Z_HI + math.sqrt(2 * n - 1)) ** 2


def width_factor(n: int) -> float:
    """1/sqrt(a(n)) - 1/sqrt(b(n)), the CI width per unit sqrt(S)."""
    return 1.0 / math.sqrt(a_of_n(n)) - 1.0 / math.sqrt(b_of_n(n))


# ---------------------------------------------------------------------------
# Trials


def run_trials(net: Network, ev: Evidence, query: tuple[str, int], n: int,
               master_seed: int) -> SampleSummary:
    """n independent trials of the inferred probability P(query | ev).

    Trial i redraws every stored row from its own stream, derived from
    (master_seed, trial index, global row ordinal) so that runs are
    reproducible and trials could execute in any order. The posterior on
    the stored-parameter uncertainty is approximated by its prior, so
    rows stay independent under evidence.
    """
    node_name, alt = query
    if n < 1:
        raise ValueError("need at least one trial")
    node = net.node(node_name)
    if not 0 <= alt < node.n_alternatives:
        raise ValueError(f"alternative index {alt} out of range for {node_name!r}")

    expected_net = instantiate_expected(net)
    reference = float(query_marginal(expected_net, ev, node_name)[alt])

    ordinals = {}
    counter = 0
    for nd in net.nodes:
        for r in range(len(nd.cpd)):
            ordinals[(nd.name, r)] = counter
            counter += 1

    xs = np.empty(n)
    for trial in range(n):
        def rows_fn(nd, r, _trial=trial):
            stream = RandomStream.derive(master_seed, _trial, ordinals[(nd.name, r)])
            return sample_parameter_vector(nd.cpd[r], stream)

        pnet = point_network(net, rows_fn)
        try:
            xs[trial] = query_marginal(pnet, ev, node_name)[alt]
        except ZeroProbabilityEvidenceError as e:
            raise ZeroProbabilityEvidenceError(
                f"evidence impossible in trial {trial}: {e}", trial=trial) from e

    xs.sort()
    return SampleSummary(
        node=node_name, alternative=alt, evidence=ev, n=n,
        reference_mean=reference,
        sq_dev_sum=float(((xs - reference) ** 2).sum()),
        sorted_sample=xs,
        sample_min=float(xs[0]), sample_max=float(xs[-1]))


def std_confidence_interval(s: SampleSummary) -> StdCI:
    """95% CI for the standard deviation about the reference mean."""
    if s.n <= 100:
        raise ValueError("chi-square CI requires n > 100")
    a, b = a_of_n(s.n), b_of_n(s.n)
    root = math.sqrt(s.sq_dev_sum)
    return StdCI(level=0.95, a_n=a, b_n=b,
                 lower=root / math.sqrt(b), upper=root / math.sqrt(a))


# ---------------------------------------------------------------------------
# Sample-size planning


def _plan(predicate) -> int:
    """Smallest n >= N_FLOOR with predicate(n) true (predicate monotone)."""
    n = N_FLOOR
    if predicate(n):
        return n
    lo = n  # fails
    hi = 2 * n
    while not predicate(hi):
        lo = hi
        hi *= 2
        if hi > PLAN_CAP:
            raise PlanningCapError(f"no admissible n found below {PLAN_CAP}")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if predicate(mid):
            hi = mid
        else:
            lo = mid
    return hi


def plan_n_absolute(expected: float, epsilon: float) -> int:
    """Smallest n > 100 guaranteeing CI width < epsilon in the worst case."""
    if not 0.0 < expected < 1.0:
        raise ValueError("expected value must lie strictly inside (0, 1)")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    m = max(expected, 1.0 - expected)
    return _plan(lambda n: math.sqrt(n) * m * width_factor(n) < epsilon)


def plan_n_relative(expected: float, epsilon: float) -> int:
    """Smallest n > 100 with worst-case CI width / expected < epsilon."""
    if not 0.0 < expected < 1.0:
        raise ValueError("expected value must lie strictly inside (0, 1)")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    m = max(1.0, (1.0 - expected) / expected)
    return _plan(lambda n: math.sqrt(n) * m * width_factor(n) < epsilon)


# ---------------------------------------------------------------------------
# Tolerance intervals


def minmax_tolerance_gamma(n: int, p: float) -> float:
    """Confidence that the sample range covers at least fraction p of mass."""
    if n < 2:
        raise ValueError("need a sample of at least 2")
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie in (0, 1)")
    return 1.0 + (n - 1) * p**n - n * p ** (n - 1)


def plan_tolerance_n(p: float, gamma_target: float) -> int:
    """Smallest n with minmax_tolerance_gamma(n, p) >= gamma_target."""
    if not 0.0 < p < 1.0 or not 0.0 < gamma_target < 1.0:
        raise ValueError("p and gamma must lie in (0, 1)")
    n = 2
    if minmax_tolerance_gamma(n, p) >= gamma_target:
        return n
    lo, hi = n, 2 * n
    while minmax_tolerance_gamma(hi, p) < gamma_target:
        lo = hi
        hi *= 2
        if hi > PLAN_CAP:
            raise PlanningCapError(f"no admissible n found below {PLAN_CAP}")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if minmax_tolerance_gamma(mid, p) >= gamma_target:
            hi = mid
        else:
            lo = mid
    return hi


def order_stat_gamma(n: int, i: int, j: int, p: float) -> float:
    """Confidence that [x_(i), x_(j)] covers at least fraction p of mass."""
    if not 1 <= i < j <= n:
        raise ValueError(f"need 1 <= i < j <= n, got i={i}, j={j}, n={n}")
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie in (0, 1)")
    return 1.0 - float(betainc(j - i, n - j + i + 1, p))


def order_stat_tolerance_gamma(s: SampleSummary, i: int, j: int, p: float) -> float:
    """order_stat_gamma for a concrete sample's order statistics (1-based)."""
    return order_stat_gamma(s.n, i, j, p)
