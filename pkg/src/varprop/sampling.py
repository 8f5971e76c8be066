"""Random probability vectors from stored distributions.

Dirichlet vectors are drawn by sequential stick-breaking: the first
component comes from inverting the Beta CDF at a uniform draw, the
remaining mass is rescaled, and the procedure recurses; the final
component is one minus the sum of the others. Stage i of t uses
Beta(a_i + 1, sum_{k>i}(a_k + 1)) for the scaled component.
"""

from __future__ import annotations

import numpy as np
from scipy.special import betainc

from .errors import ConvergenceError
from .model import DistributionSpec

DEFAULT_TOL = 1e-10
MAX_ITER = 200


class RandomStream:
    """Deterministic uniform(0,1) stream; same seed, same sequence.

    Independent streams for parallel work are derived with ``derive``,
    which splits a master seed with arbitrary integer key parts via
    numpy's SeedSequence.
    """

    def __init__(self, seed: int):
        self.seed = int(seed)
        self._gen = np.random.Generator(np.random.PCG64(
            np.random.SeedSequence(self.seed & 0xFFFFFFFFFFFFFFFF)))

    @classmethod
    def derive(cls, master_seed: int, *key: int) -> "RandomStream":
        stream = cls.__new__(cls)
        stream.seed = int(master_seed)
        entropy = tuple(k & 0xFFFFFFFFFFFFFFFF for k in (master_seed, *key))
        stream._gen = np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))
        return stream

    def next(self) -> float:
        return float(self._gen.random())


def beta_inverse_cdf(alpha: float, beta: float, r: float,
                     tol: float = DEFAULT_TOL) -> float:
    """x in [0,1] with |I_x(alpha, beta) - r| <= tol, by bisection.

    I is the regularized incomplete beta (the Beta CDF). Shapes must be
    >= 1 (they arise as counts + 1).
    """
    if not (alpha >= 1 and beta >= 1):
        raise ValueError("shape parameters must be >= 1")
    if not 0.0 <= r <= 1.0:
        raise ValueError("r must lie in [0, 1]")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if r == 0.0:
        return 0.0
    if r == 1.0:
        return 1.0
    lo, hi = 0.0, 1.0
    for _ in range(MAX_ITER):
        mid = 0.5 * (lo + hi)
        f = float(betainc(alpha, beta, mid))
        if abs(f - r) <= tol:
            return mid
        if f < r:
            lo = mid
        else:
            hi = mid
    raise ConvergenceError(
        f"beta CDF inversion did not reach tol={tol} for "
        f"alpha={alpha}, beta={beta}, r={r}")


def sample_parameter_vector(spec: DistributionSpec, stream: RandomStream,
                            tol: float = DEFAULT_TOL) -> np.ndarray:
    """One random probability vector distributed per ``spec``.

    Point specs return the point; finite specs select an atom by
    cumulative weight against a single draw; Dirichlet specs use
    stick-breaking as described in the module docstring.
    """
    if spec.kind == "point":
        return np.asarray(spec.point, dtype=float)
    if spec.kind == "finite":
        r = stream.next()
        cum = 0.0
        for vec, w in spec.finite:
            cum += w
            if r < cum:
                return np.asarray(vec, dtype=float)
        return np.asarray(spec.finite[-1][0], dtype=float)

    a = spec.dirichlet
    t = len(a)
    out = np.empty(t)
    remaining = 1.0
    for i in range(t - 1):
        rest = sum(a[k] + 1 for k in range(i + 1, t))
        y = beta_inverse_cdf(a[i] + 1, rest, stream.next(), tol)
        out[i] = remaining * y
        remaining *= 1.0 - y
    out[t - 1] = 1.0 - out[: t - 1].sum()
    if out[t - 1] < 0.0:  # roundoff on the final component
        out[t - 1] = 0.0
    return out
