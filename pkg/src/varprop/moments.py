"""First and second moments of stored probability vectors.

For each stored vector p = (p_1..p_t) everything downstream consumes the
triple E(p_i), E(p_i^2), E(p_i p_j), held as a mean vector and a symmetric
t x t second-moment matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import DistributionSpec


@dataclass(frozen=True)
class MomentTable:
    """mean[i] = E(p_i); second[i, j] = E(p_i p_j) (diagonal E(p_i^2))."""

    mean: np.ndarray
    second: np.ndarray

    @property
    def size(self) -> int:
        return len(self.mean)

    def variance(self) -> np.ndarray:
        return np.diag(self.second) - self.mean**2

    def check(self, tol: float = 1e-12) -> list[str]:
        """Invariant defects (empty when consistent)."""
        out = []
        mu, s = self.mean, self.second
        if abs(mu.sum() - 1.0) > tol:
            out.append(f"means sum to {mu.sum()!r}")
        if not np.allclose(s, s.T, atol=tol, rtol=0):
            out.append("second-moment matrix not symmetric")
        if np.max(np.abs(s.sum(axis=1) - mu)) > 10 * tol:
            out.append("row sums of second moments do not match means")
        if np.any(s < -tol) or np.any(s > np.minimum.outer(mu, mu) + tol):
            out.append("second moments outside [0, min(mu_i, mu_j)]")
        v = self.variance()
        if np.any(v < -tol) or np.any(v > mu - mu**2 + tol):
            out.append("variance outside [0, mu - mu^2]")
        return out


def dirichlet_moments(counts) -> MomentTable:
    """Moments of a Dirichlet over t alternatives with integer counts a_i.

    E(p_i)     = (a_i + 1) / (A + t)
    E(p_i^2)   = (a_i + 2) / (A + t + 1) * E(p_i)
    E(p_i p_j) = (a_i + 1)(a_j + 1) / ((A + t + 1)(A + t))

    with A = sum(a_i). Counts must be non-negative integers and t >= 2.
    """
    a = np.asarray(counts, dtype=float)
    t = len(a)
    if t < 2:
        raise ValueError(f"need at least 2 alternatives, got {t}")
    if np.any(a < 0) or np.any(a != np.round(a)):
        raise ValueError("counts must be non-negative integers")
    total = a.sum() + t
    mean = (a + 1) / total
    second = np.outer(a + 1, a + 1) / ((total + 1) * total)
    np.fill_diagonal(second, (a + 2) / (total + 1) * mean)
    return MomentTable(mean=mean, second=second)


def finite_support_moments(atoms) -> MomentTable:
    """Moments of a finite mixture of probability vectors.

    atoms: iterable of (vector, weight) with weights summing to 1.
    """
    atoms = list(atoms)
    if not atoms:
        raise ValueError("empty atom list")
    vecs = np.asarray([v for v, _ in atoms], dtype=float)
    weights = np.asarray([w for _, w in atoms], dtype=float)
    mean = weights @ vecs
    second = np.einsum("a,ai,aj->ij", weights, vecs, vecs)
    return MomentTable(mean=mean, second=second)


def spec_moments(spec: DistributionSpec) -> MomentTable:
    """MomentTable for any DistributionSpec."""
    if spec.kind == "dirichlet":
        return dirichlet_moments(spec.dirichlet)
    if spec.kind == "point":
        v = np.asarray(spec.point, dtype=float)
        return MomentTable(mean=v, second=np.outer(v, v))
    return finite_support_moments([(np.asarray(v, float), w) for v, w in spec.finite])
