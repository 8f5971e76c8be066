"""Hot kernels for the second-moment mixing step.

The dominant cost of moment propagation is accumulating, for every pair
of parent configurations (c, c') and every pair of child alternatives
(i, j), the product of a conditional-row cross moment with the parents'
joint second-moment factor. Two interchangeable implementations are
provided: a numba-compiled loop and a vectorized numpy fallback. The
backend defaults to numba when importable; set the environment variable
``VARPROP_NUMBA=0`` (or call :func:`set_backend`) to force numpy.

Kernel contract (K conditions, C parent configurations, t alternatives,
nr distinct stored rows):

* ``row_ids[m, c]``: stored-row index used at condition m, configuration c
* ``row_mean[r, i]``, ``row_second[r, i, j]``: moments of stored row r
* ``mean_factor[m, c]``: product over parents of per-condition means
* ``pair_factor[m, n, c, d]``: product over parents of joint second moments

Cross moments of two stored rows factor into means when the rows differ
(distinct rows are independent) and use the row's own second-moment
matrix when they coincide.
"""

from __future__ import annotations

import os

import numpy as np

_env = os.environ.get("VARPROP_NUMBA", "1").strip().lower()
_want_numba = _env not in ("0", "false", "off", "no")


def _mix_numpy(row_ids, row_mean, row_second, mean_factor, pair_factor):
    mu = np.einsum("mc,mci->mi", mean_factor, row_mean[row_ids])
    a = row_mean[row_ids]                                   # (K, C, t)
    outer = a[:, :, None, None, :, None] * a[None, None, :, :, None, :]
    sec = row_second[row_ids][:, :, None, None, :, :]
    same = (row_ids[:, :, None, None] == row_ids[None, None, :, :])
    cross = np.where(same[..., None, None], sec, outer)     # (K, C, K, C, t, t)
    joint = np.einsum("mcndij,mncd->mnij", cross, pair_factor)
    return mu, joint


def _mix_loops(row_ids, row_mean, row_second, mean_factor, pair_factor):
    K, C = row_ids.shape
    t = row_mean.shape[1]
    mu = np.zeros((K, t))
    joint = np.zeros((K, K, t, t))
    for m in range(K):
        for c in range(C):
            r = row_ids[m, c]
            w = mean_factor[m, c]
            for i in range(t):
                mu[m, i] += w * row_mean[r, i]
    for m in range(K):
        for n in range(K):
            for c in range(C):
                r = row_ids[m, c]
                for d in range(C):
                    s = row_ids[n, d]
                    w = pair_factor[m, n, c, d]
                    if r == s:
                        for i in range(t):
                            for j in range(t):
                                joint[m, n, i, j] += w * row_second[r, i, j]
                    else:
                        for i in range(t):
                            for j in range(t):
                                joint[m, n, i, j] += w * row_mean[r, i] * row_mean[s, j]
    return mu, joint


_mix_numba = None
if _want_numba:
    try:
        from numba import njit

        _mix_numba = njit(cache=True)(_mix_loops)
    except ImportError:
        _mix_numba = None

_backend = "numba" if _mix_numba is not None else "numpy"


def set_backend(name: str) -> None:
    """Select 'numba' or 'numpy' at runtime (overrides the env default)."""
    global _backend
    if name == "numba" and _mix_numba is None:
        raise ValueError("numba backend unavailable (not installed or disabled)")
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    _backend = name


def active_backend() -> str:
    return _backend


def mix_second_moments(row_ids, row_mean, row_second, mean_factor, pair_factor):
    """Dispatch the mixing kernel to the active backend.

    Returns (mu[K, t], joint[K, K, t, t], term_products) where
    term_products counts the (c, c', i, j) products touched per
    condition pair, i.e. K^2 * C^2 * t^2.
    """
    row_ids = np.ascontiguousarray(row_ids, dtype=np.int64)
    row_mean = np.ascontiguousarray(row_mean, dtype=np.float64)
    row_second = np.ascontiguousarray(row_second, dtype=np.float64)
    mean_factor = np.ascontiguousarray(mean_factor, dtype=np.float64)
    pair_factor = np.ascontiguousarray(pair_factor, dtype=np.float64)
    if _backend == "numba":
        mu, joint = _mix_numba(row_ids, row_mean, row_second, mean_factor, pair_factor)
    else:
        mu, joint = _mix_numpy(row_ids, row_mean, row_second, mean_factor, pair_factor)
    K, C = row_ids.shape
    t = row_mean.shape[1]
    terms = K * K * C * C * t * t
    return mu, joint, terms
