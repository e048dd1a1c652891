"""Sequence distances used to size similarity-based intervals.

Euclidean, DTW, LCSS, Hausdorff, discrete Frechet and TWED between two
univariate sequences. Elastic measures are computed with full ``O(nm)``
dynamic-programming tables (no band constraints).

Hausdorff and Frechet treat a sequence as a planar curve. By default sample
``i`` becomes the point ``(i, x[i])``; ``embed="value"`` drops the index
coordinate and compares the values as 1-D point sets.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import NamedTuple

import numpy as np
from numba import njit

from .errors import ConfigError, DataError

__all__ = [
    "MetricParams",
    "LCSSResult",
    "euclidean",
    "dtw",
    "lcss",
    "hausdorff",
    "frechet_discrete",
    "twed",
    "METHODS",
]

METHODS = ("euclidean", "dtw", "lcss", "hausdorff", "frechet", "twed")
_EMBEDDINGS = ("index", "value")


@dataclass(frozen=True)
class MetricParams:
    """Tunable constants of the distances.

    lcss_epsilon : float or None
        Match threshold. ``None`` means "relative": the interval engine uses
        ``lcss_epsilon_factor`` times the standard deviation of the actual
        values in each window.
    twed_nu : float
        TWED stiffness (weight of the time-index mismatch).
    twed_lambda : float
        TWED deletion penalty.
    embed : {"index", "value"}
        Point embedding for Hausdorff and Frechet.
    """

    lcss_epsilon: float | None = None
    lcss_epsilon_factor: float = 0.05
    twed_nu: float = 1e-3
    twed_lambda: float = 1.0
    embed: str = "index"

    def __post_init__(self):
        if self.lcss_epsilon is not None and not self.lcss_epsilon > 0:
            raise ConfigError(f"lcss_epsilon must be positive, got {self.lcss_epsilon!r}")
        if not self.lcss_epsilon_factor > 0:
            raise ConfigError(f"lcss_epsilon_factor must be positive, got {self.lcss_epsilon_factor!r}")
        if not (self.twed_nu >= 0 and self.twed_lambda >= 0):
            raise ConfigError("twed_nu and twed_lambda must be non-negative")
        if self.embed not in _EMBEDDINGS:
            raise ConfigError(f"embed must be one of {_EMBEDDINGS}, got {self.embed!r}")

    def as_dict(self):
        return asdict(self)


class LCSSResult(NamedTuple):
    length: int
    similarity: float

    @property
    def distance(self) -> float:
        return 1.0 - self.similarity


def _seq(x, name="x"):
    a = np.ascontiguousarray(x, dtype=np.float64)
    if a.ndim != 1:
        raise DataError(f"{name} must be one-dimensional, got shape {a.shape}")
    if a.size == 0:
        raise DataError(f"{name} is empty")
    if not np.all(np.isfinite(a)):
        raise DataError(f"{name} contains non-finite values")
    return a


def _embed_flag(embed):
    if embed not in _EMBEDDINGS:
        raise ConfigError(f"embed must be one of {_EMBEDDINGS}, got {embed!r}")
    return embed == "index"


@njit(cache=True, nogil=True)
def _dtw(x, y):
    n, m = x.size, y.size
    r = np.full((n + 1, m + 1), np.inf)
    r[0, 0] = 0.0
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            r[i, j] = abs(x[i - 1] - y[j - 1]) + min(r[i - 1, j], r[i, j - 1], r[i - 1, j - 1])
    return r[n, m]


@njit(cache=True, nogil=True)
def _lcss(x, y, eps):
    n, m = x.size, y.size
    M = np.zeros((n + 1, m + 1), dtype=np.int64)
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            if abs(x[i - 1] - y[j - 1]) <= eps:
                M[i, j] = M[i - 1, j - 1] + 1
            else:
                M[i, j] = max(M[i - 1, j], M[i, j - 1])
    return M[n, m]


@njit(cache=True, nogil=True)
def _point_dist(x, y, i, j, use_index):
    dv = x[i] - y[j]
    if use_index:
        dt = float(i - j)
        return math.sqrt(dt * dt + dv * dv)
    return abs(dv)


@njit(cache=True, nogil=True)
def _hausdorff(x, y, use_index):
    n, m = x.size, y.size
    row_min = np.full(n, np.inf)
    col_min = np.full(m, np.inf)
    for i in range(n):
        for j in range(m):
            d = _point_dist(x, y, i, j, use_index)
            if d < row_min[i]:
                row_min[i] = d
            if d < col_min[j]:
                col_min[j] = d
    return max(row_min.max(), col_min.max())


@njit(cache=True, nogil=True)
def _frechet(x, y, use_index):
    n, m = x.size, y.size
    c = np.empty((n, m))
    for i in range(n):
        for j in range(m):
            d = _point_dist(x, y, i, j, use_index)
            if i == 0 and j == 0:
                c[i, j] = d
            elif i == 0:
                c[i, j] = max(d, c[i, j - 1])
            elif j == 0:
                c[i, j] = max(d, c[i - 1, j])
            else:
                c[i, j] = max(d, min(c[i - 1, j], c[i, j - 1], c[i - 1, j - 1]))
    return c[n - 1, m - 1]


@njit(cache=True, nogil=True)
def _twed(x, y, nu, lam):
    n, m = x.size, y.size
    # index 0 is a virtual sample with value 0 at time 0
    xp = np.zeros(n + 1)
    yp = np.zeros(m + 1)
    xp[1:] = x
    yp[1:] = y
    D = np.full((n + 1, m + 1), np.inf)
    D[0, 0] = 0.0
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            match = (
                D[i - 1, j - 1]
                + abs(xp[i] - yp[j])
                + abs(xp[i - 1] - yp[j - 1])
                + 2.0 * nu * abs(i - j)
            )
            del_x = D[i - 1, j] + abs(xp[i] - xp[i - 1]) + nu + lam
            del_y = D[i, j - 1] + abs(yp[j] - yp[j - 1]) + nu + lam
            D[i, j] = min(match, del_x, del_y)
    return D[n, m]


def euclidean(x, y) -> float:
    """Pointwise L2 distance; both sequences must have the same length."""
    x, y = _seq(x, "x"), _seq(y, "y")
    if x.size != y.size:
        raise DataError(f"euclidean distance needs equal lengths, got {x.size} and {y.size}")
    return float(np.sqrt(np.sum((x - y) ** 2)))


def dtw(x, y) -> float:
    """Dynamic time warping with absolute-difference local cost.

    ``r(i, j) = |x_i - y_j| + min(r(i-1, j), r(i, j-1), r(i-1, j-1))`` and the
    result is ``r(n, m)``, in the same units as the inputs.

    Examples
    --------
    >>> dtw([1, 2, 3], [1, 2, 2, 3])
    0.0
    """
    return float(_dtw(_seq(x, "x"), _seq(y, "y")))


def lcss(x, y, epsilon: float) -> LCSSResult:
    """Longest common subsequence under the match rule ``|x_i - y_j| <= epsilon``.

    Returns the match count ``M(n, m)`` and ``similarity = M / min(n, m)``;
    ``result.distance`` is ``1 - similarity``.
    """
    x, y = _seq(x, "x"), _seq(y, "y")
    if not epsilon > 0:
        raise ConfigError(f"epsilon must be positive, got {epsilon!r}")
    length = int(_lcss(x, y, float(epsilon)))
    return LCSSResult(length, length / min(x.size, y.size))


def hausdorff(x, y, embed: str = "index") -> float:
    """Symmetric Hausdorff distance between the sequences' point sets."""
    return float(_hausdorff(_seq(x, "x"), _seq(y, "y"), _embed_flag(embed)))


def frechet_discrete(x, y, embed: str = "index") -> float:
    """Discrete Frechet distance (Eiter-Mannila recurrence).

    Examples
    --------
    >>> frechet_discrete([0, 0], [0, 4])
    4.0
    """
    return float(_frechet(_seq(x, "x"), _seq(y, "y"), _embed_flag(embed)))


def twed(x, y, nu: float = 1e-3, lam: float = 1.0) -> float:
    """Time warp edit distance with sample indices as time stamps.

    Match ``(i, j)`` costs ``|x_i - y_j| + |x_{i-1} - y_{j-1}| + 2 nu |i - j|``;
    deleting ``x_i`` costs ``|x_i - x_{i-1}| + nu + lam`` (likewise for ``y``).
    A virtual sample of value 0 at index 0 precedes both sequences, and the
    first edit is always a match.
    """
    if not (nu >= 0 and lam >= 0):
        raise ConfigError(f"nu and lam must be non-negative, got nu={nu!r}, lam={lam!r}")
    return float(_twed(_seq(x, "x"), _seq(y, "y"), float(nu), float(lam)))
