"""Brute-force reference implementations of the sequence distances.

Each oracle enumerates the object the distance is defined over (warping
paths, couplings, common subsequences, edit scripts, point pairs) and takes
the optimum directly, with no dynamic programming. They are exponential in
the sequence length and meant for lengths up to about 6.

Every function accepts a single pair of 1-D sequences or a batch: ``X`` of
shape ``(B, n)`` and ``Y`` of shape ``(B, m)``, returning shape ``(B,)``.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache

import numpy as np

__all__ = [
    "warping_paths",
    "edit_scripts",
    "euclidean_brute",
    "dtw_brute",
    "frechet_brute",
    "hausdorff_brute",
    "lcss_brute",
    "twed_brute",
]

_CHUNK = 2048


@lru_cache(maxsize=None)
def warping_paths(n: int, m: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    """All monotone, continuous paths from cell (0, 0) to (n-1, m-1)."""
    out = []

    def walk(path):
        i, j = path[-1]
        if (i, j) == (n - 1, m - 1):
            out.append(tuple(path))
            return
        for di, dj in ((1, 0), (0, 1), (1, 1)):
            if i + di < n and j + dj < m:
                path.append((i + di, j + dj))
                walk(path)
                path.pop()

    walk([(0, 0)])
    return tuple(out)


@lru_cache(maxsize=None)
def edit_scripts(n: int, m: int) -> tuple[tuple[tuple[str, int, int], ...], ...]:
    """All TWED edit scripts turning an n-sequence into an m-sequence.

    An edit is ``(op, i, j)`` with ``op`` in ``{"match", "del_x", "del_y"}``
    and ``(i, j)`` the 1-based position reached. The first edit is a match.
    """
    out = []

    def walk(i, j, script):
        if (i, j) == (n, m):
            out.append(tuple(script))
            return
        moves = (("match", 1, 1),) if not script else (("match", 1, 1), ("del_x", 1, 0), ("del_y", 0, 1))
        for op, di, dj in moves:
            if i + di <= n and j + dj <= m:
                script.append((op, i + di, j + dj))
                walk(i + di, j + dj, script)
                script.pop()

    walk(0, 0, [])
    return tuple(out)


def _batch(X, Y):
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    single = X.ndim == 1
    if single:
        X, Y = X[None, :], Y[None, :]
    if X.shape[0] != Y.shape[0]:
        raise ValueError("batches must have the same number of pairs")
    return X, Y, single


def _finish(result, single):
    return float(result[0]) if single else result


def _points(X, embed):
    # (B, n, 2) array of planar points
    idx = np.broadcast_to(np.arange(X.shape[1], dtype=float), X.shape)
    if embed == "value":
        idx = np.zeros_like(X)
    return np.stack([idx, X], axis=-1)


def _pair_dists(X, Y, embed):
    P, Q = _points(X, embed), _points(Y, embed)
    diff = P[:, :, None, :] - Q[:, None, :, :]
    return np.sqrt(np.sum(diff**2, axis=-1))


def _reduce_paths(cost, paths, combine, pad):
    """Evaluate every path over flattened per-cell costs, chunked over the batch."""
    B, n, m = cost.shape
    L = max(len(p) for p in paths)
    idx = np.full((len(paths), L), n * m, dtype=np.intp)
    for k, p in enumerate(paths):
        idx[k, : len(p)] = [i * m + j for i, j in p]
    flat = np.concatenate([cost.reshape(B, n * m), np.full((B, 1), pad)], axis=1)
    out = np.empty(B)
    for s in range(0, B, _CHUNK):
        per_path = combine(flat[s : s + _CHUNK][:, idx], axis=2)
        out[s : s + _CHUNK] = per_path.min(axis=1)
    return out


def euclidean_brute(x, y) -> float:
    """Term-by-term sum of squares."""
    return math.sqrt(sum((float(a) - float(b)) ** 2 for a, b in zip(x, y, strict=True)))


def dtw_brute(X, Y):
    """Minimum total ``|x_i - y_j|`` over all warping paths."""
    X, Y, single = _batch(X, Y)
    cost = np.abs(X[:, :, None] - Y[:, None, :])
    return _finish(_reduce_paths(cost, warping_paths(X.shape[1], Y.shape[1]), np.sum, 0.0), single)


def frechet_brute(X, Y, embed="index"):
    """Minimum over couplings of the longest leash."""
    X, Y, single = _batch(X, Y)
    cost = _pair_dists(X, Y, embed)
    return _finish(_reduce_paths(cost, warping_paths(X.shape[1], Y.shape[1]), np.max, 0.0), single)


def hausdorff_brute(X, Y, embed="index"):
    """Max of both directed sup-inf distances over all point pairs."""
    X, Y, single = _batch(X, Y)
    d = _pair_dists(X, Y, embed)
    return _finish(np.maximum(d.min(axis=2).max(axis=1), d.min(axis=1).max(axis=1)), single)


@lru_cache(maxsize=None)
def _subsequence_pairs(n, m):
    pairs = []
    for k in range(1, min(n, m) + 1):
        for I in itertools.combinations(range(n), k):
            for J in itertools.combinations(range(m), k):
                pairs.append(tuple(zip(I, J)))
    return tuple(pairs)


def lcss_brute(X, Y, epsilon):
    """Longest pair of index-increasing subsequences matching pointwise within epsilon."""
    X, Y, single = _batch(X, Y)
    B, n = X.shape
    m = Y.shape[1]
    match = np.abs(X[:, :, None] - Y[:, None, :]) <= epsilon
    best = np.zeros(B, dtype=np.int64)
    pairs = _subsequence_pairs(n, m)
    flat = np.concatenate([match.reshape(B, n * m), np.ones((B, 1), dtype=bool)], axis=1)
    L = min(n, m)
    idx = np.full((len(pairs), L), n * m, dtype=np.intp)
    lengths = np.empty(len(pairs), dtype=np.int64)
    for k, p in enumerate(pairs):
        idx[k, : len(p)] = [i * m + j for i, j in p]
        lengths[k] = len(p)
    for s in range(0, B, _CHUNK):
        ok = flat[s : s + _CHUNK][:, idx].all(axis=2)
        best[s : s + _CHUNK] = np.where(ok, lengths, 0).max(axis=1)
    return int(best[0]) if single else best


def twed_brute(X, Y, nu, lam):
    """Minimum total cost over all edit scripts."""
    X, Y, single = _batch(X, Y)
    B, n = X.shape
    m = Y.shape[1]
    Xp = np.concatenate([np.zeros((B, 1)), X], axis=1)
    Yp = np.concatenate([np.zeros((B, 1)), Y], axis=1)
    scripts = edit_scripts(n, m)
    out = np.full(B, np.inf)
    for script in scripts:
        total = np.zeros(B)
        # terms are added one at a time, left to right, so sums are bit-reproducible
        for op, i, j in script:
            if op == "match":
                total = total + np.abs(Xp[:, i] - Yp[:, j])
                total = total + np.abs(Xp[:, i - 1] - Yp[:, j - 1])
                total = total + 2.0 * nu * abs(i - j)
            else:
                Z, k = (Xp, i) if op == "del_x" else (Yp, j)
                total = total + np.abs(Z[:, k] - Z[:, k - 1])
                total = total + nu
                total = total + lam
        np.minimum(out, total, out=out)
    return _finish(out, single)
