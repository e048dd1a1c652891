"""
A tour of the sequence distances
================================

Six ways of saying how far apart two short series are. Each one sees a
different kind of mismatch, which is what later turns them into six
different interval widths.
"""

import numpy as np

from simintervals import dtw, euclidean, frechet_discrete, hausdorff, lcss, twed
from simintervals import oracles

# Two windows with the same shape, one lagging the other by a step.
a = np.array([0.0, 0.0, 1.0, 3.0, 1.0, 0.0])
b = np.array([0.0, 0.0, 0.0, 1.0, 3.0, 1.0])

print("euclidean ", euclidean(a, b))
print("dtw       ", dtw(a, b))

# %%
# Euclidean compares position by position, so the lag costs it a lot.
# DTW can stretch time and lines the peaks up; all that remains is the
# unmatched tail.
#
# LCSS counts matches within a tolerance instead of summing costs. Its
# similarity is the matched fraction of the shorter series.

r = lcss(a, b, epsilon=0.1)
print("lcss      ", r.length, "matches, similarity", r.similarity)

# %%
# Hausdorff and discrete Frechet treat each series as a set of planar points
# ``(i, x_i)``. Hausdorff ignores order; Frechet walks both curves forward
# and so is never smaller.

print("hausdorff ", hausdorff(a, b))
print("frechet   ", frechet_discrete(a, b))

# With embed="value" only the values are compared, as 1-D point sets.
print("hausdorff (values only)", hausdorff(a, b, embed="value"))

# %%
# TWED charges for edits: a match compares both the current and previous
# samples, a deletion pays the step it skips plus ``nu + lambda``. Raising
# ``lam`` makes deletions dearer.

for lam in (0.0, 1.0, 5.0):
    print(f"twed nu=0.001 lam={lam}:", twed(a, b, nu=1e-3, lam=lam))

# %%
# Every kernel is a dynamic program. The ``oracles`` module computes the same
# numbers by brute force, enumerating every warping path or edit script, which
# is a quick way to convince yourself on small inputs.

x, y = [1.0, 3.0, 2.0], [2.0, 2.0]
print("dtw  dp vs brute:", dtw(x, y), oracles.dtw_brute(x, y))
print("twed dp vs brute:", twed(x, y, 0.1, 1.0), oracles.twed_brute(x, y, 0.1, 1.0))
print("warping paths on a 3x2 grid:", len(oracles.warping_paths(3, 2)))

# %%
# DTW and LCSS distance are not metrics. One small counterexample each:

print("dtw  [0]->[1,1] =", dtw([0], [1, 1]), " but [0]->[1]->[1,1] =", dtw([0], [1]) + dtw([1], [1, 1]))
d = lambda u, v: lcss(u, v, 0.5).distance  # noqa: E731
print("lcss [0]->[1] =", d([0], [1]), " but via [0,1] =", d([0], [0, 1]) + d([0, 1], [1]))
