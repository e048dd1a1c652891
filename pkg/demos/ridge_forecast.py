"""
Forecasting with lagged ridge regression
========================================

Build lag features from a target and a few related series, split in time,
pick the shrinkage by expanding-window cross-validation and score the
held-out forecast.
"""

import numpy as np

from simintervals import synth
from simintervals.series import TimeSeries, build_lag_dataset, chronological_split, fit_standardizer
from simintervals.ridge import DEFAULT_K_GRID, fit_ridge, score, select_k

# A synthetic AR(1) target and five noisy copies of it, on business days.
frame = synth.generate(length=600, seed=11)
dates = frame["date"].to_numpy("datetime64[D]")
series = [TimeSeries(c, dates, frame[c].to_numpy(float)) for c in frame.columns[1:]]
target, predictors = series[0], series[1:]
print(frame.head())

# %%
# Row t holds the previous three values of every series and the target at t.
# Nothing from time t or later leaks into the features.

ds = build_lag_dataset(target, predictors, max_lag=3)
print(ds.features.shape, ds.column_labels[:4])

train, test = chronological_split(ds, 0.8)
print("train rows", train.rows, "test rows", test.rows)

# %%
# Standardize with training statistics only, then search k.
# The score for each k is the mean MSE over expanding folds.

std = fit_standardizer(train.features)
Xtr, Xte = std.apply(train.features), std.apply(test.features)

best_k, table = select_k(Xtr, train.target, DEFAULT_K_GRID, n_folds=5)
print(table.to_string(index=False, float_format="%.5f"))
print("chosen k =", best_k)

# %%
# Larger k shrinks the coefficient vector. k = 0 is plain least squares.

for k in (0.0, best_k, 1e3):
    m = fit_ridge(Xtr, train.target, k)
    print(f"k={k:<10.4g} |beta| = {np.linalg.norm(m.coefficients):.4f}")

model = fit_ridge(Xtr, train.target, best_k)
print("test:", score(test.target, model.predict(Xte)).as_dict())
