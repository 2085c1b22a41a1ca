"""Why filter the log-ratios: reported counts are only a proxy.

If surveillance catches one case in ten, every count is scaled by an
unknown constant K.  The reproduction number is a ratio, so an estimator
should not care.  Multiplying the counts by 10 leaves the DLM posterior
quantiles bit-identical, while the windowed Poisson-Gamma baseline's
coefficient of variation shrinks by about 1/sqrt(10): its uncertainty
answers to the absolute count level, not to the stability of transmission.
"""

import datetime as dt
import math

import numpy as np

import rtfilter as rt

rng = np.random.default_rng(99)
counts = np.maximum(np.round(120 * np.exp(np.cumsum(rng.normal(0, 0.06, 70)))), 30)
series = rt.IncidenceSeries(dt.date(2020, 6, 1), counts.astype(np.int64))
interval = rt.discretize(rt.DEFAULT_ERLANG, rt.DEFAULT_S_MAX)

K = 10
post = rt.run_filter(rt.compute_observations(series, interval))
post_k = rt.run_filter(rt.compute_observations(series.scaled(K), interval))

print(f"counts in [{counts.min():.0f}, {counts.max():.0f}], scaled by K={K}")
print("\nDLM quantiles, max |difference| between the two runs:")
for p in post.levels:
    diff = np.abs(post.quantile_series(p) - post_k.quantile_series(p)).max()
    print(f"  level {p:.2f}: {diff}")

cori = rt.run_cori(series, interval)
cori_k = rt.run_cori(series.scaled(K), interval)
cv = cori.cv_series()
cv_k = cori_k.cv_series()
ok = np.isfinite(cv) & np.isfinite(cv_k)
print("\nbaseline CV ratio after scaling (theory ~ 1/sqrt(K) for large windows):")
print(f"  observed: {np.nanmean(cv_k[ok] / cv[ok]):.4f}   1/sqrt(K) = {1 / math.sqrt(K):.4f}")
print("\nsame data, same transmission, ten times the reporting:")
print("  the filter's answer is unchanged; the baseline is ten times as confident.")
