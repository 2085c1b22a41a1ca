"""Regenerate synthetic_120d.csv (deterministic).

Thirty days of noisy exponential growth from ~40 cases/day, then ninety
days flat at 400: once the convolution window is all-constant the observed
case/infectiousness ratio is exactly one, which gives the tests a clean
constant-ratio segment.
"""

import datetime as dt
from pathlib import Path

import numpy as np

rng = np.random.default_rng(20200501)
ramp = np.round(
    40 * np.exp(0.08 * np.arange(1, 31)) * np.exp(rng.normal(0, 0.05, 30))
).astype(int)
counts = np.concatenate([ramp, np.full(90, 400)])
assert counts.min() >= 10 and len(counts) == 120

start = dt.date(2020, 5, 1)
lines = ["date,cases"]
for i, c in enumerate(counts):
    lines.append(f"{(start + dt.timedelta(days=i)).isoformat()},{c}")

out = Path(__file__).resolve().parent / "synthetic_120d.csv"
out.write_text("\n".join(lines) + "\n")
print(f"wrote {out} ({len(counts)} days)")
