"""Self-contained SVG fan charts: quantile bands, median line, observed points.

Rendering is plain string assembly with fixed numeric formatting, so the
same inputs always produce byte-identical files.  Bands are drawn from the
outermost quantile pair inward; when the number of levels is odd the middle
level is drawn as the median line.
"""

import datetime as dt
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

__all__ = ["FanGroup", "render_fanchart"]


@dataclass(frozen=True)
class FanGroup:
    """One estimator's quantile fan.

    ``quantiles`` has shape (n_days, n_levels) with NaN rows on days the
    estimator is not defined.
    """

    label: str
    levels: tuple
    quantiles: np.ndarray
    band_color: str = "#1f77b4"
    median_color: str = "#d62728"


def _nice_step(span: float, target: int = 6) -> float:
    raw = span / max(target, 1)
    mag = 10.0 ** np.floor(np.log10(raw))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        if mult * mag >= raw:
            return mult * mag
    return 10.0 * mag


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _runs(mask: np.ndarray):
    """Contiguous index runs where mask is True."""
    idx = np.flatnonzero(mask)
    if len(idx) == 0:
        return
    start = prev = idx[0]
    for i in idx[1:]:
        if i != prev + 1:
            yield range(start, prev + 1)
            start = i
        prev = i
    yield range(start, prev + 1)


def render_fanchart(
    dates: Sequence[dt.date],
    groups: Sequence[FanGroup],
    observed: Optional[np.ndarray] = None,
    title: str = "",
    width: int = 900,
    height: int = 380,
) -> str:
    """Render the chart and return the SVG document as a string."""
    n = len(dates)
    if n < 2:
        raise ValueError("need at least two days to draw a fan chart")
    ml, mr, mt, mb = 52.0, 14.0, 26.0, 42.0
    plot_w = width - ml - mr
    plot_h = height - mt - mb

    band_vals = [g.quantiles[np.isfinite(g.quantiles).all(axis=1)] for g in groups]
    band_vals = [v for v in band_vals if v.size]
    if not band_vals:
        raise ValueError("no finite quantiles to plot")
    hi = max(float(v.max()) for v in band_vals)
    lo = min(float(v.min()) for v in band_vals)
    if observed is not None:
        finite_obs = observed[np.isfinite(observed)]
        # Observed ratios can spike far above the fans; cap the axis so the
        # bands stay readable and drop markers that fall outside.
        if finite_obs.size:
            cap = 2.0 * hi
            hi = max(hi, float(min(finite_obs.max(), cap)))
            lo = min(lo, float(finite_obs.min()))
    hi = max(hi, 1.1) * 1.06
    lo = max(0.0, min(lo, 0.9) * 0.94)

    def x(i: int) -> float:
        return ml + plot_w * i / (n - 1)

    def y(v: float) -> float:
        return mt + plot_h * (hi - v) / (hi - lo)

    parts = []
    parts.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="10">'
    )
    parts.append(f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>')
    if title:
        parts.append(f'<text x="{_fmt(ml)}" y="16" font-size="12">{title}</text>')

    # y gridlines, ticks, labels
    step = _nice_step(hi - lo)
    tick = np.ceil(lo / step) * step
    while tick <= hi + 1e-9:
        yy = _fmt(y(tick))
        parts.append(
            f'<line class="grid" x1="{_fmt(ml)}" y1="{yy}" x2="{_fmt(ml + plot_w)}" y2="{yy}" '
            f'stroke="#dddddd" stroke-width="0.5"/>'
        )
        parts.append(f'<text x="{_fmt(ml - 6)}" y="{yy}" text-anchor="end" dy="3">{tick:g}</text>')
        tick += step

    # x ticks
    stride = max(1, int(np.ceil(n / 12)))
    for i in range(0, n, stride):
        xx = _fmt(x(i))
        parts.append(
            f'<line x1="{xx}" y1="{_fmt(mt + plot_h)}" x2="{xx}" y2="{_fmt(mt + plot_h + 4)}" '
            f'stroke="#555555" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{xx}" y="{_fmt(mt + plot_h + 16)}" text-anchor="middle">'
            f'{dates[i].strftime("%m-%d")}</text>'
        )

    # reference level R_t = 1
    if lo <= 1.0 <= hi:
        yy = _fmt(y(1.0))
        parts.append(
            f'<line class="reference" x1="{_fmt(ml)}" y1="{yy}" x2="{_fmt(ml + plot_w)}" y2="{yy}" '
            f'stroke="#2f2f2f" stroke-width="1" stroke-dasharray="4 3"/>'
        )

    for g in groups:
        q = np.asarray(g.quantiles, dtype=float)
        n_levels = q.shape[1]
        valid = np.isfinite(q).all(axis=1)
        # nested bands: outermost pair first
        for k in range(n_levels // 2):
            lo_col, hi_col = k, n_levels - 1 - k
            if lo_col >= hi_col:
                break
            for run in _runs(valid):
                if len(run) < 2:
                    continue
                top = " ".join(f"{_fmt(x(i))},{_fmt(y(q[i, hi_col]))}" for i in run)
                bot = " ".join(f"{_fmt(x(i))},{_fmt(y(q[i, lo_col]))}" for i in reversed(run))
                parts.append(
                    f'<polygon class="band {g.label}" points="{top} {bot}" '
                    f'fill="{g.band_color}" fill-opacity="0.25" stroke="none"/>'
                )
        if n_levels % 2 == 1:
            mid = n_levels // 2
            for run in _runs(valid):
                if len(run) < 2:
                    continue
                pts = " ".join(f"{_fmt(x(i))},{_fmt(y(q[i, mid]))}" for i in run)
                parts.append(
                    f'<polyline class="median {g.label}" points="{pts}" fill="none" '
                    f'stroke="{g.median_color}" stroke-width="1.5"/>'
                )

    if observed is not None:
        for i in range(n):
            v = observed[i]
            if np.isfinite(v) and lo <= v <= hi:
                parts.append(
                    f'<circle class="observed" cx="{_fmt(x(i))}" cy="{_fmt(y(v))}" r="2" '
                    f'fill="#7f7f7f"/>'
                )

    # axes on top
    parts.append(
        f'<line x1="{_fmt(ml)}" y1="{_fmt(mt)}" x2="{_fmt(ml)}" y2="{_fmt(mt + plot_h)}" '
        f'stroke="#000000" stroke-width="1"/>'
    )
    parts.append(
        f'<line x1="{_fmt(ml)}" y1="{_fmt(mt + plot_h)}" x2="{_fmt(ml + plot_w)}" '
        f'y2="{_fmt(mt + plot_h)}" stroke="#000000" stroke-width="1"/>'
    )
    parts.append(
        f'<text x="14" y="{_fmt(mt + plot_h / 2)}" transform="rotate(-90 14 {_fmt(mt + plot_h / 2)})" '
        f'text-anchor="middle">R_t</text>'
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
