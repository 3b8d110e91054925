"""Boundary-profile classification.

Limits as ``|z| -> 1`` cannot be evaluated numerically. They are replaced
by a rule on the per-ring maxima of a statistic over dyadic rings
``1 - 2^-m``:

* decay -- the last two rings are below ``decay_fraction`` of the global
  maximum, or the log-log slope of the tail against the boundary distance
  ``2^-m`` is above ``slope_tol`` (the profile shrinks like a positive
  power of ``1 - |z|``);
* growth -- the tail slope is below ``-slope_tol`` (the profile grows like
  a negative power of ``1 - |z|``);
* plateau -- anything else.

Thresholds travel with every report.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

DECAY, PLATEAU, GROWTH = "decay", "plateau", "growth"


@dataclass(frozen=True)
class ProfileThresholds:
    """Parameters of the boundary-profile rule.

    Attributes
    ----------
    decay_fraction : float
        Tail-to-sup ratio below which the profile counts as vanishing.
    slope_tol : float
        Minimum log-log slope magnitude counted as power-law decay or growth.
    tail_rings : int
        Number of outermost rings used for the slope fit.
    """

    decay_fraction: float = 0.05
    slope_tol: float = 0.1
    tail_rings: int = 4

    def to_dict(self) -> dict:
        return asdict(self)


DEFAULT_THRESHOLDS = ProfileThresholds()


def tail_slope(profile, gaps, tail_rings: int) -> float:
    """Least-squares slope of ``log profile`` against ``log gap`` on the tail."""
    y = np.asarray(profile, dtype=float)[-tail_rings:]
    x = np.asarray(gaps, dtype=float)[-tail_rings:]
    if y.size < 2 or np.any(y <= 0):
        return float("nan")
    lx, ly = np.log(x), np.log(y)
    lx = lx - lx.mean()
    return float(np.sum(lx * (ly - ly.mean())) / np.sum(lx * lx))


def classify_profile(profile, gaps, thresholds: ProfileThresholds = DEFAULT_THRESHOLDS) -> dict:
    """Classify a boundary profile as decay, plateau or growth.

    Parameters
    ----------
    profile : array_like
        Per-ring maxima, innermost ring first.
    gaps : array_like
        Boundary distance scale (``2^-m``) of each ring.

    Returns
    -------
    dict
        ``shape`` plus the quantities the decision used.
    """
    y = np.asarray(profile, dtype=float)
    sup = float(np.max(y)) if y.size else 0.0
    if sup <= 0:
        return {"shape": DECAY, "sup": 0.0, "tail_fraction": 0.0, "slope": float("nan")}
    tail_fraction = float(np.max(y[-2:]) / sup)
    slope = tail_slope(y, gaps, thresholds.tail_rings)
    if tail_fraction < thresholds.decay_fraction:
        shape = DECAY
    elif np.isnan(slope):
        # zeros in the tail: the profile vanishes there
        shape = DECAY
    elif slope > thresholds.slope_tol:
        shape = DECAY
    elif slope < -thresholds.slope_tol:
        shape = GROWTH
    else:
        shape = PLATEAU
    return {"shape": shape, "sup": sup, "tail_fraction": tail_fraction, "slope": slope}


def ring_maxima(values, ring, n_rings: int | None = None) -> np.ndarray:
    """Maximum of ``values`` over each ring index ``0 .. n_rings - 1``.

    Empty rings get 0.
    """
    values = np.asarray(values, dtype=float)
    ring = np.asarray(ring, dtype=int)
    n = int(ring.max()) + 1 if n_rings is None else n_rings
    out = np.zeros(n)
    np.maximum.at(out, ring, values)
    return out


def point_profile(values, points) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-ring maxima of values attached to scattered disk points.

    Points are grouped by dyadic ring ``floor(-log2(1 - |a|))``; rings with
    no points are dropped (a coarse lattice skips some rings). The gap of a
    ring is ``1 - |a|`` at the point attaining the maximum.

    Returns
    -------
    profile, gaps, rings : ndarray
    """
    values = np.asarray(values, dtype=float)
    points = np.asarray(points, dtype=complex)
    gap = 1.0 - np.abs(points)
    ring = np.floor(-np.log2(gap) + 1e-12).astype(int)
    rings = np.unique(ring)
    profile = np.empty(rings.size)
    gaps = np.empty(rings.size)
    for k, m in enumerate(rings):
        idx = np.flatnonzero(ring == m)
        best = idx[np.argmax(values[idx])]
        profile[k] = values[best]
        gaps[k] = gap[best]
    return profile, gaps, rings
