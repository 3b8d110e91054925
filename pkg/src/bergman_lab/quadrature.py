"""Quadrature on the unit disk for the normalized area measure dA = dx dy / pi.

In polar form dA = dt d(theta)/(2 pi) with t = r^2, so Gauss-Legendre in t
is exact on radial polynomials and the trapezoid rule in theta is exact on
trigonometric polynomials.

Two rule families are provided:

* :func:`build_disk_rule` -- a plain tensor rule on ``|z| <= r_cut``.
* :func:`build_graded_rule` -- a composite rule whose radial panels end at
  ``1 - 2^-m`` and whose angular resolution grows like ``2^m``, so that
  integrands concentrated at a boundary point (kernels ``K_w`` with ``|w|``
  near 1) are resolved.

:func:`with_boundary_tail` appends two circles of signed weights that
extrapolate the missing annulus ``r_cut < |z| < 1`` linearly in ``t``. An
extended rule is flagged ``extrapolated`` and is the one used for full-disk
norms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import ConfigurationError, ContractError

DEFAULT_R_CUT = 0.9999
# companion radius of the extrapolation pair: 1 - 10 (1 - r_cut)
TAIL_RATIO = 10.0
MAX_NODES = 20_000_000


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Nodes and weights for integration against dA.

    Attributes
    ----------
    nodes : ndarray of complex
    weights : ndarray of float
        Positive unless ``extrapolated`` is set (tail circles carry signed
        weights).
    r_cut : float
        Outer radius of the covered region before extrapolation.
    exactness_degree : int
        ``z^a conj(z)^b`` is integrated exactly over ``|z| <= r_cut`` for
        ``a + b`` up to this degree.
    grading : dict
        Descriptor of the construction (panel edges, angular counts, ...).
    extrapolated : bool
        True when the rule includes the boundary tail.
    """

    nodes: np.ndarray
    weights: np.ndarray
    r_cut: float
    exactness_degree: int
    grading: dict = field(default_factory=dict)
    extrapolated: bool = False

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=complex)
        weights = np.asarray(self.weights, dtype=float)
        if nodes.shape != weights.shape or nodes.ndim != 1:
            raise ContractError("nodes and weights must be 1-d arrays of equal length")
        if np.any(np.abs(nodes) >= 1.0):
            raise ContractError("quadrature nodes must lie strictly inside the disk")
        if not self.extrapolated and np.any(weights <= 0):
            raise ContractError("quadrature weights must be positive")
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    @property
    def size(self) -> int:
        return self.nodes.size

    def describe(self) -> dict:
        """Report-friendly summary of the rule."""
        return {
            "r_cut": self.r_cut,
            "nodes": int(self.size),
            "exactness_degree": int(self.exactness_degree),
            "extrapolated": bool(self.extrapolated),
            **{k: v for k, v in self.grading.items() if k != "edges"},
        }


def gauss_legendre(n: int, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on ``[a, b]``."""
    x, w = np.polynomial.legendre.leggauss(n)
    half = 0.5 * (b - a)
    return half * x + 0.5 * (a + b), half * w


def _ring(t: np.ndarray, wt: np.ndarray, n_ang: int, offset: float = 0.0):
    theta = 2 * np.pi * (np.arange(n_ang) + offset) / n_ang
    e = np.exp(1j * theta)
    nodes = (np.sqrt(t)[:, None] * e[None, :]).ravel()
    weights = np.repeat(wt / n_ang, n_ang)
    return nodes, weights


def build_disk_rule(radial_n: int, angular_n: int, r_cut: float) -> QuadratureRule:
    """Tensor rule on ``|z| <= r_cut``.

    Gauss-Legendre with ``radial_n`` nodes in ``t = r^2`` on ``[0, r_cut^2]``
    times an ``angular_n``-point trapezoid rule in theta.

    Examples
    --------
    >>> rule = build_disk_rule(4, 8, 0.5)
    >>> round(float(integrate(np.ones(rule.size), rule).real), 12)
    0.25
    """
    if radial_n < 1 or angular_n < 1:
        raise ContractError("radial_n and angular_n must be at least 1")
    if not 0.0 < r_cut < 1.0:
        raise ContractError("r_cut must lie in (0, 1)")
    if radial_n * angular_n > MAX_NODES:
        raise ConfigurationError("node budget exceeded")
    t, wt = gauss_legendre(radial_n, 0.0, r_cut * r_cut)
    nodes, weights = _ring(t, wt, angular_n)
    return QuadratureRule(
        nodes, weights, r_cut, min(2 * radial_n - 1, angular_n - 1),
        {"kind": "tensor", "radial_n": radial_n, "angular_n": angular_n})


def graded_edges(r_cut: float, origin_levels: int = 6) -> list[float]:
    """Radial panel edges: dyadic toward the origin, ``1 - 2^-m`` outward."""
    edges = [0.0] + [2.0 ** -j for j in range(origin_levels, 0, -1)]
    m = 2
    while 1.0 - 2.0 ** -m < r_cut:
        edges.append(1.0 - 2.0 ** -m)
        m += 1
    if r_cut > edges[-1]:
        edges.append(r_cut)
    return edges


def build_graded_rule(r_cut: float = DEFAULT_R_CUT, radial_n: int = 10,
                      angular_factor: int = 8, angular_min: int = 64,
                      angular_cap: int = 4096, origin_levels: int = 6) -> QuadratureRule:
    """Boundary-graded composite rule on ``|z| <= r_cut``.

    Parameters
    ----------
    r_cut : float
        Outer radius.
    radial_n : int
        Gauss-Legendre nodes (in ``t``) per radial panel.
    angular_factor, angular_min, angular_cap : int
        The panel ending at ``b`` gets ``angular_factor * 2^m`` trapezoid
        points, ``m = ceil(-log2(1 - b))``, clipped to
        ``[angular_min, angular_cap]``.
    origin_levels : int
        Number of dyadic panels refining toward the origin.

    Returns
    -------
    QuadratureRule
        Declared exactness ``min(2 radial_n - 1, angular_min - 1)``.
    """
    if not 0.0 < r_cut < 1.0:
        raise ContractError("r_cut must lie in (0, 1)")
    if radial_n < 1 or angular_min < 1 or angular_cap < angular_min:
        raise ContractError("invalid graded-rule parameters")
    edges = graded_edges(r_cut, origin_levels)
    counts = []
    for b in edges[1:]:
        m = math.ceil(-math.log2(1.0 - b)) if b < 1 else 0
        counts.append(int(min(max(angular_factor * 2 ** m, angular_min), angular_cap)))
    total = radial_n * sum(counts)
    if total > MAX_NODES:
        raise ConfigurationError(f"graded rule would need {total} nodes (> {MAX_NODES})")
    all_nodes, all_weights = [], []
    for (a, b), n_ang in zip(zip(edges[:-1], edges[1:]), counts):
        t, wt = gauss_legendre(radial_n, a * a, b * b)
        # half-step stagger keeps nodes off the real axis, where test
        # symbols put their boundary singularity
        nodes, weights = _ring(t, wt, n_ang, offset=0.5)
        all_nodes.append(nodes)
        all_weights.append(weights)
    return QuadratureRule(
        np.concatenate(all_nodes), np.concatenate(all_weights), r_cut,
        min(2 * radial_n - 1, angular_min - 1),
        {"kind": "graded", "radial_n": radial_n, "angular_factor": angular_factor,
         "angular_min": angular_min, "angular_cap": angular_cap,
         "panels": len(counts), "edges": edges, "outer_angular": counts[-1]})


def tail_radius(r_cut: float) -> float:
    """Companion radius ``1 - 10 (1 - r_cut)`` of the extrapolation pair."""
    return 1.0 - TAIL_RATIO * (1.0 - r_cut)


def with_boundary_tail(rule: QuadratureRule, angular_n: int | None = None) -> QuadratureRule:
    """Append the linear-in-``t`` extrapolation of the annulus ``r_cut < |z| < 1``.

    With ``g(t)`` the circle mean of the integrand at ``|z|^2 = t``,
    ``g1 = g(T1)`` at the companion radius and ``g2 = g(T2)`` at ``r_cut``,
    the missing mass is approximated by
    ``g2 d + (g2 - g1) / (T2 - T1) * d^2 / 2`` with ``d = 1 - T2``.
    The circle means use ``angular_n`` equispaced points (by default the
    angular count of the outermost panel).
    """
    if rule.extrapolated:
        return rule
    n_ang = angular_n or int(rule.grading.get("outer_angular",
                                              rule.grading.get("angular_n", 4096)))
    r2 = rule.r_cut
    r1 = tail_radius(r2)
    if r1 <= 0:
        raise ContractError("r_cut too small for boundary extrapolation")
    t1, t2 = r1 * r1, r2 * r2
    d = 1.0 - t2
    slope = d * d / (2.0 * (t2 - t1))
    theta = 2 * np.pi * (np.arange(n_ang) + 0.5) / n_ang
    e = np.exp(1j * theta)
    nodes = np.concatenate([rule.nodes, r2 * e, r1 * e])
    weights = np.concatenate([
        rule.weights,
        np.full(n_ang, (d + slope) / n_ang),
        np.full(n_ang, -slope / n_ang),
    ])
    grading = dict(rule.grading)
    grading.update({"tail_radii": [r1, r2], "tail_angular": n_ang})
    return QuadratureRule(nodes, weights, rule.r_cut, rule.exactness_degree, grading,
                          extrapolated=True)


def integrate(values, rule: QuadratureRule) -> complex:
    """Weighted sum of node values.

    The reduction is an elementwise product followed by ``np.sum`` (pairwise
    summation, fixed order), so results are reproducible bit for bit.

    Raises
    ------
    ContractError
        If the number of values differs from the number of nodes.
    """
    v = np.asarray(values)
    if v.shape != rule.weights.shape:
        raise ContractError(f"got {v.size} values for {rule.size} nodes")
    return complex(np.sum(v * rule.weights))


@lru_cache(maxsize=8)
def default_rule(r_cut: float = DEFAULT_R_CUT, extrapolate: bool = True) -> QuadratureRule:
    """Shared boundary-graded rule used by norms when none is given."""
    rule = build_graded_rule(r_cut)
    return with_boundary_tail(rule) if extrapolate else rule


@lru_cache(maxsize=4)
def fine_rule(r_cut: float = DEFAULT_R_CUT) -> QuadratureRule:
    """Graded rule with finer angular resolution near the boundary.

    Used where kernel peaks with ``1 - |w|`` down to about ``2^-9`` must be
    resolved.
    """
    return with_boundary_tail(build_graded_rule(r_cut, radial_n=10, angular_cap=8192))


def sup_grid(levels: int = 14, radii_per_ring: int = 12, angular_factor: int = 16,
             angular_min: int = 64, angular_cap: int = 2 ** 16,
             max_radius: float = 1.0) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Sampling set for sup-type statistics.

    Ring ``m`` (``m = 0 .. levels``) covers ``1 - 2^-m <= |z| < 1 - 2^-(m+1)``
    (ring 0 is ``|z| < 1/2``) with ``radii_per_ring`` equispaced radii and
    ``angular_factor * 2^m`` angles (clipped).

    Returns
    -------
    nodes : ndarray of complex
    ring : ndarray of int
        Ring index of each node.
    gaps : ndarray of float
        ``2^-m`` for each ring ``m``; the boundary distance scale of the ring.
    """
    nodes, ring, gaps = [], [], []
    for m in range(levels + 1):
        lo = 0.0 if m == 0 else 1.0 - 2.0 ** -m
        hi = 1.0 - 2.0 ** -(m + 1)
        if lo >= max_radius:
            break
        hi = min(hi, max_radius)
        radii = lo + (hi - lo) * (np.arange(radii_per_ring) + 0.5) / radii_per_ring
        n_ang = int(min(max(angular_factor * 2 ** m, angular_min), angular_cap))
        theta = 2 * np.pi * np.arange(n_ang) / n_ang
        pts = (radii[:, None] * np.exp(1j * theta)[None, :]).ravel()
        nodes.append(pts)
        ring.append(np.full(pts.size, m))
        gaps.append(2.0 ** -m)
    return np.concatenate(nodes), np.concatenate(ring), np.array(gaps)
