"""Bergman A^p norms, the Littlewood-Paley form and Bloch-type norms."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .analytic import AnalyticFunction, PowerKernel, TaylorPoly, evaluate, kernel_coefficients
from .errors import ConfigurationError, ContractError
from .profiles import (DECAY, DEFAULT_THRESHOLDS, GROWTH, ProfileThresholds,
                       classify_profile, ring_maxima)
from .quadrature import QuadratureRule, default_rule, integrate, sup_grid

LITTLE, BIG_ONLY, UNBOUNDED = "LITTLE", "BIG_ONLY", "UNBOUNDED"


def lp_integral(values, p: float, rule: QuadratureRule) -> float:
    """``int |v|^p dA`` for node values ``v``."""
    out = integrate(np.abs(values) ** p, rule).real
    return max(out, 0.0)


def ap_norm(f: AnalyticFunction, p: float, rule: QuadratureRule | None = None) -> float:
    """Bergman norm ``(int |f|^p dA)^(1/p)``.

    Uses the shared boundary-extrapolated graded rule when ``rule`` is None.

    Examples
    --------
    >>> from bergman_lab.analytic import monomial
    >>> round(ap_norm(monomial(1), 2), 6)
    0.707107
    """
    if not p > 0:
        raise ContractError("p must be positive")
    rule = rule or default_rule()
    return lp_integral(evaluate(f, rule.nodes), p, rule) ** (1.0 / p)


def a2_norm_coefficients(f: TaylorPoly) -> float:
    """Exact A^2 norm ``(sum |c_k|^2 / (k+1))^(1/2)`` of a polynomial."""
    k = np.arange(f.coeffs.size)
    return float(np.sqrt(np.sum(np.abs(f.coeffs) ** 2 / (k + 1))))


def a2_norm_series(f: AnalyticFunction, rel_tol: float = 1e-18,
                   max_terms: int = 2 ** 22) -> float:
    """A^2 norm from Taylor coefficients, ``(sum |c_k|^2 / (k+1))^(1/2)``.

    Exact for polynomials. For closed-form kernels the series is summed
    until the last term drops below ``rel_tol`` times the running sum.
    Boundary-centered kernels (``|w| = 1``) are rejected; use quadrature.
    """
    if isinstance(f, TaylorPoly):
        return a2_norm_coefficients(f)
    if not isinstance(f, PowerKernel):
        raise ContractError(f"unsupported function type {type(f).__name__}")
    if abs(f.w) >= 1.0:
        raise ContractError("series path needs |w| < 1")
    if f.w == 0:
        return a2_norm_coefficients(TaylorPoly(kernel_coefficients(f, f.i)))
    degree = 256
    while True:
        c = kernel_coefficients(f, degree)
        terms = np.abs(c) ** 2 / np.arange(1, c.size + 1)
        total = float(np.sum(terms))
        if terms[-1] <= rel_tol * total and terms[-1] <= terms[-2]:
            return float(np.sqrt(total))
        degree *= 2
        if degree > max_terms:
            raise ConfigurationError(f"A^2 series needs more than {max_terms} terms")


def littlewood_paley_norm(f: AnalyticFunction, p: float, n: int,
                          rule: QuadratureRule | None = None) -> float:
    """``sum_{i<n} |f^(i)(0)| + ||(1 - |z|^2)^n f^(n)||_p``.

    An equivalent norm on A^p for every ``n >= 1``.
    """
    if n < 1:
        raise ContractError("n must be at least 1")
    if not p > 0:
        raise ContractError("p must be positive")
    rule = rule or default_rule()
    head = sum(abs(evaluate(f, 0.0, i)) for i in range(n))
    weight = (1.0 - np.abs(rule.nodes) ** 2) ** n
    body = lp_integral(weight * evaluate(f, rule.nodes, n), p, rule) ** (1.0 / p)
    return float(head + body)


def pointwise_bound_ratio(f: AnalyticFunction, p: float, i: int, nodes,
                          norm: float | None = None) -> float:
    """``max |f^(i)(z)| (1 - |z|^2)^(i + 2/p) / ||f||_p`` over ``nodes``."""
    norm = ap_norm(f, p) if norm is None else norm
    nodes = np.asarray(nodes, dtype=complex)
    vals = np.abs(evaluate(f, nodes, i)) * (1.0 - np.abs(nodes) ** 2) ** (i + 2.0 / p)
    return float(np.max(vals) / norm)


@dataclass
class BlochReport:
    """Sampled Bloch-type norm with its boundary profile.

    Attributes
    ----------
    norm : float
        Sampled ``sup |f^(m)(z)| (1 - |z|^2)^alpha``.
    profile : list of float
        Per-ring maxima over rings ``1 - 2^-k``.
    verdict : str
        LITTLE, BIG_ONLY or UNBOUNDED.
    """

    norm: float
    profile: list
    verdict: str
    m: int
    alpha: float
    ring_gaps: list
    horizon: float
    classification: dict = field(default_factory=dict)
    thresholds: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "norm": self.norm, "profile": self.profile, "verdict": self.verdict,
            "m": self.m, "alpha": self.alpha, "ring_gaps": self.ring_gaps,
            "horizon": self.horizon, "classification": self.classification,
            "thresholds": self.thresholds,
        }


def bloch_norm(f: AnalyticFunction, m: int, alpha: float, grid=None,
               thresholds: ProfileThresholds = DEFAULT_THRESHOLDS) -> BlochReport:
    """Sampled Bloch-type norm ``sup |f^(m)(z)| (1 - |z|^2)^alpha``.

    Parameters
    ----------
    f : AnalyticFunction
    m : int
        Derivative order.
    alpha : float
        Weight exponent.
    grid : tuple, optional
        ``(nodes, ring, gaps)`` as returned by :func:`quadrature.sup_grid`.
        Truncated series are sampled only inside their trusted radius.
    thresholds : ProfileThresholds

    Returns
    -------
    BlochReport
    """
    if m < 0:
        raise ContractError("m must be non-negative")
    if not alpha >= 0:
        raise ContractError("alpha must be non-negative")
    horizon = 1.0
    if isinstance(f, TaylorPoly):
        horizon = f.trusted_radius()
    if grid is None:
        grid = sup_grid(max_radius=horizon)
    nodes, ring, gaps = grid
    keep = np.abs(nodes) <= horizon
    nodes, ring = nodes[keep], ring[keep]
    n_rings = int(ring.max()) + 1
    vals = np.abs(evaluate(f, nodes, m)) * (1.0 - np.abs(nodes) ** 2) ** alpha
    profile = ring_maxima(vals, ring, n_rings)
    gaps = np.asarray(gaps)[:n_rings]
    cls = classify_profile(profile, gaps, thresholds)
    verdict = {DECAY: LITTLE, GROWTH: UNBOUNDED}.get(cls["shape"], BIG_ONLY)
    return BlochReport(float(np.max(profile)), profile.tolist(), verdict, int(m),
                       float(alpha), gaps.tolist(), float(horizon), cls,
                       thresholds.to_dict())
