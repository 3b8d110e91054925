"""Carleson and Sobolev-Carleson testers.

A measure is tested through the masses ``mu(D(a, r))`` of Bergman-metric
balls. For ``p <= q`` the statistic is the sup over lattice points of
``mu(D(a, r))^(1/q) / (1 - |a|^2)^(k + 2/p)`` and its boundary profile
decides between bounded, vanishing and diverging. For ``q < p`` it is the
``L^(p/(p-q))`` norm of ``mu(D(z, r)) / (1 - |z|^2)^(2 + kq)`` and the verdict
rests on stability of that integral as the outer cutoff moves toward the
boundary.

Measures with a density are integrated on balls by pulling a fixed local
rule back through the disk automorphism centered at ``a``; atom measures
are summed with a KD-tree on the Euclidean images of the balls.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np
from scipy.spatial import cKDTree

from .analytic import AnalyticFunction, TaylorPoly, evaluate, is_zero, kernel_derivatives
from .errors import ContractError, DomainError, RegimeError
from .geometry import BergmanLattice, disk_image
from .kernels import default_gamma, random_unit_coefficients
from .norms import ap_norm
from .profiles import (DECAY, DEFAULT_THRESHOLDS, GROWTH, ProfileThresholds,
                       classify_profile, point_profile)
from .quadrature import (QuadratureRule, build_graded_rule, gauss_legendre)

BOUNDED, VANISHING, DIVERGING = "BOUNDED", "VANISHING", "DIVERGING"
# relative change allowed between the two cutoffs of an integral statistic
STABILITY_TOL = 0.05
R_CUT_PAIR = (0.999, 0.9999)


@dataclass(frozen=True, eq=False)
class DiscreteMeasure:
    """Positive measure given by weighted atoms, optionally with a density.

    Attributes
    ----------
    points : ndarray of complex
        Atom locations (quadrature nodes for density measures).
    weights : ndarray of float
        Atom masses (density times quadrature weight for density measures).
    density : callable, optional
        ``z -> w(z)`` when the measure is ``w(z) dA``; ball masses and
        integrals then use local quadrature instead of the atoms.
    label : str
    """

    points: np.ndarray
    weights: np.ndarray
    density: Callable | None = None
    label: str = "measure"

    def __post_init__(self):
        pts = np.atleast_1d(np.asarray(self.points, dtype=complex))
        wts = np.atleast_1d(np.asarray(self.weights, dtype=float))
        if pts.shape != wts.shape:
            raise ContractError("measure needs one weight per atom")
        if np.any(~np.isfinite(wts)) or np.any(wts < 0):
            raise ContractError("measure weights must be finite and non-negative")
        if np.any(np.abs(pts) >= 1):
            raise DomainError("measure atoms must lie in the open disk")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", wts)

    @classmethod
    def from_density(cls, density: Callable, rule: QuadratureRule,
                     label: str = "density") -> "DiscreteMeasure":
        return cls(rule.nodes, density(rule.nodes) * rule.weights, density, label)

    @classmethod
    def weighted_area(cls, t: float, rule: QuadratureRule | None = None) -> "DiscreteMeasure":
        """``(1 - |z|^2)^t dA``."""
        rule = rule or _atom_rule()
        return cls.from_density(lambda z: (1.0 - np.abs(z) ** 2) ** t, rule,
                                f"(1-|z|^2)^{t:g} dA")

    @classmethod
    def point_mass(cls, z: complex = 0.0, weight: float = 1.0) -> "DiscreteMeasure":
        return cls(np.array([z]), np.array([weight]), None, f"{weight:g} delta_{z}")

    def scaled(self, factor: float) -> "DiscreteMeasure":
        dens = None if self.density is None else (lambda z, d=self.density: factor * d(z))
        return replace(self, weights=self.weights * factor, density=dens,
                       label=f"{factor:g} * {self.label}")

    def reweighted(self, func: AnalyticFunction, q: float) -> "DiscreteMeasure":
        """``|func|^q dmu``."""
        weights = self.weights * np.abs(evaluate(func, self.points)) ** q
        dens = None
        if self.density is not None:
            dens = lambda z, d=self.density: d(z) * np.abs(evaluate(func, z)) ** q
        return replace(self, weights=weights, density=dens, label=f"|u|^{q:g} {self.label}")

    @property
    def total_mass(self) -> float:
        return float(np.sum(self.weights))


def _atom_rule() -> QuadratureRule:
    return build_graded_rule(R_CUT_PAIR[1], radial_n=8, angular_factor=4,
                             angular_min=32, angular_cap=1024)


@dataclass(frozen=True)
class LocalRule:
    """Tensor rule on ``|zeta| < tanh(r)`` used for ball masses."""

    r: float
    zeta: np.ndarray
    weights: np.ndarray

    @classmethod
    def build(cls, r: float, radial_n: int = 24, angular_n: int = 96) -> "LocalRule":
        s = math.tanh(r)
        t, wt = gauss_legendre(radial_n, 0.0, s * s)
        theta = 2 * np.pi * (np.arange(angular_n) + 0.5) / angular_n
        zeta = (np.sqrt(t)[:, None] * np.exp(1j * theta)[None, :]).ravel()
        return cls(r, zeta, np.repeat(wt / angular_n, angular_n))


def pulled_back_nodes(a, zeta: np.ndarray, weights: np.ndarray):
    """Nodes ``phi_a(zeta)`` and weights times the Jacobian ``|phi_a'(zeta)|^2``."""
    a = np.asarray(a, dtype=complex)[..., None]
    den = 1.0 - np.conj(a) * zeta
    nodes = (a - zeta) / den
    jac = (1.0 - np.abs(a) ** 2) ** 2 / np.abs(den) ** 4
    return nodes, weights * jac


def ball_masses(mu: DiscreteMeasure, centers, r: float, local: LocalRule | None = None,
                chunk: int = 256) -> np.ndarray:
    """``mu(D(a, r))`` for every center ``a``."""
    centers = np.atleast_1d(np.asarray(centers, dtype=complex))
    if np.any(np.abs(centers) >= 1):
        raise DomainError("ball centers must lie in the open disk")
    out = np.empty(centers.size)
    if mu.density is not None:
        local = local if local is not None and local.r == r else LocalRule.build(r)
        for start in range(0, centers.size, chunk):
            block = centers[start:start + chunk]
            nodes, w = pulled_back_nodes(block, local.zeta, local.weights)
            out[start:start + block.size] = np.sum(mu.density(nodes) * w, axis=1)
        return out
    if mu.points.size == 0:
        return np.zeros(centers.size)
    tree = cKDTree(np.column_stack([mu.points.real, mu.points.imag]))
    img, rad = disk_image(centers, r)
    lists = tree.query_ball_point(np.column_stack([img.real, img.imag]), rad)
    for k, idx in enumerate(lists):
        out[k] = float(np.sum(mu.weights[idx])) if idx else 0.0
    return out


def statistic_at(mu: DiscreteMeasure, k: int, p: float, q: float, centers, r: float) -> np.ndarray:
    """``mu(D(a, r))^(1/q) / (1 - |a|^2)^(k + 2/p)`` at the given centers."""
    centers = np.atleast_1d(np.asarray(centers, dtype=complex))
    masses = ball_masses(mu, centers, r)
    return masses ** (1.0 / q) / (1.0 - np.abs(centers) ** 2) ** (k + 2.0 / p)


@dataclass
class CarlesonReport:
    """Outcome of a Carleson test.

    Attributes
    ----------
    statistic : float
        Sup statistic (``p <= q``) or integral statistic at the outer cutoff
        (``q < p``).
    profile : list of float
        Per-ring maxima (``p <= q``) or values per cutoff (``q < p``).
    verdict : str
        BOUNDED, VANISHING or DIVERGING.
    params : dict
        ``k``, ``p``, ``q``, ``r``, cutoffs, measure label.
    """

    statistic: float
    profile: list
    verdict: str
    params: dict
    ring_gaps: list = field(default_factory=list)
    classification: dict = field(default_factory=dict)
    thresholds: dict = field(default_factory=dict)
    per_point: list = field(default_factory=list)

    def to_dict(self, with_points: bool = False) -> dict:
        out = {"statistic": self.statistic, "profile": self.profile, "verdict": self.verdict,
               "params": self.params, "ring_gaps": self.ring_gaps,
               "classification": self.classification, "thresholds": self.thresholds}
        if with_points:
            out["per_point"] = self.per_point
        return out


def _shape_verdict(shape: str) -> str:
    return {DECAY: VANISHING, GROWTH: DIVERGING}.get(shape, BOUNDED)


def profile_report(values, points, params: dict,
                   thresholds: ProfileThresholds = DEFAULT_THRESHOLDS) -> CarlesonReport:
    """Classify per-lattice-point values into a report."""
    values = np.asarray(values, dtype=float)
    profile, gaps, _ = point_profile(values, points)
    cls = classify_profile(profile, gaps, thresholds)
    return CarlesonReport(float(np.max(values)) if values.size else 0.0, profile.tolist(),
                          _shape_verdict(cls["shape"]), params, gaps.tolist(), cls,
                          thresholds.to_dict(), values.tolist())


def carleson_statistic(mu: DiscreteMeasure, k: int, p: float, q: float,
                       lattice: BergmanLattice,
                       thresholds: ProfileThresholds = DEFAULT_THRESHOLDS) -> CarlesonReport:
    """Sup-type ``(k, p, q)``-Carleson statistic over a lattice.

    Raises
    ------
    RegimeError
        If ``p > q``; use :func:`carleson_integral_statistic`.
    """
    if p > q:
        raise RegimeError(f"p = {p} > q = {q}: use the integral statistic")
    _check_exponents(k, p, q)
    values = statistic_at(mu, k, p, q, lattice.points, lattice.r)
    params = {"k": k, "p": p, "q": q, "r": lattice.r, "r_max": lattice.r_max,
              "measure": mu.label, "lattice_points": int(len(lattice))}
    return profile_report(values, lattice.points, params, thresholds)


def _check_exponents(k: int, p: float, q: float) -> None:
    if k < 0 or int(k) != k:
        raise ContractError("k must be a non-negative integer")
    if not (p > 0 and q > 0):
        raise ContractError("p and q must be positive")


def integral_rule(r_cut: float) -> QuadratureRule:
    """Outer rule for integral statistics (one ball mass per node)."""
    return build_graded_rule(r_cut, radial_n=4, angular_factor=2, angular_min=16,
                             angular_cap=256)


def _stable(values: Sequence[float], tol: float) -> bool:
    a, b = values[-2], values[-1]
    if not (np.isfinite(a) and np.isfinite(b)):
        return False
    if b == 0:
        return a == 0
    return abs(b - a) <= tol * abs(b)


def carleson_integral_statistic(mu: DiscreteMeasure, k: int, p: float, q: float, r: float = 1.0,
                                r_cuts: Sequence[float] = R_CUT_PAIR,
                                stability_tol: float = STABILITY_TOL) -> CarlesonReport:
    """``L^(p/(p-q))`` norm of ``mu(D(z, r)) / (1 - |z|^2)^(2 + kq)``.

    Evaluated on ``|z| <= r_cut`` for each cutoff; BOUNDED when the last two
    values agree within ``stability_tol`` (relative), DIVERGING otherwise.
    Bounded and vanishing coincide in this regime.

    Raises
    ------
    RegimeError
        If ``q >= p``.
    """
    if q >= p:
        raise RegimeError(f"q = {q} >= p = {p}: use the sup statistic")
    _check_exponents(k, p, q)
    s = p / (p - q)
    values = []
    local = LocalRule.build(r) if mu.density is not None else None
    for r_cut in r_cuts:
        rule = integral_rule(r_cut)
        masses = ball_masses(mu, rule.nodes, r, local)
        h = masses / (1.0 - np.abs(rule.nodes) ** 2) ** (2 + k * q)
        values.append(float(np.sum(h ** s * rule.weights)) ** (1.0 / s))
    verdict = BOUNDED if _stable(values, stability_tol) else DIVERGING
    params = {"k": k, "p": p, "q": q, "r": r, "r_cuts": list(r_cuts), "exponent": s,
              "measure": mu.label}
    return CarlesonReport(values[-1], values, verdict, params,
                          thresholds={"stability_tol": stability_tol})


# ---------------------------------------------------------------------------
# Sobolev-Carleson comparison


def _local_full_rule() -> QuadratureRule:
    return build_graded_rule(R_CUT_PAIR[1], radial_n=6, angular_factor=2, angular_min=16,
                             angular_cap=256)


def sobolev_integral(mu: DiscreteMeasure, u: Sequence[AnalyticFunction], f: AnalyticFunction,
                     q: float, center: complex = 0j, rule: QuadratureRule | None = None) -> float:
    """``int |sum_j u_j f^(j)|^q dmu``.

    Density measures are integrated with a full-disk rule pulled back through
    the automorphism exchanging 0 and ``center`` (put ``center`` where ``f``
    concentrates); atom measures are summed directly.
    """
    if mu.density is None:
        nodes, w = mu.points, mu.weights
    else:
        rule = rule or _local_full_rule()
        nodes, w = pulled_back_nodes(center, rule.nodes, rule.weights)
        w = w * mu.density(nodes)
    total = np.zeros(nodes.shape, dtype=complex)
    for j, uj in enumerate(u):
        if is_zero(uj):
            continue
        total += evaluate(uj, nodes) * evaluate(f, nodes, j)
    return float(np.sum(np.abs(total) ** q * w))


def _tested_masses(mu: DiscreteMeasure, u: Sequence[AnalyticFunction], centers: np.ndarray,
                   gamma: float, p: float, q: float, block: int = 16) -> np.ndarray:
    """``max_i int |sum_j u_j (k_a^[i])^(j)|^q dmu`` for every center ``a``."""
    n = len(u) - 1
    active = [j for j, uj in enumerate(u) if not is_zero(uj)]
    out = np.zeros(centers.size)
    if not active:
        return out
    rule = _local_full_rule() if mu.density is not None else None
    if rule is None:
        nodes = mu.points[None, :]
        weights = mu.weights[None, :]
        u_vals = {j: evaluate(u[j], nodes) for j in active}
    for start in range(0, centers.size, block):
        a = centers[start:start + block][:, None]
        if rule is not None:
            nodes, weights = pulled_back_nodes(a[:, 0], rule.nodes, rule.weights)
            weights = weights * mu.density(nodes)
            u_vals = {j: evaluate(u[j], nodes) for j in active}
        best = np.zeros(a.shape[0])
        for i in range(n + 1):
            scale = (1.0 - np.abs(a) ** 2) ** (gamma + i - 2.0 / p)
            derivs = kernel_derivatives(a, i, gamma + i, nodes, active, scale)
            total = sum(u_vals[j] * d for j, d in zip(active, derivs))
            best = np.maximum(best, np.sum(np.abs(total) ** q * weights, axis=1))
        out[start:start + a.shape[0]] = best
    return out


def combine_verdicts(verdicts: Sequence[str]) -> str:
    """DIVERGING if any diverges, VANISHING if all vanish, else BOUNDED."""
    if any(v == DIVERGING for v in verdicts):
        return DIVERGING
    if all(v == VANISHING for v in verdicts):
        return VANISHING
    return BOUNDED


def _random_unit_polys(p: float, count: int, seed: int, degree: int = 8) -> list[TaylorPoly]:
    rng = np.random.default_rng(seed)
    out = []
    for c in random_unit_coefficients(rng, count, degree + 1):
        f = TaylorPoly(c)
        out.append(TaylorPoly(c / ap_norm(f, p)))
    return out


def sobolev_rigidity_check(mu: DiscreteMeasure, u: Sequence[AnalyticFunction], p: float, q: float,
                           lattice: BergmanLattice, test_family_size: int = 8, seed: int = 0,
                           gamma: float | None = None,
                           thresholds: ProfileThresholds = DEFAULT_THRESHOLDS,
                           stability_tol: float = STABILITY_TOL) -> dict:
    """Compare the combined Sobolev-Carleson statistic with its components.

    Combined side: for each lattice point ``a`` the tested mass
    ``T(a) = max_i int |sum_j u_j (k_a^[i])^(j)|^q dmu`` over normalized
    kernels ``i <= n``. For ``p <= q`` the statistic is ``sup T(a)^(1/q)``
    with the boundary-profile verdict; for ``q < p`` it is the lattice sum
    ``(sum_a T(a)^(p/(p-q)))^((p-q)/(pq))``, BOUNDED when the sum over
    ``|a| <= 1 - 10 (1 - r_max)`` and over the whole lattice agree within
    ``stability_tol``. Seeded random unit-norm polynomials are also tested
    and reported.

    Component side: the ``(j, p, q)``-Carleson verdict of ``|u_j|^q dmu`` for
    each ``j``, routed to the regime's statistic.

    Returns
    -------
    dict
        Combined and component statistics and verdicts, their ratio and the
        agreement flag.
    """
    n = len(u) - 1
    if n < 0:
        raise ContractError("at least one symbol u_0 is required")
    _check_exponents(0, p, q)
    gamma = gamma if gamma is not None else default_gamma(p)
    pts = lattice.points
    tested = _tested_masses(mu, u, pts, gamma, p, q)
    polys = _random_unit_polys(p, test_family_size, seed)
    poly_values = [sobolev_integral(mu, u, f, q) ** (1.0 / q) for f in polys]
    poly_max = max(poly_values) if poly_values else 0.0

    components = []
    for j, uj in enumerate(u):
        mu_j = mu.reweighted(uj, q)
        if p <= q:
            rep = carleson_statistic(mu_j, j, p, q, lattice, thresholds)
        else:
            rep = carleson_integral_statistic(mu_j, j, p, q, lattice.r,
                                              stability_tol=stability_tol)
        components.append({"j": j, "statistic": rep.statistic, "verdict": rep.verdict,
                           "profile": rep.profile})

    if p <= q:
        values = tested ** (1.0 / q)
        rep = profile_report(values, pts, {}, thresholds)
        combined_stat = max(rep.statistic, poly_max)
        combined = {"statistic": combined_stat, "kernel_sup": rep.statistic,
                    "profile": rep.profile, "ring_gaps": rep.ring_gaps,
                    "classification": rep.classification, "verdict": rep.verdict}
    else:
        s = p / (p - q)
        inner = np.abs(pts) <= 1.0 - 10.0 * (1.0 - lattice.r_max)
        partial = [float(np.sum(tested[inner] ** s)) ** (1.0 / (s * q)),
                   float(np.sum(tested ** s)) ** (1.0 / (s * q))]
        verdict = BOUNDED if _stable(partial, stability_tol) else DIVERGING
        combined = {"statistic": partial[-1], "partial_sums": partial, "verdict": verdict}
    combined["polynomial_max"] = poly_max
    comp_verdict = combine_verdicts([c["verdict"] for c in components])
    comp_stat = max(c["statistic"] for c in components)
    ratio = combined["statistic"] / comp_stat if comp_stat > 0 else (
        0.0 if combined["statistic"] == 0 else math.inf)
    return {
        "p": p, "q": q, "n": n, "gamma": gamma, "r": lattice.r, "r_max": lattice.r_max,
        "measure": mu.label, "test_family_size": test_family_size, "seed": seed,
        "combined": combined, "components": components,
        "component_verdict": comp_verdict, "ratio": ratio,
        "agree": combined["verdict"] == comp_verdict,
        "thresholds": {**thresholds.to_dict(), "stability_tol": stability_tol},
    }
