"""Generalized Volterra operators and sums of weighted composition-differentiation
operators.

* ``I_g^(n) f = I^n(g_0 f + g_1 f' + ... + g_{n-1} f^(n-1))`` acts on series.
* ``L f = sum_k u_k * (f^(k) o phi)`` acts pointwise on nodes.

Symbol criteria decide boundedness and compactness between Bergman spaces;
empirical witness norms corroborate them (they are lower bounds only).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .analytic import (DEFAULT_DEGREE, MAX_DEGREE, AnalyticFunction, PowerKernel, SelfMap,
                       TaylorPoly, as_taylor, coefficient_inner_product, evaluate,
                       integrate_n, is_zero, poly_add, poly_mul, poly_scale, truncate)
from .carleson import (BOUNDED, DIVERGING, VANISHING, DiscreteMeasure,
                       carleson_integral_statistic, carleson_statistic, combine_verdicts)
from .errors import ContractError, OutOfScopeError, RegimeError
from .geometry import BergmanLattice
from .kernels import default_gamma, normalized_kernel, random_unit_coefficients, reproducing_kernel
from .norms import BIG_ONLY, LITTLE, UNBOUNDED, bloch_norm, lp_integral
from .profiles import (DECAY, DEFAULT_THRESHOLDS, GROWTH, ProfileThresholds,
                       classify_profile)
from .quadrature import (QuadratureRule, build_disk_rule, build_graded_rule, fine_rule,
                         integrate, with_boundary_tail)

COMPACT, MUST_BE_ZERO, FAIL = "COMPACT", "MUST_BE_ZERO", "FAIL"
R_CUT_PAIR = (0.999, 0.9999)
STABILITY_TOL = 0.05


# ---------------------------------------------------------------------------
# specs


@dataclass(frozen=True, eq=False)
class VolterraSpec:
    """Symbols of ``I_g^(n)``.

    Attributes
    ----------
    n : int
    g : tuple of AnalyticFunction
        ``g_0 .. g_{n-1}``.
    single_symbol : tuple, optional
        ``(g, a)`` when built by :meth:`from_single_symbol`.
    """

    n: int
    g: tuple
    single_symbol: tuple | None = None

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ContractError("n must be a positive integer")
        g = tuple(self.g)
        if len(g) != self.n:
            raise ContractError(f"expected {self.n} symbols, got {len(g)}")
        object.__setattr__(self, "g", g)

    @classmethod
    def from_single_symbol(cls, g: AnalyticFunction, a: Sequence[complex]) -> "VolterraSpec":
        """Expand ``g_j = a_j g^(n-j)`` for ``j < n = len(a)``."""
        n = len(a)
        if n < 1:
            raise ContractError("need at least one coefficient a_j")
        symbols = []
        for j, aj in enumerate(a):
            d = g.derivative(n - j)
            symbols.append(d.scaled(aj) if isinstance(d, PowerKernel) else poly_scale(d, aj))
        return cls(n, tuple(symbols), (g, tuple(complex(x) for x in a)))


@dataclass(frozen=True, eq=False)
class CompositionSumSpec:
    """Symbols of ``L = sum_{k<=n} u_k (f^(k) o phi)``."""

    n: int
    u: tuple
    phi: SelfMap

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 0:
            raise ContractError("n must be a non-negative integer")
        u = tuple(self.u)
        if len(u) != self.n + 1:
            raise ContractError(f"expected {self.n + 1} symbols, got {len(u)}")
        object.__setattr__(self, "u", u)


# ---------------------------------------------------------------------------
# application


def apply_volterra(spec: VolterraSpec, f: AnalyticFunction, degree: int = DEFAULT_DEGREE,
                   max_degree: int = MAX_DEGREE) -> TaylorPoly:
    """``I^n (sum_k g_k f^(k))`` as a Taylor polynomial.

    Products are cut at ``degree`` before the ``n`` integrations.
    """
    ft = as_taylor(f, degree)
    terms = []
    for k, gk in enumerate(spec.g):
        if is_zero(gk):
            continue
        terms.append(poly_mul(as_taylor(gk, degree), ft.derivative(k), degree))
    if not terms:
        return TaylorPoly(np.zeros(1))
    return integrate_n(poly_add(*terms), spec.n, degree, max_degree)


def volterra_integrand(spec: VolterraSpec, values: Sequence[np.ndarray], nodes) -> np.ndarray:
    """``sum_k g_k f^(k)`` at nodes, given ``values[k] = f^(k)(nodes)``."""
    nodes = np.asarray(nodes, dtype=complex)
    out = np.zeros(nodes.shape, dtype=complex)
    for k, gk in enumerate(spec.g):
        if not is_zero(gk):
            out += evaluate(gk, nodes) * values[k]
    return out


def apply_comp_sum(spec: CompositionSumSpec, f: AnalyticFunction, nodes) -> np.ndarray:
    """``sum_k u_k(z) f^(k)(phi(z))`` at the nodes.

    Raises
    ------
    DomainError
        If ``phi`` leaves the disk at a node.
    """
    nodes = np.asarray(nodes, dtype=complex)
    image = spec.phi(nodes)
    return _comp_sum_values(spec, nodes, [evaluate(f, image, k) for k in range(spec.n + 1)])


def _comp_sum_values(spec: CompositionSumSpec, nodes, derivs) -> np.ndarray:
    out = np.zeros(np.shape(nodes), dtype=complex)
    for k, uk in enumerate(spec.u):
        if not is_zero(uk):
            out += evaluate(uk, nodes) * derivs[k]
    return out


# ---------------------------------------------------------------------------
# symbol criteria


def _bloch_status(verdict: str) -> str:
    return {LITTLE: COMPACT, BIG_ONLY: BOUNDED, UNBOUNDED: FAIL}[verdict]


def _overall(statuses: Sequence[str]) -> str:
    if any(s == FAIL for s in statuses):
        return FAIL
    if all(s in (COMPACT, MUST_BE_ZERO) for s in statuses):
        return COMPACT
    return BOUNDED


def volterra_bloch_criterion(spec: VolterraSpec, p: float, q: float,
                             thresholds: ProfileThresholds = DEFAULT_THRESHOLDS,
                             tol: float = 1e-12) -> dict:
    """Boundedness and compactness of ``I_g^(n): A^p -> A^q`` for ``p <= q``.

    With ``d = 2/p - 2/q``: symbols with ``n - k < d`` must vanish; the
    others must lie in the Bloch-type space of weight ``n - k - d``.
    Compactness needs the little-space version, and ``g_k = 0`` also when
    ``n - k = d``.

    Returns
    -------
    dict
        ``symbols`` (one entry per ``k``) and the overall ``verdict``
        (COMPACT, BOUNDED or FAIL).
    """
    if p > q:
        raise RegimeError(f"p = {p} > q = {q}: use the integral criterion")
    d = 2.0 / p - 2.0 / q
    rows = []
    for k, gk in enumerate(spec.g):
        alpha = spec.n - k - d
        row = {"k": k, "alpha": alpha}
        zero = is_zero(gk)
        if alpha < -tol:
            row["status"] = MUST_BE_ZERO if zero else FAIL
            row["rule"] = "n-k < 2/p-2/q forces g_k = 0"
        elif abs(alpha) <= tol:
            if zero:
                row["status"] = MUST_BE_ZERO
            else:
                rep = bloch_norm(gk, 0, 0.0, thresholds=thresholds)
                row["bloch"] = rep.to_dict()
                row["status"] = FAIL if rep.verdict == UNBOUNDED else BOUNDED
            row["rule"] = "n-k = 2/p-2/q: bounded needs g_k bounded, compact needs g_k = 0"
        elif zero:
            row["status"] = COMPACT
        else:
            rep = bloch_norm(gk, 0, alpha, thresholds=thresholds)
            row["bloch"] = rep.to_dict()
            row["status"] = _bloch_status(rep.verdict)
        rows.append(row)
    statuses = [r["status"] for r in rows]
    return {"regime": "p<=q", "p": p, "q": q, "n": spec.n, "symbols": rows,
            "verdict": _overall(statuses), "thresholds": thresholds.to_dict()}


def criterion_rule(r_cut: float) -> QuadratureRule:
    """Graded rule fine enough near the boundary for singular symbols."""
    return build_graded_rule(r_cut, radial_n=8, angular_factor=8, angular_cap=2 ** 16)


def stable_integral(values_fn, r_cuts: Sequence[float] = R_CUT_PAIR,
                    stability_tol: float = STABILITY_TOL) -> dict:
    """Integrate ``values_fn(nodes)`` at each cutoff and test stability."""
    vals = []
    for r_cut in r_cuts:
        rule = criterion_rule(r_cut)
        vals.append(float(integrate(values_fn(rule.nodes), rule).real))
    a, b = vals[-2], vals[-1]
    stable = bool(np.isfinite(b) and (abs(b - a) <= stability_tol * abs(b) if b else a == 0))
    return {"values": vals, "r_cuts": list(r_cuts), "value": vals[-1], "stable": stable}


def volterra_integral_criterion(spec: VolterraSpec, p: float, q: float,
                                r_cuts: Sequence[float] = R_CUT_PAIR,
                                stability_tol: float = STABILITY_TOL) -> dict:
    """Boundedness (equivalently compactness) of ``I_g^(n)`` for ``q < p``.

    Each ``int |g_k (1 - |z|^2)^(n-k)|^(pq/(p-q)) dA`` must be finite; finiteness
    is read as stability of the truncated integral between the cutoffs. For a
    single-symbol spec the membership ``g in A^(pq/(p-q))`` is reported too.
    """
    if q >= p:
        raise RegimeError(f"q = {q} >= p = {p}: use the Bloch criterion")
    s = p * q / (p - q)
    rows = []
    for k, gk in enumerate(spec.g):
        row = {"k": k, "exponent": s}
        if is_zero(gk):
            row.update({"value": 0.0, "stable": True, "status": COMPACT})
        else:
            w = spec.n - k
            res = stable_integral(
                lambda z, gk=gk, w=w: np.abs(evaluate(gk, z) * (1.0 - np.abs(z) ** 2) ** w) ** s,
                r_cuts, stability_tol)
            row.update(res)
            row["status"] = COMPACT if res["stable"] else FAIL
        rows.append(row)
    out = {"regime": "q<p", "p": p, "q": q, "n": spec.n, "exponent": s, "symbols": rows,
           "thresholds": {"stability_tol": stability_tol}}
    statuses = [r["status"] for r in rows]
    out["verdict"] = FAIL if FAIL in statuses else BOUNDED
    out["compact"] = out["verdict"] != FAIL
    if spec.single_symbol is not None:
        g = spec.single_symbol[0]
        res = stable_integral(lambda z: np.abs(evaluate(g, z)) ** s, r_cuts, stability_tol)
        out["single_symbol_membership"] = {"space": f"A^{s:g}", **res}
    return out


def single_symbol_criterion(g: AnalyticFunction, p: float, q: float,
                            thresholds: ProfileThresholds = DEFAULT_THRESHOLDS) -> dict:
    """Verdict for ``I_{g,a}`` with ``p <= q`` and ``2/p - 2/q < 1``.

    Decided by the Bloch-type norm of ``g'`` with weight ``1 - 2/p + 2/q``.

    Raises
    ------
    RegimeError
        If ``p > q``.
    OutOfScopeError
        If ``2/p - 2/q >= 1``.
    """
    if p > q:
        raise RegimeError(f"p = {p} > q = {q}")
    d = 2.0 / p - 2.0 / q
    if d >= 1:
        raise OutOfScopeError(f"2/p - 2/q = {d:g} must be < 1")
    rep = bloch_norm(g, 1, 1.0 - d, thresholds=thresholds)
    return {"regime": "p<=q", "p": p, "q": q, "alpha": 1.0 - d, "bloch": rep.to_dict(),
            "verdict": _bloch_status(rep.verdict), "thresholds": thresholds.to_dict()}


# ---------------------------------------------------------------------------
# empirical witness norms


@dataclass(frozen=True, eq=False)
class KernelSum:
    """Finite sum of closed-form kernels, evaluated termwise."""

    terms: tuple

    def values(self, z, order: int = 0) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape, dtype=complex)
        for t in self.terms:
            out += evaluate(t, z, order)
        return out


def _as_sum(f) -> KernelSum:
    return f if isinstance(f, KernelSum) else KernelSum((f,))


class _ImageNorm:
    """``||T f||_q`` on a fixed rule with symbol values cached at the nodes."""

    def __init__(self, op, rule: QuadratureRule):
        self.op, self.rule = op, rule
        nodes = rule.nodes
        if isinstance(op, VolterraSpec):
            self.points = nodes
            self.orders = op.n
            self.weight = (1.0 - np.abs(nodes) ** 2) ** op.n
            self.symbols = [None if is_zero(g) else evaluate(g, nodes) for g in op.g]
        else:
            self.points = op.phi(nodes)
            self.orders = op.n + 1
            self.weight = None
            self.symbols = [None if is_zero(u) else evaluate(u, nodes) for u in op.u]

    def __call__(self, f: KernelSum, q: float) -> float:
        vals = np.zeros(self.points.shape, dtype=complex)
        for k, sym in enumerate(self.symbols[:self.orders]):
            if sym is not None:
                vals += sym * f.values(self.points, k)
        if self.weight is not None:
            vals *= self.weight
        return lp_integral(vals, q, self.rule) ** (1.0 / q)


def witness_growth(profile: Sequence[float], last: int = 4, min_increment: float = 0.01) -> bool:
    """True when the last ``last`` values increase strictly and the final
    relative increment exceeds ``min_increment``."""
    y = np.asarray(profile, dtype=float)[-last:]
    if y.size < 2 or y[-2] <= 0:
        return False
    return bool(np.all(np.diff(y) > 0) and y[-1] / y[-2] - 1.0 > min_increment)


def empirical_operator_norm(op, p: float, q: float, levels: int = 7,
                            directions: Sequence[complex] = (1.0,), n_random: int = 8,
                            seed: int = 0, gamma: float | None = None,
                            rule: QuadratureRule | None = None,
                            thresholds: ProfileThresholds = DEFAULT_THRESHOLDS) -> dict:
    """Lower estimate of ``||T||_{A^p -> A^q}`` over a witness family.

    Witness ``m`` sits at ``w_m = zeta (1 - 2^-m)`` for each boundary
    direction ``zeta``. For ``p <= q`` it is the normalized kernel
    ``k_{w_m}^[i]`` (``i <= n``); for ``q < p`` it is the partial lattice sum
    ``k_{w_1} + ... + k_{w_m}`` along the ray. The ratios
    ``||T f||_q / ||f||_p`` form the witness profile. Seeded random unit-norm
    polynomials complete the family.

    Volterra images are measured in the equivalent form
    ``||(1 - |z|^2)^n sum_k g_k f^(k)||_q`` (their derivatives below order
    ``n`` vanish at the origin).
    """
    rule = rule or fine_rule()
    gamma = gamma if gamma is not None else default_gamma(p)
    image_norm = _ImageNorm(op, rule)
    i_max = op.n
    profile = []
    for m in range(1, levels + 1):
        best = 0.0
        for zeta in directions:
            zeta = complex(zeta) / abs(zeta)
            if p <= q:
                fams = [KernelSum((normalized_kernel(zeta * (1 - 2.0 ** -m), i, gamma, p),))
                        for i in range(i_max + 1)]
            else:
                fams = [KernelSum(tuple(normalized_kernel(zeta * (1 - 2.0 ** -j), 0, gamma, p)
                                        for j in range(1, m + 1)))]
            for f in fams:
                norm_f = lp_integral(f.values(rule.nodes), p, rule) ** (1.0 / p)
                best = max(best, image_norm(f, q) / norm_f)
        profile.append(best)
    rng = np.random.default_rng(seed)
    poly_values = []
    for c in random_unit_coefficients(rng, n_random, 9):
        f = KernelSum((TaylorPoly(c),))
        norm_f = lp_integral(f.values(rule.nodes), p, rule) ** (1.0 / p)
        poly_values.append(image_norm(f, q) / norm_f)
    gaps = 2.0 ** -np.arange(1, levels + 1)
    cls = classify_profile(profile, gaps, thresholds)
    estimate = max(profile + poly_values) if (profile or poly_values) else 0.0
    return {"estimate": float(estimate), "profile": [float(v) for v in profile],
            "witness_radii": [1 - 2.0 ** -m for m in range(1, levels + 1)],
            "polynomial_values": [float(v) for v in poly_values],
            "growth": witness_growth(profile), "classification": cls,
            "p": p, "q": q, "gamma": gamma, "directions": [[complex(z).real, complex(z).imag]
                                                         for z in directions],
            "seed": seed, "thresholds": thresholds.to_dict()}


# ---------------------------------------------------------------------------
# Hilbert-Schmidt and adjoint


def _tail_diagnostic(terms: np.ndarray) -> dict:
    k = terms.size
    if k < 12 or np.all(terms == 0):
        return {"geometric_ratio": 0.0, "power_exponent": math.inf, "converges": True}
    a, b = terms[-11], terms[-1]
    ratio = float((b / a) ** 0.1) if a > 0 else 0.0
    half = np.arange(k // 2, k)
    pos = terms[half] > 0
    if np.count_nonzero(pos) >= 2:
        x, y = np.log(half[pos] + 1.0), np.log(terms[half][pos])
        x = x - x.mean()
        sigma = float(-np.sum(x * (y - y.mean())) / np.sum(x * x))
    else:
        sigma = math.inf
    return {"geometric_ratio": ratio, "power_exponent": sigma,
            "converges": bool(ratio < 0.99 or sigma > 1.1)}


def basis_sum(spec: CompositionSumSpec, basis_size: int,
              rule: QuadratureRule | None = None) -> tuple[float, np.ndarray]:
    """``sum_{k < basis_size} ||L e_k||_2^2`` with ``e_k = sqrt(k+1) z^k``."""
    rule = rule or with_boundary_tail(build_graded_rule(0.9999))
    nodes = rule.nodes
    image = spec.phi(nodes)
    u_vals = [None if is_zero(u) else evaluate(u, nodes) for u in spec.u]
    n = spec.n
    powers = [np.ones(nodes.shape, dtype=complex)]  # image^0 .. image^k
    terms = np.zeros(basis_size)
    for k in range(basis_size):
        if k > 0:
            powers.append(powers[-1] * image)
            if len(powers) > n + 1:
                powers.pop(0)
        # powers[-1 - j] = image^(k - j)
        total = np.zeros(nodes.shape, dtype=complex)
        for j in range(min(n, k) + 1):
            if u_vals[j] is None:
                continue
            total += u_vals[j] * math.perm(k, j) * powers[-1 - j]
        terms[k] = (k + 1) * lp_integral(total, 2.0, rule)
    return float(math.fsum(terms)), terms


def adjoint_residuals(spec: CompositionSumSpec, samples: int = 50, seed: int = 0,
                      z_radius: float = 0.8, degree: int = 8, kernel_degree: int = 512) -> dict:
    """Check ``<L f, Kz> = <f, sum_j conj(u_j(z)) Kz^[j]_{phi(z)}>`` at random pairs.

    The left side is integrated on a near-full-disk tensor rule; the right
    side is a coefficient inner product with truncated kernels.
    """
    rng = np.random.default_rng(seed)
    rule = build_disk_rule(48, 192, 1.0 - 1e-14)
    out = []
    for _ in range(samples):
        c = rng.standard_normal(degree + 1) + 1j * rng.standard_normal(degree + 1)
        f = TaylorPoly(c)
        rad = z_radius * math.sqrt(rng.uniform())
        z = rad * np.exp(2j * np.pi * rng.uniform())
        lf = apply_comp_sum(spec, f, rule.nodes)
        kz = evaluate(reproducing_kernel(z), rule.nodes)
        lhs = integrate(lf * np.conj(kz), rule)
        w = complex(spec.phi(z))
        combo = None
        for j, uj in enumerate(spec.u):
            term = poly_scale(truncate(reproducing_kernel(w, j), kernel_degree),
                              np.conj(evaluate(uj, z)))
            combo = term if combo is None else poly_add(combo, term)
        rhs = coefficient_inner_product(f, combo)
        scale = max(abs(lhs), abs(rhs), 1e-300)
        out.append({"z": [z.real, z.imag], "lhs": [lhs.real, lhs.imag],
                    "rhs": [rhs.real, rhs.imag], "residual": abs(lhs - rhs) / scale})
    return {"samples": out, "max_residual": max(s["residual"] for s in out), "seed": seed}


def hilbert_schmidt_check(spec: CompositionSumSpec, basis_size: int = 200,
                          rule: QuadratureRule | None = None,
                          r_cuts: Sequence[float] = R_CUT_PAIR,
                          stability_tol: float = STABILITY_TOL,
                          adjoint_samples: int = 50, seed: int = 0) -> dict:
    """Hilbert-Schmidt test for ``L`` on ``A^2``.

    Reports the basis sum with its tail diagnostic, the integrals
    ``int |u_j|^2 / (1 - |phi|^2)^(2+2j) dA`` (extrapolated value plus raw
    values at the cutoff pair for the stability test), the verdict and the
    adjoint-identity residuals.
    """
    total, terms = basis_sum(spec, basis_size, rule)
    tail = _tail_diagnostic(terms)
    integrals = []
    for j, uj in enumerate(spec.u):
        if is_zero(uj):
            integrals.append({"j": j, "value": 0.0, "values": [0.0, 0.0], "stable": True})
            continue

        def fn(z, uj=uj, j=j):
            return np.abs(evaluate(uj, z)) ** 2 / (1.0 - np.abs(spec.phi(z)) ** 2) ** (2 + 2 * j)

        raw = stable_integral(fn, r_cuts, stability_tol)
        ext = with_boundary_tail(criterion_rule(r_cuts[-1]))
        value = float(integrate(fn(ext.nodes), ext).real)
        integrals.append({"j": j, "value": value, "values": raw["values"],
                          "stable": raw["stable"]})
    hs = tail["converges"] and all(item["stable"] for item in integrals)
    out = {"basis_size": basis_size, "basis_sum": total, "terms": terms.tolist(), "tail": tail,
           "integrals": integrals, "verdict": "HS" if hs else "NOT_HS",
           "r_cuts": list(r_cuts), "thresholds": {"stability_tol": stability_tol}}
    if adjoint_samples:
        out["adjoint"] = adjoint_residuals(spec, adjoint_samples, seed)
    return out


# ---------------------------------------------------------------------------
# pull-back measures and rigidity


def pullback_rule(resolution: int = 1) -> QuadratureRule:
    return build_graded_rule(0.9999, radial_n=6, angular_factor=8 * resolution,
                             angular_min=32, angular_cap=4096 * resolution)


def pullback_measure(u: AnalyticFunction, phi: SelfMap, q: float,
                     rule: QuadratureRule) -> DiscreteMeasure:
    """Atoms ``phi(z_j)`` with weights ``|u(z_j)|^q w_j``."""
    weights = np.abs(evaluate(u, rule.nodes)) ** q * rule.weights
    return DiscreteMeasure(phi(rule.nodes), weights, None, "pull-back")


def composition_sum_rigidity(spec: CompositionSumSpec, p: float, q: float,
                             lattice: BergmanLattice, resolution: int = 1,
                             levels: int = 7, seed: int = 0,
                             thresholds: ProfileThresholds = DEFAULT_THRESHOLDS) -> dict:
    """Compare pull-back Carleson verdicts with the empirical norm of ``L``.

    Each ``mu_k = mu_{u_k, phi}`` is tested as a ``(k, p, q)``-Carleson measure;
    the operator's witness profile along four boundary directions gives the
    combined verdict (decay: VANISHING, plateau: BOUNDED, growth: DIVERGING;
    for ``q < p``, BOUNDED unless the witnesses grow).
    """
    rule = pullback_rule(resolution)
    components = []
    for k, uk in enumerate(spec.u):
        mu = pullback_measure(uk, spec.phi, q, rule)
        if p <= q:
            rep = carleson_statistic(mu, k, p, q, lattice, thresholds)
        else:
            rep = carleson_integral_statistic(mu, k, p, q, lattice.r)
        components.append({"k": k, "statistic": rep.statistic, "verdict": rep.verdict,
                           "profile": rep.profile})
    emp = empirical_operator_norm(spec, p, q, levels=levels,
                                  directions=(1.0, 1j, -1.0, -1j), seed=seed,
                                  thresholds=thresholds)
    if p <= q:
        shape = emp["classification"]["shape"]
        combined = {DECAY: VANISHING, GROWTH: DIVERGING}.get(shape, BOUNDED)
    else:
        combined = DIVERGING if emp["growth"] else BOUNDED
    comp = combine_verdicts([c["verdict"] for c in components])
    return {"p": p, "q": q, "n": spec.n, "r": lattice.r, "resolution": resolution,
            "components": components, "component_verdict": comp,
            "empirical": emp, "combined_verdict": combined, "agree": comp == combined}
