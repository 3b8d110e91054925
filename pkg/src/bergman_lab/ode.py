"""Linear differential equations ``f^(n) + g_{n-1} f^(n-1) + ... + g_0 f = F``.

The equation is rewritten as ``f + I_g^(n) f = F_0`` where ``I_g^(n)`` is the
Volterra-type operator ``I^n (sum_k g_k f^(k))`` and ``F_0`` carries the
forcing term and the initial data. :func:`neumann_solve` iterates
``f <- F_0 - I_g^(n) f`` on Taylor polynomials of a fixed working degree;
:func:`taylor_ode_oracle` solves the coefficient recurrence directly and
serves as an independent check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .analytic import (AnalyticFunction, TaylorPoly, as_taylor, constant, evaluate,
                       integrate_n, is_zero, poly_add, poly_scale, truncate)
from .errors import ContractError
from .norms import ap_norm, bloch_norm
from .operators import VolterraSpec, apply_volterra
from .quadrature import QuadratureRule, build_disk_rule

DEFAULT_WORKING_DEGREE = 128
DISTANCE_R_CUT = 0.999
RESIDUAL_RADIUS = 0.9
# ratios >= 1 on this many consecutive iterations count as sustained
EXPANSION_WINDOW = 5


@dataclass(frozen=True, eq=False)
class OdeProblem:
    """Coefficients, forcing term and initial data of the equation.

    Attributes
    ----------
    n : int
        Order of the equation.
    g : tuple of AnalyticFunction
        ``g_0 .. g_{n-1}``.
    F : AnalyticFunction
        Right-hand side.
    initial : tuple of complex
        ``f(0), f'(0), ..., f^(n-1)(0)``.
    """

    n: int
    g: tuple
    F: AnalyticFunction
    initial: tuple

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ContractError("n must be a positive integer")
        g, init = tuple(self.g), tuple(complex(v) for v in self.initial)
        if len(g) != self.n:
            raise ContractError(f"expected {self.n} coefficients g_k, got {len(g)}")
        if len(init) != self.n:
            raise ContractError(f"expected {self.n} initial values, got {len(init)}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "initial", init)

    def volterra(self) -> VolterraSpec:
        return VolterraSpec(self.n, self.g)

    def initial_polynomial(self) -> TaylorPoly:
        """``sum_{i<n} f^(i)(0) / i! z^i``."""
        return TaylorPoly(np.array([v / math.factorial(i) for i, v in enumerate(self.initial)]))


def neumann_seed(problem: OdeProblem, degree: int = DEFAULT_WORKING_DEGREE) -> TaylorPoly:
    """``F_0 = I^n F + sum_{i<n} f^(i)(0) / i! z^i``.

    Examples
    --------
    >>> p = OdeProblem(2, (constant(0), constant(0)), constant(2), (0, 0))
    >>> neumann_seed(p).coeffs.real.tolist()
    [0.0, 0.0, 1.0]
    """
    return poly_add(integrate_n(problem.F, problem.n, degree), problem.initial_polynomial())


@lru_cache(maxsize=8)
def distance_rule(degree: int, r_cut: float = DISTANCE_R_CUT) -> QuadratureRule:
    """Tensor rule on ``|z| <= r_cut`` resolving polynomials of ``degree``."""
    return build_disk_rule(min(degree // 2 + 16, 144), min(2 * degree + 64, 576), r_cut)


def _cut(f: TaylorPoly, degree: int) -> TaylorPoly:
    return truncate(f, degree) if f.degree > degree else f


def equation_residual(problem: OdeProblem, f: AnalyticFunction,
                      radius: float = RESIDUAL_RADIUS, degree: int = DEFAULT_WORKING_DEGREE) -> float:
    """``max |f^(n) + sum g_k f^(k) - F|`` over rule nodes with ``|z| <= radius``."""
    nodes = distance_rule(degree, radius).nodes
    total = evaluate(f, nodes, problem.n) - evaluate(problem.F, nodes)
    for k, gk in enumerate(problem.g):
        if not is_zero(gk):
            total += evaluate(gk, nodes) * evaluate(f, nodes, k)
    return float(np.max(np.abs(total)))


def _sustained_expansion(ratios: Sequence[float], window: int = EXPANSION_WINDOW) -> bool:
    tail = list(ratios)[-window:]
    return len(tail) == window and all(r >= 1.0 for r in tail)


def _iterate(problem: OdeProblem, p: float, max_iter: int, tol: float, degree: int):
    rule = distance_rule(degree)
    spec = VolterraSpec(problem.n, tuple(as_taylor(gk, degree) for gk in problem.g))
    seed = _cut(neumann_seed(problem, degree), degree)
    f = seed
    distances, ratios = [], []
    for _ in range(max_iter):
        image = _cut(apply_volterra(spec, f, degree), degree)
        f_next = poly_add(seed, poly_scale(image, -1.0))
        diff = poly_add(f_next, poly_scale(f, -1.0))
        d = float(ap_norm(diff, p, rule)) if not is_zero(diff) else 0.0
        if distances and distances[-1] > 0:
            ratios.append(d / distances[-1])
        distances.append(d)
        f = f_next
        if d < tol:
            return f, distances, ratios, True
    return f, distances, ratios, False


def neumann_solve(problem: OdeProblem, p: float = 2.0, max_iter: int = 200,
                  tol: float = 1e-12, degree: int = DEFAULT_WORKING_DEGREE,
                  max_degree: int = 1024) -> dict:
    """Solve the equation by the Neumann iteration ``f <- F_0 - I_g^(n) f``.

    Parameters
    ----------
    problem : OdeProblem
    p : float
        Exponent of the A^p distance between successive iterates, measured
        on ``|z| <= 0.999``.
    max_iter : int
    tol : float
        Stop once the distance between successive iterates drops below it.
    degree : int
        Initial working degree; products are cut there before integrating.
    max_degree : int
        The working degree doubles while the equation residual on
        ``|z| <= 0.9`` exceeds ``10 tol``, up to this cap.

    Returns
    -------
    dict
        ``status`` is ``CONVERGED``, ``DIVERGED`` (no convergence within
        ``max_iter`` and contraction ratios at least 1 over the last
        iterations) or ``NOT_CONVERGED``. Only a converged run carries
        ``solution``. The certificate lists the distances, the contraction
        ratios and the Bloch norms ``||g_k||_{0, n-k}`` that bound the
        operator norm.
    """
    if not p > 0:
        raise ContractError("p must be positive")
    if max_iter < 1 or degree < problem.n:
        raise ContractError("max_iter must be positive and degree at least n")
    attempts = []
    while True:
        f, distances, ratios, converged = _iterate(problem, p, max_iter, tol, degree)
        residual = equation_residual(problem, f, degree=degree) if converged else None
        attempts.append({"degree": degree, "iterations": len(distances),
                         "converged": converged, "residual": residual})
        if not converged or residual <= 10 * tol or 2 * degree > max_degree:
            break
        degree *= 2
    if converged:
        status = "CONVERGED"
    elif _sustained_expansion(ratios):
        status = "DIVERGED"
    else:
        status = "NOT_CONVERGED"
    bloch = [bloch_norm(gk, 0, problem.n - k) for k, gk in enumerate(problem.g)]
    out = {
        "status": status,
        "iterations": len(distances),
        "p": p, "tol": tol, "degree": degree, "max_iter": max_iter,
        "distances": distances,
        "contraction_ratios": ratios,
        "sustained_expansion": _sustained_expansion(ratios),
        "bloch_norms": [{"k": k, "norm": b.norm, "verdict": b.verdict}
                        for k, b in enumerate(bloch)],
        "attempts": attempts,
        "distance_rule": distance_rule(degree).describe(),
    }
    if converged:
        norms = [float(ap_norm(f, p, distance_rule(degree, r))) for r in (0.999, 0.9999)]
        out["solution"] = f
        out["solution_norms"] = {"r_cuts": [0.999, 0.9999], "values": norms,
                                 "relative_change": abs(norms[1] - norms[0]) / max(norms[0], 1e-300)}
        out["residual"] = residual
        out["residual_ok"] = bool(residual <= 10 * tol)
        out["residual_radius"] = RESIDUAL_RADIUS
    return out


def taylor_ode_oracle(problem: OdeProblem, degree: int) -> TaylorPoly:
    """Power-series solution by the coefficient recurrence.

    The coefficient of ``z^m`` in ``f^(n)`` is ``c_{m+n} (m+n)! / m!`` and
    only involves ``c_0 .. c_{m+n-1}`` on the right-hand side
    ``F - sum_k g_k f^(k)``.

    Examples
    --------
    >>> p = OdeProblem(1, (constant(0),), TaylorPoly([0, 1]), (0,))
    >>> taylor_ode_oracle(p, 3).coeffs.real.tolist()
    [0.0, 0.0, 0.5, 0.0]
    """
    n = problem.n
    if degree < n - 1:
        raise ContractError(f"degree must be at least n - 1 = {n - 1}")
    F = np.zeros(degree + 1, dtype=complex)
    Fc = as_taylor(problem.F, degree).coeffs[: degree + 1]
    F[: Fc.size] = Fc
    g = []
    for gk in problem.g:
        c = np.zeros(degree + 1, dtype=complex)
        gc = as_taylor(gk, degree).coeffs[: degree + 1]
        c[: gc.size] = gc
        g.append(c)
    c = np.zeros(degree + 1, dtype=complex)
    for i, v in enumerate(problem.initial):
        if i <= degree:
            c[i] = v / math.factorial(i)
    for m in range(0, degree - n + 1):
        rhs = F[m]
        for k in range(n):
            # coefficients 0..m of f^(k): c_{l+k} (l+k)! / l!
            l = np.arange(m + 1)
            fk = c[l + k] * np.array([math.perm(j + k, k) for j in l], dtype=float)
            rhs -= np.dot(g[k][m::-1][: m + 1], fk)
        c[m + n] = rhs / math.perm(m + n, n)
    truncated = any(not isinstance(x, TaylorPoly) or x.truncated
                    for x in (problem.F, *problem.g))
    return TaylorPoly(c, truncated)


def coefficient_agreement(a: TaylorPoly, b: TaylorPoly, through: int) -> float:
    """``max_{k <= through} |a_k - b_k|``."""
    ca = np.zeros(through + 1, dtype=complex)
    cb = np.zeros(through + 1, dtype=complex)
    ca[: min(a.coeffs.size, through + 1)] = a.coeffs[: through + 1]
    cb[: min(b.coeffs.size, through + 1)] = b.coeffs[: through + 1]
    return float(np.max(np.abs(ca - cb)))


def zero_coefficients(n: int) -> tuple:
    return tuple(constant(0) for _ in range(n))
