"""Kernel families, their norm estimates and the Pochhammer cancellation identity.

``K_w^[i](z) = z^i / (1 - conj(w) z)^(gamma + i)`` is the test-function
family; ``k_w^[i] = (1 - |w|^2)^(gamma + i - 2/p) K_w^[i]`` is its
A^p-normalized version. The A^2 reproducing kernel of order ``i`` is
``(i+1)! z^i / (1 - conj(w) z)^(2 + i)``, so that
``<f, Kz^[i]> = f^(i)(w)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analytic import PowerKernel, evaluate
from .errors import ContractError, DomainError
from .norms import ap_norm, lp_integral
from .quadrature import QuadratureRule, default_rule


def default_gamma(p: float) -> float:
    """4 for ``p >= 2``, else ``3 + 2/p``; always above ``1 + 2/p``."""
    return 4.0 if p >= 2 else 3.0 + 2.0 / p


@dataclass(frozen=True)
class KernelFamilySpec:
    """Parameters of a kernel test family.

    Attributes
    ----------
    p : float
    gamma : float
        Must exceed ``1 + 2/p``.
    i_max : int
    w_grid : tuple of complex
    """

    p: float
    gamma: float
    i_max: int = 0
    w_grid: tuple = (0j,)

    def __post_init__(self):
        if not self.gamma > 1.0 + 2.0 / self.p:
            raise ContractError(f"gamma = {self.gamma} must exceed 1 + 2/p = {1 + 2 / self.p}")
        if self.i_max < 0:
            raise ContractError("i_max must be non-negative")
        if any(abs(w) >= 1 for w in self.w_grid):
            raise DomainError("kernel centers must lie in the open disk")


def _check_center(w) -> complex:
    w = complex(w)
    if not abs(w) < 1:
        raise DomainError(f"kernel center |w| = {abs(w)} must be < 1")
    return w


def kernel(w, i: int, gamma: float) -> PowerKernel:
    """``K_w^[i](z) = z^i / (1 - conj(w) z)^(gamma + i)``."""
    return PowerKernel(_check_center(w), i, gamma + i)


def normalized_kernel(w, i: int, gamma: float, p: float) -> PowerKernel:
    """``(1 - |w|^2)^(gamma + i - 2/p) K_w^[i]``, of A^p norm comparable to 1."""
    w = _check_center(w)
    return PowerKernel(w, i, gamma + i, (1.0 - abs(w) ** 2) ** (gamma + i - 2.0 / p))


def reproducing_kernel(z, i: int = 0) -> PowerKernel:
    """A^2 reproducing kernel for ``f -> f^(i)(z)``.

    Examples
    --------
    >>> k = reproducing_kernel(0.5)
    >>> round(abs(k(0.5)), 6)
    1.777778
    """
    return PowerKernel(_check_center(z), i, 2.0 + i, float(math.factorial(i + 1)))


def kernel_norm_ratio(w, i: int, gamma: float, p: float,
                      rule: QuadratureRule | None = None) -> float:
    """``||K_w^[i]||_p (1 - |w|^2)^(gamma + i - 2/p)``.

    Bounded above and below uniformly in ``w`` when ``gamma > 1 + 2/p``.
    """
    if not gamma > 1.0 + 2.0 / p:
        raise ContractError(f"gamma = {gamma} must exceed 1 + 2/p")
    return ap_norm(normalized_kernel(w, i, gamma, p), p, rule)


def gamma_product(beta: float, n: int, m: int) -> float:
    """Rising product ``prod_{j=n}^{m} (beta + j)``.

    Examples
    --------
    >>> gamma_product(0.5, 1, 3)
    13.125
    """
    if n < 0 or m < n:
        raise ContractError(f"need m >= n >= 0, got n={n}, m={m}")
    out = 1.0
    for j in range(n, m + 1):
        out *= beta + j
    return out


def leibniz_cancellation(beta: float, n: int, j: int) -> float:
    """Coefficient ``b_j`` that the Leibniz rule forces to vanish.

    ``b_j = G(n, 2n-j) + sum_{i=1}^{n-j} (-1)^i C(n+1-j, i) G(n-i+1, n) G(n, 2n-i-j)
    + (-1)^(n-j+1) G(j, n)`` with ``G(a, b) = gamma_product(beta, a, b)``.
    The terms are summed with :func:`math.fsum`, which is exact-rounded and
    so immune to the cancellation between terms of size ``~ G(n, 2n-j)``.
    """
    if n < 1 or not 0 <= j <= n - 1:
        raise ContractError(f"need n >= 1 and 0 <= j <= n-1, got n={n}, j={j}")
    terms = [gamma_product(beta, n, 2 * n - j)]
    for i in range(1, n - j + 1):
        terms.append((-1) ** i * math.comb(n + 1 - j, i)
                     * gamma_product(beta, n - i + 1, n) * gamma_product(beta, n, 2 * n - i - j))
    terms.append((-1) ** (n - j + 1) * gamma_product(beta, j, n))
    return math.fsum(terms)


def leibniz_relative_residual(beta: float, n: int, j: int) -> float:
    """``|b_j| / G(n, 2n-j)``."""
    return abs(leibniz_cancellation(beta, n, j)) / gamma_product(beta, n, 2 * n - j)


def leibniz_table(beta: float, n: int) -> list[dict]:
    """Residual rows for every ``j < n``."""
    return [{"beta": beta, "n": n, "j": j, "b_j": leibniz_cancellation(beta, n, j),
             "relative": leibniz_relative_residual(beta, n, j)} for j in range(n)]


def _kernel_stack(w, n: int, gamma: float, nodes) -> np.ndarray:
    return np.stack([evaluate(kernel(w, i, gamma), nodes) for i in range(n + 1)])


def combination_lower_ratio(w, alphas, gamma: float, p: float,
                            rule: QuadratureRule | None = None) -> float:
    """``||sum a_i K_w^[i]||_p / sum |a_i| ||K_w^[i]||_p``, in ``(0, 1]``."""
    alphas = np.asarray(alphas, dtype=complex)
    if alphas.ndim != 1 or np.any(alphas == 0):
        raise ContractError("all combination coefficients must be nonzero")
    rule = rule or default_rule()
    stack = _kernel_stack(w, alphas.size - 1, gamma, rule.nodes)
    return float(_ratios(stack, alphas[None, :], p, rule)[0])


def _ratios(stack: np.ndarray, alphas: np.ndarray, p: float, rule: QuadratureRule) -> np.ndarray:
    norms = np.array([lp_integral(row, p, rule) ** (1.0 / p) for row in stack])
    out = np.empty(alphas.shape[0])
    for s, a in enumerate(alphas):
        combo = np.sum(a[:, None] * stack, axis=0)
        out[s] = lp_integral(combo, p, rule) ** (1.0 / p) / np.sum(np.abs(a) * norms)
    return out


def random_unit_coefficients(rng: np.random.Generator, count: int, size: int) -> np.ndarray:
    """``count`` complex Gaussian vectors of length ``size`` scaled to unit l2 norm."""
    a = rng.standard_normal((count, size)) + 1j * rng.standard_normal((count, size))
    return a / np.sqrt(np.sum(np.abs(a) ** 2, axis=1, keepdims=True))


def combination_sweep(w_values, n_max: int, samples: int, p: float = 2.0,
                      gamma: float = 4.0, seed: int = 0,
                      rule: QuadratureRule | None = None) -> list[dict]:
    """Minimum combination ratio over seeded random coefficients per ``(w, n)``.

    Returns one row per ``(w, n)`` with ``n = 1 .. n_max``.
    """
    rule = rule or default_rule()
    rng = np.random.default_rng(seed)
    rows = []
    for w in w_values:
        stack = _kernel_stack(w, n_max, gamma, rule.nodes)
        for n in range(1, n_max + 1):
            alphas = random_unit_coefficients(rng, samples, n + 1)
            ratios = _ratios(stack[: n + 1], alphas, p, rule)
            rows.append({"w": complex(w), "n": n, "ratio": float(np.min(ratios))})
    return rows


def kernel_norm_sweep(w_values, i_max: int, p_values, gamma_for=default_gamma,
                      rule: QuadratureRule | None = None) -> list[dict]:
    """``kernel_norm_ratio`` on a grid of ``(w, i, p)``."""
    rows = []
    for p in p_values:
        gamma = gamma_for(p)
        for i in range(i_max + 1):
            for w in w_values:
                rows.append({"w": complex(w), "i": i, "p": float(p), "gamma": gamma,
                             "ratio": kernel_norm_ratio(w, i, gamma, p, rule)})
    return rows


def ratio_windows(rows: list[dict], keys=("i", "p")) -> list[dict]:
    """Per-family ``[min, max]`` window of the ``ratio`` column."""
    groups: dict = {}
    for row in rows:
        groups.setdefault(tuple(row[k] for k in keys), []).append(row["ratio"])
    out = []
    for key, vals in sorted(groups.items()):
        lo, hi = min(vals), max(vals)
        out.append({**dict(zip(keys, key)), "min": lo, "max": hi, "spread": hi / lo})
    return out
