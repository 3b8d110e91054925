"""Analytic functions on the unit disk.

Two representations are supported:

* :class:`TaylorPoly` -- a finite Taylor polynomial ``sum c_k z^k``. When it
  was produced by truncating an infinite series the ``truncated`` flag is set,
  which tells boundary-sensitive consumers (Bloch sampling) how far out the
  polynomial can be trusted.
* :class:`PowerKernel` -- the closed form ``scale * d^deriv/dz^deriv
  [z^i (1 - conj(w) z)^(-s)]``. Derivatives stay in closed form, so no
  truncation bias enters kernel estimates.

All objects are immutable; every function here is pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConfigurationError, ContractError, DomainError, InputError

DEFAULT_DEGREE = 256
MAX_DEGREE = 8192
# tolerance used to decide how far out a truncated series is trusted
TRUNCATION_TOL = 1e-3


class AnalyticFunction:
    """Common interface: ``f(z)`` evaluates, ``f.derivative(k)`` differentiates."""

    def __call__(self, z, deriv_order: int = 0):
        return evaluate(self, z, deriv_order)

    def derivative(self, order: int = 1) -> "AnalyticFunction":
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class TaylorPoly(AnalyticFunction):
    """Polynomial ``sum_k coeffs[k] z^k``.

    Parameters
    ----------
    coeffs : array_like of complex
        Coefficients ``c_0 .. c_N``.
    truncated : bool
        True when the polynomial is a truncation of an infinite series.
    """

    coeffs: np.ndarray
    truncated: bool = False

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=complex)).copy()
        if c.ndim != 1 or c.size == 0:
            raise ContractError("TaylorPoly needs a non-empty 1-d coefficient array")
        if not np.all(np.isfinite(c)):
            raise ContractError("TaylorPoly coefficients must be finite")
        if c.size - 1 > MAX_DEGREE:
            raise ConfigurationError(
                f"degree {c.size - 1} exceeds the configured cap {MAX_DEGREE}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def derivative(self, order: int = 1) -> "TaylorPoly":
        return TaylorPoly(_diff_coeffs(self.coeffs, order), self.truncated)

    def tail_residual(self) -> float:
        """Magnitude of the highest coefficient (truncation diagnostic)."""
        return float(abs(self.coeffs[-1]))

    def trusted_radius(self, tol: float = TRUNCATION_TOL) -> float:
        """Radius up to which a truncated series is trusted (1.0 if exact)."""
        if not self.truncated:
            return 1.0
        return tol ** (1.0 / max(self.degree, 1))


@dataclass(frozen=True, eq=False)
class PowerKernel(AnalyticFunction):
    """Closed form ``scale * D^deriv [z^i (1 - conj(w) z)^(-s)]``.

    ``|w| = 1`` is accepted so that boundary-singular symbols such as
    ``(1 - z)^(-s)`` can be represented; the function is still analytic in
    the open disk.
    """

    w: complex
    i: int
    s: float
    scale: complex = 1.0
    deriv: int = 0

    def __post_init__(self):
        w = complex(self.w)
        if not (np.isfinite(w.real) and np.isfinite(w.imag)):
            raise ContractError("kernel parameter w must be finite")
        if abs(w) > 1.0 + 1e-14:
            raise ContractError(f"kernel parameter |w| = {abs(w)} exceeds 1")
        if int(self.i) != self.i or self.i < 0:
            raise ContractError("kernel index i must be a non-negative integer")
        if not self.s > 0:
            raise ContractError("kernel exponent s must be positive")
        if int(self.deriv) != self.deriv or self.deriv < 0:
            raise ContractError("derivative offset must be a non-negative integer")
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "i", int(self.i))
        object.__setattr__(self, "s", float(self.s))
        object.__setattr__(self, "scale", complex(self.scale))
        object.__setattr__(self, "deriv", int(self.deriv))

    def derivative(self, order: int = 1) -> "PowerKernel":
        return replace(self, deriv=self.deriv + int(order))

    def scaled(self, factor: complex) -> "PowerKernel":
        return replace(self, scale=self.scale * complex(factor))


@dataclass(frozen=True, eq=False)
class SelfMap:
    """Analytic self-map of the disk, validated on a boundary-graded grid."""

    func: AnalyticFunction
    sup_on_grid: float = field(init=False)

    def __post_init__(self):
        grid = _selfmap_check_grid()
        sup = float(np.max(np.abs(evaluate(self.func, grid))))
        if not sup < 1.0:
            raise DomainError(f"sup |phi| on the check grid is {sup:.6g} >= 1")
        object.__setattr__(self, "sup_on_grid", sup)

    def __call__(self, z):
        return evaluate(self.func, z)


def _selfmap_check_grid(levels: int = 14, per_ring: int = 256) -> np.ndarray:
    radii = np.concatenate([np.linspace(0.0, 0.5, 6), 1.0 - 2.0 ** -np.arange(2, levels + 1)])
    theta = 2 * np.pi * np.arange(per_ring) / per_ring
    return (radii[:, None] * np.exp(1j * theta)[None, :]).ravel()


# ---------------------------------------------------------------------------
# evaluation


def _check_disk(z: np.ndarray) -> None:
    if np.any(~np.isfinite(z)) or np.any(np.abs(z) >= 1.0):
        raise DomainError("evaluation point outside the open unit disk")


def _falling(k: np.ndarray, d: int) -> np.ndarray:
    """Falling factorial k (k-1) ... (k-d+1), elementwise."""
    out = np.ones_like(k, dtype=float)
    for j in range(d):
        out *= k - j
    return out


def _diff_coeffs(c: np.ndarray, d: int) -> np.ndarray:
    if d < 0:
        raise ContractError("derivative order must be non-negative")
    if d == 0:
        return np.array(c, dtype=complex)
    if d >= c.size:
        return np.zeros(1, dtype=complex)
    k = np.arange(d, c.size, dtype=float)
    return c[d:] * _falling(k, d)


def _horner(c: np.ndarray, z: np.ndarray) -> np.ndarray:
    out = np.full(z.shape, c[-1], dtype=complex)
    for ck in c[-2::-1]:
        out = out * z + ck
    return out


def _pochhammer(s: float, m: int) -> float:
    out = 1.0
    for j in range(m):
        out *= s + j
    return out


def kernel_derivatives(w, i: int, s: float, z, orders, scale=1.0) -> list:
    """Closed-form derivatives of ``scale * z^i (1 - conj(w) z)^(-s)``.

    ``w`` broadcasts against ``z``; one complex power is shared by all
    requested orders. Returns one array per entry of ``orders``.
    """
    wb = np.conj(np.asarray(w, dtype=complex))
    z = np.asarray(z, dtype=complex)
    base = 1.0 - wb * z
    inv = 1.0 / base
    head = base ** (-s)
    out = []
    for m in orders:
        acc = np.zeros(np.broadcast(wb, z).shape, dtype=complex)
        for l in range(min(m, i) + 1):
            coef = math.comb(m, l) * math.perm(i, l) * _pochhammer(s, m - l)
            if coef == 0:
                continue
            acc = acc + coef * (wb * inv) ** (m - l) * z ** (i - l)
        out.append(scale * head * acc)
    return out


def _kernel_values(f: PowerKernel, z: np.ndarray, order: int) -> np.ndarray:
    return kernel_derivatives(f.w, f.i, f.s, z, [order + f.deriv], f.scale)[0]


def evaluate(f: AnalyticFunction, z, deriv_order: int = 0):
    """Value of ``f^(deriv_order)`` at ``z``.

    Parameters
    ----------
    f : AnalyticFunction
    z : complex or array_like
        Points in the open unit disk.
    deriv_order : int

    Returns
    -------
    complex or ndarray
        Same shape as ``z``.

    Raises
    ------
    DomainError
        If any ``|z| >= 1``.
    """
    if deriv_order < 0:
        raise ContractError("derivative order must be non-negative")
    za = np.asarray(z, dtype=complex)
    _check_disk(za)
    if isinstance(f, TaylorPoly):
        out = _horner(_diff_coeffs(f.coeffs, deriv_order), za)
    elif isinstance(f, PowerKernel):
        out = _kernel_values(f, za, deriv_order)
    else:
        raise ContractError(f"unsupported function type {type(f).__name__}")
    if np.ndim(z) == 0:
        return complex(out)
    return out


# ---------------------------------------------------------------------------
# series calculus


def kernel_coefficients(f: PowerKernel, degree: int) -> np.ndarray:
    """Taylor coefficients of ``f`` through ``degree``."""
    n_raw = degree + f.deriv
    wb = f.w.conjugate()
    c = np.zeros(n_raw + 1, dtype=complex)
    if f.i <= n_raw:
        a = np.empty(n_raw - f.i + 1, dtype=complex)
        a[0] = 1.0
        for m in range(1, a.size):
            a[m] = a[m - 1] * (f.s + m - 1) / m * wb
        c[f.i:] = a
    return f.scale * _diff_coeffs(c, f.deriv)[: degree + 1]


def truncate(f: AnalyticFunction, degree: int = DEFAULT_DEGREE) -> TaylorPoly:
    """Taylor polynomial of ``f`` of degree ``degree``.

    Kernels with ``w != 0`` give a polynomial flagged as truncated; a
    polynomial of higher degree is cut and flagged.
    """
    if degree < 0:
        raise ContractError("degree must be non-negative")
    if degree > MAX_DEGREE:
        raise ConfigurationError(f"degree {degree} exceeds the configured cap {MAX_DEGREE}")
    if isinstance(f, TaylorPoly):
        if f.degree <= degree:
            return f
        cut = f.coeffs[degree + 1:]
        return TaylorPoly(f.coeffs[: degree + 1], f.truncated or bool(np.any(cut != 0)))
    if isinstance(f, PowerKernel):
        return TaylorPoly(kernel_coefficients(f, degree), truncated=f.w != 0)
    raise ContractError(f"unsupported function type {type(f).__name__}")


def as_taylor(f: AnalyticFunction, degree: int = DEFAULT_DEGREE) -> TaylorPoly:
    """Return ``f`` itself if it is a polynomial, else its truncation."""
    return f if isinstance(f, TaylorPoly) else truncate(f, degree)


def integrate_once(f: AnalyticFunction, degree: int = DEFAULT_DEGREE,
                   max_degree: int = MAX_DEGREE) -> TaylorPoly:
    """Antiderivative vanishing at the origin.

    Kernels are truncated to ``degree`` first. The result has degree one
    higher than its input; exceeding ``max_degree`` is a configuration error.
    """
    t = as_taylor(f, degree)
    if t.degree + 1 > max_degree:
        raise ConfigurationError(
            f"integration would raise the degree to {t.degree + 1} > cap {max_degree}")
    c = np.zeros(t.degree + 2, dtype=complex)
    c[1:] = t.coeffs / np.arange(1, t.degree + 2)
    return TaylorPoly(c, t.truncated)


def integrate_n(f: AnalyticFunction, n: int, degree: int = DEFAULT_DEGREE,
                max_degree: int = MAX_DEGREE) -> TaylorPoly:
    """``n``-fold iterated antiderivative ``I^n f``."""
    out = as_taylor(f, degree)
    for _ in range(n):
        out = integrate_once(out, degree, max_degree)
    return out


def derivative(f: AnalyticFunction, order: int = 1) -> AnalyticFunction:
    return f.derivative(order)


def poly_add(*terms: TaylorPoly) -> TaylorPoly:
    size = max(t.coeffs.size for t in terms)
    c = np.zeros(size, dtype=complex)
    for t in terms:
        c[: t.coeffs.size] += t.coeffs
    return TaylorPoly(c, any(t.truncated for t in terms))


def poly_scale(f: TaylorPoly, factor: complex) -> TaylorPoly:
    return TaylorPoly(f.coeffs * factor, f.truncated)


def poly_mul(f: TaylorPoly, g: TaylorPoly, degree: int | None = None) -> TaylorPoly:
    """Product of two polynomials, cut at ``degree`` when given.

    The product of a truncated series is itself only trustworthy up to the
    smaller of the two truncation degrees, so it is cut there.
    """
    c = np.convolve(f.coeffs, g.coeffs)
    truncated = f.truncated or g.truncated
    limits = [t.degree for t in (f, g) if t.truncated]
    if degree is not None:
        limits.append(degree)
    if limits:
        cut = min(limits)
        if c.size - 1 > cut:
            truncated = truncated or bool(np.any(c[cut + 1:] != 0))
            c = c[: cut + 1]
    return TaylorPoly(c, truncated)


def compose(f: AnalyticFunction, phi: SelfMap, nodes, deriv_order: int = 0) -> np.ndarray:
    """Pointwise values ``f^(deriv_order)(phi(z_j))`` at the given nodes.

    Raises
    ------
    DomainError
        If some ``|phi(z_j)| >= 1``.
    """
    nodes = np.asarray(nodes, dtype=complex)
    image = phi(nodes)
    if np.any(np.abs(image) >= 1.0):
        raise DomainError("self-map leaves the disk at a grid node")
    return evaluate(f, image, deriv_order)


def coefficient_inner_product(f: TaylorPoly, g: TaylorPoly) -> complex:
    """A^2 inner product ``sum c_k conj(d_k) / (k+1)`` of two polynomials."""
    n = min(f.coeffs.size, g.coeffs.size)
    k = np.arange(n)
    return complex(np.sum(f.coeffs[:n] * np.conj(g.coeffs[:n]) / (k + 1)))


# ---------------------------------------------------------------------------
# function-spec files


def parse_complex(value, what: str) -> complex:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if (isinstance(value, (list, tuple)) and len(value) == 2
            and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)):
        return complex(value[0], value[1])
    raise InputError(f"{what} must be a number or a [re, im] pair, got {value!r}")


def from_spec(spec) -> AnalyticFunction:
    """Build a function from its JSON-style description.

    ``{"kind": "taylor", "coeffs": [[re, im], ...]}`` or
    ``{"kind": "kernel", "w": [re, im], "i": int, "s": float}``. Optional keys:
    ``truncated`` (taylor), ``scale`` and ``deriv`` (kernel).
    """
    if not isinstance(spec, dict) or "kind" not in spec:
        raise InputError("function spec must be an object with a 'kind' key")
    kind = spec["kind"]
    try:
        if kind == "taylor":
            coeffs = spec["coeffs"]
            if not isinstance(coeffs, list) or not coeffs:
                raise InputError("'coeffs' must be a non-empty list")
            c = [parse_complex(v, "coefficient") for v in coeffs]
            return TaylorPoly(np.array(c), bool(spec.get("truncated", False)))
        if kind == "kernel":
            i = spec.get("i", 0)
            if not isinstance(i, int) or isinstance(i, bool):
                raise InputError("'i' must be an integer")
            s = spec["s"]
            if not isinstance(s, (int, float)) or isinstance(s, bool):
                raise InputError("'s' must be a number")
            return PowerKernel(parse_complex(spec["w"], "w"), i, float(s),
                               parse_complex(spec.get("scale", 1.0), "scale"),
                               int(spec.get("deriv", 0)))
    except KeyError as exc:
        raise InputError(f"function spec is missing key {exc}") from None
    except ContractError as exc:
        raise InputError(f"invalid function spec: {exc}") from None
    raise InputError(f"unknown function kind {kind!r}")


def to_spec(f: AnalyticFunction) -> dict:
    """Inverse of :func:`from_spec`."""
    if isinstance(f, TaylorPoly):
        out = {"kind": "taylor", "coeffs": [[float(c.real), float(c.imag)] for c in f.coeffs]}
        if f.truncated:
            out["truncated"] = True
        return out
    if isinstance(f, PowerKernel):
        out = {"kind": "kernel", "w": [f.w.real, f.w.imag], "i": f.i, "s": f.s}
        if f.scale != 1:
            out["scale"] = [f.scale.real, f.scale.imag]
        if f.deriv:
            out["deriv"] = f.deriv
        return out
    raise ContractError(f"unsupported function type {type(f).__name__}")


def is_zero(f: AnalyticFunction) -> bool:
    """Exact zero test (coefficients all zero, or kernel with zero scale)."""
    if isinstance(f, TaylorPoly):
        return bool(np.all(f.coeffs == 0))
    if isinstance(f, PowerKernel):
        if f.scale == 0:
            return True
        # derivatives of order > i of z^i vanish when w = 0
        return f.w == 0 and f.deriv > f.i
    return False


def monomial(k: int, coeff: complex = 1.0) -> TaylorPoly:
    c = np.zeros(k + 1, dtype=complex)
    c[k] = coeff
    return TaylorPoly(c)


def constant(value: complex) -> TaylorPoly:
    return TaylorPoly(np.array([value], dtype=complex))
