"""Pseudo-hyperbolic and Bergman metrics, metric disks and r-lattices."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .errors import ContractError, DomainError, ResolutionError

# relative slack when comparing a distance against a radius
_SLACK = 1e-12
MAX_CANDIDATES = 3_000_000


def _disk_points(*zs):
    out = []
    for z in zs:
        a = np.asarray(z, dtype=complex)
        if np.any(~np.isfinite(a)) or np.any(np.abs(a) >= 1.0):
            raise DomainError("point outside the open unit disk")
        out.append(a)
    return out


def moebius(a, z):
    """Involution ``phi_a(z) = (a - z) / (1 - conj(a) z)``."""
    a, z = _disk_points(a, z)
    return (a - z) / (1.0 - np.conj(a) * z)


def pseudo_hyperbolic(z, w):
    """``rho(z, w) = |(z - w) / (1 - conj(z) w)|``.

    Examples
    --------
    >>> round(float(pseudo_hyperbolic(0.5, -0.5)), 12)
    0.8
    """
    z, w = _disk_points(z, w)
    out = np.abs(z - w) / np.abs(1.0 - np.conj(z) * w)
    return float(out) if out.ndim == 0 else out


def bergman_metric(z, w):
    """``beta(z, w) = artanh rho(z, w)``.

    Examples
    --------
    >>> round(bergman_metric(0, 0.5), 6)
    0.549306
    """
    rho = np.asarray(pseudo_hyperbolic(z, w))
    out = np.arctanh(np.minimum(rho, 1.0))
    return float(out) if out.ndim == 0 else out


def disk_image(a, r: float):
    """Euclidean center and radius of ``D(a, r) = {z : beta(a, z) < r}``.

    With ``s = tanh r`` the ball is the Euclidean disk of center
    ``(1 - s^2) a / (1 - s^2 |a|^2)`` and radius
    ``s (1 - |a|^2) / (1 - s^2 |a|^2)``.
    """
    (a,) = _disk_points(a)
    s = math.tanh(r)
    den = 1.0 - s * s * np.abs(a) ** 2
    return (1.0 - s * s) * a / den, s * (1.0 - np.abs(a) ** 2) / den


def disk_area(a, r: float):
    """Normalized area of ``D(a, r)``: ``s^2 (1-|a|^2)^2 / (1 - s^2 |a|^2)^2``."""
    _, radius = disk_image(a, r)
    return radius ** 2


@dataclass(frozen=True, eq=False)
class BergmanLattice:
    """Separated covering set for the Bergman metric.

    Attributes
    ----------
    r : float
        Bergman radius.
    points : ndarray of complex
        Lattice points, ordered ring by ring from the origin outward.
    multiplicity_bound : int
        Largest number of balls ``D(a_j, 4r)`` containing one reference node.
    r_max : float
        Euclidean radius of the region the lattice is certified on.
    certificate : dict
        Separation, covering and overlap diagnostics.
    """

    r: float
    points: np.ndarray
    multiplicity_bound: int
    r_max: float
    certificate: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return self.points.size

    def ring_index(self) -> np.ndarray:
        """Dyadic ring ``m = floor(-log2(1 - |a|))`` of each point."""
        gap = 1.0 - np.abs(self.points)
        return np.floor(-np.log2(gap) + 1e-12).astype(int)


def _candidate_rings(r_max: float, h: float, angular_h: float | None = None):
    """Rings of candidates at hyperbolic radii ``j h`` inside ``|z| <= r_max``."""
    angular_h = angular_h or h
    beta_max = math.atanh(r_max)
    rings = [np.zeros(1, dtype=complex)]
    j = 1
    while j * h <= beta_max + 1e-12:
        rad = math.tanh(j * h)
        circ = 2 * math.pi * rad / (1.0 - rad * rad)
        count = max(1, math.ceil(circ / angular_h))
        offset = 0.5 * (j % 2)
        theta = 2 * math.pi * (np.arange(count) + offset) / count
        rings.append(rad * np.exp(1j * theta))
        j += 1
    return rings


def _estimate_candidates(r_max: float, h: float) -> int:
    beta_max = math.atanh(r_max)
    total = 1
    for j in range(1, int(beta_max / h) + 1):
        rad = math.tanh(j * h)
        total += math.ceil(2 * math.pi * rad / (1.0 - rad * rad) / h)
    return total


def _beta_min_to(point: complex, others: np.ndarray) -> float:
    if others.size == 0:
        return math.inf
    return float(np.min(np.arctanh(np.abs(point - others) / np.abs(1.0 - np.conj(point) * others))))


def _greedy(rings, r: float) -> np.ndarray:
    accepted: list[complex] = []
    tree = None
    for ring in rings:
        if tree is not None:
            centers, radii = disk_image(ring, r)
            pts = np.column_stack([centers.real, centers.imag])
            hits = tree.query_ball_point(pts, radii * (1 - _SLACK), return_length=True)
            ok = np.asarray(hits) == 0
        else:
            ok = np.ones(ring.size, dtype=bool)
        this_ring: list[complex] = []
        for z, free in zip(ring, ok):
            if not free:
                continue
            near = np.array(this_ring[-1:] + this_ring[:1], dtype=complex)
            if _beta_min_to(z, near) >= r * (1 - _SLACK):
                this_ring.append(complex(z))
        accepted.extend(this_ring)
        arr = np.array(accepted, dtype=complex)
        tree = cKDTree(np.column_stack([arr.real, arr.imag])) if arr.size else None
    return np.array(accepted, dtype=complex)


def _count_in_balls(points: np.ndarray, nodes: np.ndarray, radius: float) -> np.ndarray:
    """For each node, the number of ``D(a_j, radius)`` containing it."""
    tree = cKDTree(np.column_stack([points.real, points.imag]))
    centers, radii = disk_image(nodes, radius)
    pts = np.column_stack([centers.real, centers.imag])
    # z in D(a, R) iff a in D(z, R)
    return np.asarray(tree.query_ball_point(pts, radii * (1 + _SLACK), return_length=True))


def packing_bound(r: float) -> int:
    """Upper bound on the points of an r-separated set inside one ``D(z, 4r)``.

    The balls ``D(a_j, r/2)`` are disjoint and lie in ``D(z, 4.5 r)``;
    hyperbolic area of ``D(z, t)`` is proportional to ``sinh(t)^2``.
    """
    return int(math.floor(math.sinh(4.5 * r) ** 2 / math.sinh(0.5 * r) ** 2))


def _multiplicity(points: np.ndarray, nodes: np.ndarray, r: float, r_max: float):
    """Overlap count on nodes whose ``4r``-ball lies inside the region.

    Falls back to :func:`packing_bound` when no such node exists.
    """
    beta_nodes = np.arctanh(np.abs(nodes))
    interior = beta_nodes + 4 * r <= math.atanh(r_max)
    if not np.any(interior):
        return min(packing_bound(r), int(points.size)), False
    counts = _count_in_balls(points, nodes[interior], 4 * r)
    return int(np.max(counts)), True


def build_lattice(r: float, r_max: float, grid_factor: int = 2,
                  max_candidates: int = MAX_CANDIDATES) -> BergmanLattice:
    """Greedy r-lattice on ``{|z| <= r_max}``.

    Candidates sit on rings of hyperbolic radius ``j h`` with
    ``h = r / grid_factor`` and hyperbolic angular spacing about ``h``; they
    are visited ring by ring from the origin and accepted when their Bergman
    distance to every accepted point is at least ``r``. The candidate grid
    doubles as the covering reference grid, so every reference node lies in
    some ``D(a_j, r)`` by construction (this is re-verified). The overlap
    count for ``D(a_j, 4r)`` is measured on reference nodes whose ``4r``-ball
    stays inside the region and compared against a twice-denser grid.

    Raises
    ------
    ResolutionError
        If the candidate grid would exceed ``max_candidates`` nodes.
    """
    if not 0 < r <= 10:
        raise ContractError("lattice radius must lie in (0, 10]")
    if not 0 < r_max < 1:
        raise ContractError("r_max must lie in (0, 1)")
    h = r / grid_factor
    need = _estimate_candidates(r_max, h / 2)
    if need > max_candidates:
        raise ResolutionError(
            f"r_max = {r_max} needs about {need} reference nodes at r = {r}; "
            f"the configured budget is {max_candidates}. Lower r_max or raise r.")
    rings = _candidate_rings(r_max, h)
    points = _greedy(rings, r)
    reference = np.concatenate(rings)
    covered = _count_in_balls(points, reference, r)
    mult, interior = _multiplicity(points, reference, r, r_max)
    dense = np.concatenate(_candidate_rings(r_max, h / 2))
    mult_dense, _ = _multiplicity(points, dense, r, r_max)
    cert = {
        "reference_nodes": int(reference.size),
        "covering_fraction": float(np.mean(covered > 0)),
        "min_separation": lattice_min_separation(points),
        "multiplicity_grid": mult,
        "multiplicity_dense_grid": mult_dense,
        "multiplicity_interior": interior,
    }
    return BergmanLattice(float(r), points, max(mult, mult_dense), float(r_max), cert)


def lattice_min_separation(points: np.ndarray, exhaustive: bool = False) -> float:
    """Smallest pairwise Bergman distance.

    By default neighbours are found with a KD-tree on Euclidean images of a
    large metric ball; ``exhaustive=True`` checks every pair.
    """
    n = points.size
    if n < 2:
        return math.inf
    best = math.inf
    if exhaustive:
        for start in range(0, n, 512):
            block = points[start:start + 512]
            rho = np.abs(block[:, None] - points[None, :]) / np.abs(
                1.0 - np.conj(block)[:, None] * points[None, :])
            idx = np.arange(start, start + block.size)
            rho[np.arange(block.size), idx] = np.inf
            best = min(best, float(np.min(rho)))
        return float(np.arctanh(best))
    tree = cKDTree(np.column_stack([points.real, points.imag]))
    # candidates within Bergman distance 3 of each point cover the nearest neighbour
    centers, radii = disk_image(points, 3.0)
    lists = tree.query_ball_point(np.column_stack([centers.real, centers.imag]), radii)
    for k, nb in enumerate(lists):
        nb = [j for j in nb if j != k]
        if nb:
            best = min(best, _beta_min_to(points[k], points[nb]))
    return best


def verify_lattice(lattice: BergmanLattice, reference: np.ndarray | None = None) -> dict:
    """Exhaustive separation check plus covering on a reference set."""
    pts = lattice.points
    sep = lattice_min_separation(pts, exhaustive=True)
    if reference is None:
        reference = np.concatenate(_candidate_rings(lattice.r_max, lattice.r / 2))
    covered = _count_in_balls(pts, reference, lattice.r)
    return {
        "min_separation": sep,
        "separated": bool(sep >= lattice.r * (1 - 1e-9)),
        "covering_fraction": float(np.mean(covered > 0)),
    }
