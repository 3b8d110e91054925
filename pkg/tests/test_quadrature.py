import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bergman_lab.errors import ContractError
from bergman_lab.quadrature import (QuadratureRule, build_disk_rule, build_graded_rule,
                                    default_rule, graded_edges, integrate, sup_grid,
                                    tail_radius, with_boundary_tail)


def _moment(rule, a, b):
    z = rule.nodes
    return integrate(z ** a * np.conj(z) ** b, rule)


def test_disk_rule_area():
    rule = build_disk_rule(4, 8, 0.5)
    assert integrate(np.ones(rule.size), rule).real == pytest.approx(0.25, abs=1e-15)


@given(st.integers(0, 15), st.floats(0.1, 0.99))
def test_disk_rule_radial_moments_exact(k, r_cut):
    rule = build_disk_rule(10, 32, r_cut)
    # int_{|z|<R} |z|^2k dA = R^(2k+2) / (k+1)
    assert _moment(rule, k, k).real == pytest.approx(r_cut ** (2 * k + 2) / (k + 1), rel=1e-12)


@given(st.integers(0, 10), st.integers(1, 10))
def test_off_diagonal_moments_vanish(a, shift):
    rule = build_disk_rule(8, 32, 0.9)
    assert abs(_moment(rule, a + shift, a)) < 1e-14


def test_graded_rule_area_and_edges():
    rule = build_graded_rule(0.999)
    assert integrate(np.ones(rule.size), rule).real == pytest.approx(0.999 ** 2, rel=1e-13)
    edges = graded_edges(0.999)
    assert edges[0] == 0 and edges[-1] == 0.999 and edges == sorted(edges)


def test_tail_extrapolation_recovers_full_disk():
    rule = default_rule()
    assert rule.extrapolated
    assert integrate(np.ones(rule.size), rule).real == pytest.approx(1.0, rel=1e-12)
    # |z|^2k is linear-in-t to first order near the boundary; the tail catches it
    for k in (1, 5, 20):
        val = integrate(np.abs(rule.nodes) ** (2 * k), rule).real
        assert val == pytest.approx(1.0 / (k + 1), rel=1e-6)


def test_tail_radius():
    assert tail_radius(0.9999) == pytest.approx(0.999)


def test_extrapolation_is_idempotent():
    rule = with_boundary_tail(build_disk_rule(4, 16, 0.99))
    assert with_boundary_tail(rule) is rule


def test_contract_errors():
    rule = build_disk_rule(2, 4, 0.5)
    with pytest.raises(ContractError):
        integrate(np.ones(3), rule)
    with pytest.raises(ContractError):
        build_disk_rule(2, 4, 1.0)
    with pytest.raises(ContractError):
        QuadratureRule(np.array([0.1]), np.array([-1.0]), 0.5, 1)
    with pytest.raises(ContractError):
        QuadratureRule(np.array([1.0]), np.array([1.0]), 0.5, 1)


def test_sup_grid_rings():
    nodes, ring, gaps = sup_grid(levels=5)
    assert ring.max() == 5 and gaps.size == 6
    for m in range(1, 6):
        r = np.abs(nodes[ring == m])
        assert r.min() >= 1 - 2.0 ** -m and r.max() < 1 - 2.0 ** -(m + 1)


def test_sup_grid_horizon():
    nodes, _, _ = sup_grid(max_radius=0.9)
    assert np.abs(nodes).max() <= 0.9


def test_describe_reports_parameters():
    d = default_rule().describe()
    assert d["extrapolated"] and d["nodes"] == default_rule().size and "r_cut" in d
