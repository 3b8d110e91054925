import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bergman_lab.analytic import constant
from bergman_lab.carleson import (BOUNDED, DIVERGING, VANISHING, DiscreteMeasure, ball_masses,
                                  carleson_integral_statistic, carleson_statistic,
                                  combine_verdicts, sobolev_integral, sobolev_rigidity_check,
                                  statistic_at)
from bergman_lab.errors import ContractError, DomainError, RegimeError
from bergman_lab.geometry import disk_area


def test_area_ball_mass_is_exact():
    mu = DiscreteMeasure.weighted_area(0.0)
    for a in (0.0, 0.5, 0.9 + 0.05j):
        assert ball_masses(mu, [a], 1.0)[0] == pytest.approx(disk_area(a, 1.0), rel=1e-10)


def test_point_mass_ball_membership():
    mu = DiscreteMeasure.point_mass(0.0, 2.0)
    masses = ball_masses(mu, [0.0, math.tanh(0.9), math.tanh(1.1)], 1.0)
    np.testing.assert_array_equal(masses, [2.0, 2.0, 0.0])


def test_point_mass_vanishes(lattice_1):
    rep = carleson_statistic(DiscreteMeasure.point_mass(0.1j), 0, 2, 2, lattice_1)
    assert rep.verdict == VANISHING


def test_area_measure_statistic_is_bounded(lattice_1):
    rep = carleson_statistic(DiscreteMeasure.weighted_area(0.0), 0, 2, 2, lattice_1)
    assert rep.verdict == BOUNDED
    assert rep.to_dict()["params"]["lattice_points"] == len(lattice_1)


def test_regime_errors(lattice_1):
    mu = DiscreteMeasure.point_mass()
    with pytest.raises(RegimeError):
        carleson_statistic(mu, 0, 4, 2, lattice_1)
    with pytest.raises(RegimeError):
        carleson_integral_statistic(mu, 0, 2, 2)
    with pytest.raises(ContractError):
        carleson_statistic(mu, -1, 2, 2, lattice_1)


def test_measure_validation():
    with pytest.raises(ContractError):
        DiscreteMeasure(np.array([0.1]), np.array([-1.0]))
    with pytest.raises(DomainError):
        DiscreteMeasure(np.array([1.0]), np.array([1.0]))
    with pytest.raises(DomainError):
        ball_masses(DiscreteMeasure.point_mass(), [1.0], 1.0)


@settings(max_examples=15)
@given(st.floats(0.01, 100.0))
def test_statistic_scales_with_root_of_mass(factor):
    mu = DiscreteMeasure.point_mass(0.3, 1.0)
    centers = [0.0, 0.3, 0.5]
    base = statistic_at(mu, 1, 2, 4, centers, 1.0)
    scaled = statistic_at(mu.scaled(factor), 1, 2, 4, centers, 1.0)
    np.testing.assert_allclose(scaled, base * factor ** 0.25, rtol=1e-12)


def test_integral_statistic_verdicts():
    # q < p: the measure (1-|z|^2)^t dA with k = 0, p = 2, q = 1 needs t > -1
    assert carleson_integral_statistic(DiscreteMeasure.weighted_area(0.5), 0, 2, 1).verdict \
        == BOUNDED
    assert carleson_integral_statistic(DiscreteMeasure.weighted_area(-0.95), 0, 2, 1).verdict \
        == DIVERGING


def test_combine_verdicts():
    assert combine_verdicts([VANISHING, VANISHING]) == VANISHING
    assert combine_verdicts([VANISHING, BOUNDED]) == BOUNDED
    assert combine_verdicts([BOUNDED, DIVERGING]) == DIVERGING


def test_sobolev_integral_point_mass():
    mu = DiscreteMeasure.point_mass(0.5, 2.0)
    f = constant(3.0)
    assert sobolev_integral(mu, [constant(1.0)], f, 2) == pytest.approx(18.0)


def test_sobolev_rigidity_single_symbol(lattice_1):
    mu = DiscreteMeasure.weighted_area(0.5)
    rep = sobolev_rigidity_check(mu, [constant(1.0)], 2, 2, lattice_1, test_family_size=2)
    assert rep["agree"]
    assert rep["components"][0]["verdict"] == VANISHING
