import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bergman_lab.analytic import PowerKernel, TaylorPoly, constant, evaluate, monomial
from bergman_lab.errors import ContractError
from bergman_lab.ode import (OdeProblem, coefficient_agreement, equation_residual,
                             neumann_seed, neumann_solve, taylor_ode_oracle, zero_coefficients)


def test_problem_validation():
    with pytest.raises(ContractError):
        OdeProblem(2, (constant(0.0),), constant(0.0), (0.0, 0.0))
    with pytest.raises(ContractError):
        OdeProblem(1, (constant(0.0),), constant(0.0), ())
    with pytest.raises(ContractError):
        OdeProblem(0, (), constant(0.0), ())


def test_initial_polynomial():
    pr = OdeProblem(3, zero_coefficients(3), constant(0.0), (1.0, 2.0, 6.0))
    np.testing.assert_allclose(pr.initial_polynomial().coeffs, [1, 2, 3])


def test_seed_solves_zero_symbol_problem():
    # f'' = 2, f(0) = f'(0) = 0 gives z^2
    pr = OdeProblem(2, zero_coefficients(2), constant(2.0), (0.0, 0.0))
    assert coefficient_agreement(neumann_seed(pr), monomial(2), 5) == 0


@settings(max_examples=10)
@given(st.floats(-0.5, 0.5), st.floats(-2, 2))
def test_exponential_solution(c, f0):
    pr = OdeProblem(1, (constant(c),), constant(0.0), (f0,))
    rep = neumann_solve(pr, tol=1e-12)
    assert rep["status"] == "CONVERGED"
    exact = TaylorPoly([f0 * (-c) ** k / math.factorial(k) for k in range(26)])
    assert coefficient_agreement(rep["solution"], exact, 25) <= 1e-10


def test_oracle_matches_solver_second_order():
    pr = OdeProblem(2, (TaylorPoly([0.1, 0.2]), constant(-0.3)), TaylorPoly([1, 1]), (1.0, -1.0))
    rep = neumann_solve(pr)
    assert rep["status"] == "CONVERGED"
    assert coefficient_agreement(rep["solution"], taylor_ode_oracle(pr, 30), 30) <= 1e-10
    assert rep["residual"] <= 1e-11 and rep["residual_ok"]


def test_oracle_is_exact_on_polynomial_example():
    # f' = 1 + z with f(0) = 0: f = z + z^2 / 2
    pr = OdeProblem(1, (constant(0.0),), TaylorPoly([1, 1]), (0.0,))
    np.testing.assert_allclose(taylor_ode_oracle(pr, 4).coeffs, [0, 1, 0.5, 0, 0])


def test_residual_of_exact_solution_is_small():
    pr = OdeProblem(1, (constant(-1.0),), constant(0.0), (1.0,))
    exp = TaylorPoly([1 / math.factorial(k) for k in range(40)])
    assert equation_residual(pr, exp) < 1e-12


def test_singular_coefficient_converges():
    pr = OdeProblem(1, (PowerKernel(1.0, 0, 1.0, scale=0.3),), constant(1.0), (0.0,))
    rep = neumann_solve(pr)
    assert rep["status"] == "CONVERGED" and rep["residual"] <= 1e-11


def test_large_coefficient_diverges():
    pr = OdeProblem(1, (constant(50.0),), constant(1.0), (0.0,))
    rep = neumann_solve(pr, max_iter=10)
    assert rep["status"] == "DIVERGED" and rep["sustained_expansion"]
    assert "solution" not in rep
    assert min(rep["contraction_ratios"][-5:]) > 1


def test_report_contents():
    pr = OdeProblem(1, (constant(0.1),), constant(0.0), (1.0,))
    rep = neumann_solve(pr)
    assert rep["iterations"] == len(rep["distances"])
    assert set(rep["solution_norms"]) and rep["bloch_norms"]
    assert abs(evaluate(rep["solution"], 0.5) - math.exp(-0.05)) < 1e-12
