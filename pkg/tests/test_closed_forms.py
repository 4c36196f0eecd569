import math

import numpy as np
import pytest

from sigmak.metrics.checks import sigma_residual
from sigmak.utils.closed_forms import (
    FlatCosh,
    FlatLinear,
    FlatSinh,
    cylinder,
    flat_coefficient,
    flat_family,
    hyperbolic,
    round_sphere,
)
from sigmak.utils.errors import ContractError, DegenerateCoefficientError, DomainError, InadmissibleError
from sigmak.utils.first_integral import conserved_h, critical_h, stationary_xi
from sigmak.utils.ode_engine import rhs_values
from sigmak.utils.schouten import MetricParams, sigma_k_log


@pytest.mark.parametrize("n, k", [(3, 2), (4, 2), (5, 2), (6, 3), (7, 3)])
@pytest.mark.parametrize("rho", [0.5, 1.0, 3.0])
def test_round_sphere_realizes_normalized_sigma(n: int, k: int, rho: float) -> None:
    params = MetricParams.from_sign(n, k, 1)
    form = round_sphere(rho)
    for t in form.grid(samples=25, span=8.0):
        assert sigma_k_log(form.state(t), params) == pytest.approx(params.sigma_value, rel=1e-10)


def test_round_sphere_radial_evaluators() -> None:
    form = round_sphere(2.0)
    r = np.array([0.1, 1.0, 2.0, 10.0])
    t = np.log(r)
    np.testing.assert_allclose(form.v(r), np.exp(form.xi(t) + t), rtol=1e-12)
    np.testing.assert_allclose(form.v_r(r), np.exp(form.xi(t)) * (form.xi_t(t) + 1.0), rtol=1e-12)
    np.testing.assert_allclose(form.v_rr(r), 0.5)


def test_round_sphere_lies_on_zero_level() -> None:
    params = MetricParams.from_sign(5, 2, 1)
    value = conserved_h(round_sphere().state(0.7), params)
    assert value.h == pytest.approx(0.0, abs=1e-12)
    assert value.branch == 1


@pytest.mark.parametrize("n, k, s", [(5, 2, 1), (7, 3, 1), (3, 2, -1), (5, 3, -1)])
def test_cylinder_is_the_threshold_equilibrium(n: int, k: int, s: int) -> None:
    params = MetricParams.from_sign(n, k, s)
    form = cylinder(params)
    h_star = critical_h(params)
    assert form.xi_star == pytest.approx(stationary_xi(h_star, params), abs=1e-12)
    assert conserved_h(form.state(0.0), params).h == pytest.approx(h_star, rel=1e-12)
    assert float(rhs_values(form.xi_star, 0.0, params)) == pytest.approx(0.0, abs=1e-12)
    np.testing.assert_allclose(sigma_residual(form, form.grid(11), params), 0.0, atol=1e-12)


def test_cylinder_rejects_other_levels() -> None:
    with pytest.raises(DomainError):
        cylinder(MetricParams.from_sign(5, 2, 1), h=0.3)


@pytest.mark.parametrize("n, k, s", [(5, 2, 1), (4, 2, 1), (5, 3, -1)])
def test_hyperbolic(n: int, k: int, s: int) -> None:
    params = MetricParams.from_sign(n, k, s)
    form = hyperbolic(params, r_plus=2.0)
    t = form.grid(samples=50, margin=1e-2, span=5.0)
    assert t.max() < form.t_plus
    assert np.max(sigma_residual(form, t, params)) < 1e-10
    value = conserved_h(form.state(float(t[10])), params)
    assert value.h == pytest.approx(0.0, abs=1e-10)
    assert value.branch == -1
    r = np.exp(t)
    np.testing.assert_allclose(form.v(r), np.exp(form.xi(t) + t), rtol=1e-10)


@pytest.mark.parametrize("n, k, s", [(5, 3, 1), (5, 2, -1)])
def test_hyperbolic_needs_gamma_minus_cone(n: int, k: int, s: int) -> None:
    with pytest.raises(InadmissibleError):
        hyperbolic(MetricParams.from_sign(n, k, s))


@pytest.mark.parametrize("n, k", [(5, 2), (3, 2), (7, 3)])
@pytest.mark.parametrize("selector", ["linear", "sinh", "cosh"])
def test_flat_families_have_zero_sigma(n: int, k: int, selector: str) -> None:
    params = MetricParams.from_sign(n, k, 0)
    form = flat_family(selector, t0=0.3, c=-0.2, params=params)
    t = form.grid(samples=40, margin=1e-2, span=6.0)
    assert np.max(sigma_residual(form, t, params)) < 1e-10
    a = 1.0 - n / (2 * k)
    if selector != "linear":
        np.testing.assert_allclose(form.xi_tt(t), a * (1.0 - form.xi_t(t) ** 2), rtol=1e-10, atol=1e-12)


def test_flat_family_selection() -> None:
    params = MetricParams.from_sign(5, 2, 0)
    assert isinstance(flat_family("linear", sign=1), FlatLinear)
    sinh = flat_family("sinh", t0=1.0, params=params, sign=1)
    assert isinstance(sinh, FlatSinh)
    assert sinh.domain == (1.0, math.inf)
    assert isinstance(flat_family("cosh", params=params), FlatCosh)
    assert flat_coefficient(params) == pytest.approx(-0.25)


def test_flat_family_errors() -> None:
    with pytest.raises(ContractError):
        flat_family("cosh")
    with pytest.raises(ContractError):
        flat_family("tanh", params=MetricParams.from_sign(5, 2, 0))
    with pytest.raises(DegenerateCoefficientError) as info:
        flat_family("sinh", params=MetricParams.from_sign(4, 2, 0))
    assert info.value.constraint == "Thm 3 families 2 and 3 require 2k ≠ n"
