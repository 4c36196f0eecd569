import math

import numpy as np
import pytest

from sigmak.utils.errors import BranchUndefinedError, ContractError, DomainError
from sigmak.utils.schouten import (
    ConeClass,
    LogState,
    MetricParams,
    RadialJet,
    branch_sign,
    cone_class,
    eigen_pair,
    eigen_pair_log,
    from_log,
    monotonicity_sign,
    normalization_shift,
    normalized_sigma,
    rescale_state,
    sigma_k_log,
    sigma_k_radial,
    sigma_l_log,
    sigma_l_values,
    sigma_values,
    to_log,
)


@pytest.fixture(params=[(3, 2), (4, 2), (5, 2), (5, 3), (6, 3), (7, 3)])
def params(request) -> MetricParams:
    n, k = request.param
    return MetricParams.from_sign(n, k, 1)


def round_sphere_jet(r: float, rho: float = 1.0) -> RadialJet:
    return RadialJet(r=r, v=(r * r + rho * rho) / (2 * rho), v_r=r / rho, v_rr=1.0 / rho)


@pytest.mark.parametrize("r", [1e-2, 0.3, 1.0, 4.0, 1e2])
def test_round_sphere_is_normalized(params: MetricParams, r: float) -> None:
    assert sigma_k_radial(round_sphere_jet(r), params) == pytest.approx(normalized_sigma(params), rel=1e-12)


def test_round_sphere_eigenvalues() -> None:
    jet = round_sphere_jet(0.7)
    pair = eigen_pair(jet)
    assert pair.lambda_ == pytest.approx(1.0 / (2.0 * jet.v**2), rel=1e-14)
    assert pair.mu == pytest.approx(0.0, abs=1e-14)


@pytest.mark.parametrize(
    "jet",
    [
        RadialJet(r=0.5, v=1.3, v_r=0.4, v_rr=-0.2),
        RadialJet(r=2.0, v=0.7, v_r=-0.1, v_rr=1.5),
        RadialJet(r=1.0, v=2.0, v_r=3.0, v_rr=0.0),
    ],
)
def test_log_variables_agree_with_radial(params: MetricParams, jet: RadialJet) -> None:
    state = to_log(jet)
    radial, log = eigen_pair(jet), eigen_pair_log(state)
    assert log.lambda_ == pytest.approx(radial.lambda_, rel=1e-12, abs=1e-14)
    assert log.mu == pytest.approx(radial.mu, rel=1e-12, abs=1e-14)
    assert sigma_k_log(state, params) == pytest.approx(sigma_k_radial(jet, params), rel=1e-10, abs=1e-12)
    back = from_log(state)
    assert (back.r, back.v, back.v_r, back.v_rr) == pytest.approx((jet.r, jet.v, jet.v_r, jet.v_rr), rel=1e-12)


def test_sigma_values_and_vectorized_form_agree(params: MetricParams) -> None:
    state = LogState(t=0.2, xi=-0.3, xi_t=0.4, xi_tt=-0.25)
    values = sigma_values(state, params)
    assert len(values) == params.k
    assert values[-1] == sigma_k_log(state, params)
    for l in range(1, params.k + 1):
        vectorized = sigma_l_values(np.array([state.xi]), np.array([state.xi_t]), np.array([state.xi_tt]), l, params)
        assert vectorized[0] == pytest.approx(sigma_l_log(state, l, params), rel=1e-14)


def test_sigma_needs_second_derivative(params: MetricParams) -> None:
    with pytest.raises(ContractError):
        sigma_k_log(LogState(t=0.0, xi=0.0, xi_t=0.5), params)
    with pytest.raises(ContractError):
        sigma_l_log(LogState(t=0.0, xi=0.0, xi_t=0.5, xi_tt=0.0), params.k + 1, params)


def test_cylinder_sign_follows_gap(params: MetricParams) -> None:
    sigma = sigma_k_log(LogState(t=0.0, xi=0.4, xi_t=0.0, xi_tt=0.0), params)
    assert np.sign(sigma) == np.sign(params.gap)


@pytest.mark.parametrize(
    "n, k, s, branch, expected",
    [
        (5, 2, 1, 1, ConeClass.GammaPlusK),
        (5, 2, 1, -1, ConeClass.GammaMinusK),
        (5, 3, 1, -1, ConeClass.Indeterminate),
        (5, 3, -1, -1, ConeClass.GammaMinusK),
        (5, 2, -1, -1, ConeClass.Indeterminate),
        (3, 2, -1, 1, ConeClass.Indeterminate),
    ],
)
def test_cone_class(n: int, k: int, s: int, branch: int, expected: ConeClass) -> None:
    assert cone_class(branch, MetricParams.from_sign(n, k, s)) == expected


def test_cone_class_needs_k_at_least_two() -> None:
    with pytest.raises(ContractError):
        cone_class(1, MetricParams.from_sign(5, 1, 1))


def test_branch_sign() -> None:
    assert branch_sign(LogState(t=0.0, xi=0.0, xi_t=0.5)) == 1
    assert branch_sign(LogState(t=0.0, xi=0.0, xi_t=-1.5)) == -1
    with pytest.raises(BranchUndefinedError):
        branch_sign(LogState(t=0.0, xi=0.0, xi_t=-1.0))


def test_monotonicity_sign() -> None:
    assert monotonicity_sign(LogState(t=0.0, xi=0.0, xi_t=-0.5)) == 1
    assert monotonicity_sign(LogState(t=0.0, xi=0.0, xi_t=-1.5)) == -1
    assert monotonicity_sign(LogState(t=0.0, xi=0.0, xi_t=-1.0)) == 0


@pytest.mark.parametrize("scale", [0.1, 1.0, 7.5])
def test_normalization_shift_rescales_sigma(params: MetricParams, scale: float) -> None:
    c = scale * normalized_sigma(params)
    shift = normalization_shift(c, params)
    assert shift == pytest.approx(math.log(scale) / (2 * params.k), abs=1e-15)
    state = LogState(t=0.1, xi=0.2, xi_t=0.3, xi_tt=-0.4)
    assert sigma_k_log(rescale_state(state, shift), params) == pytest.approx(
        scale * sigma_k_log(state, params), rel=1e-12
    )


def test_normalization_shift_rejects_wrong_sign(params: MetricParams) -> None:
    with pytest.raises(ContractError):
        normalization_shift(-1.0, params)
    with pytest.raises(ContractError):
        normalization_shift(0.0, params)


@pytest.mark.parametrize("n, k, s", [(2, 1, 1), (5, 0, 1), (5, 6, 1), (5, 2, 2)])
def test_metric_params_validation(n: int, k: int, s: int) -> None:
    with pytest.raises(ContractError):
        MetricParams.from_sign(n, k, s)


def test_non_finite_inputs_are_rejected() -> None:
    with pytest.raises(DomainError):
        LogState(t=0.0, xi=math.nan, xi_t=0.0)
    with pytest.raises(DomainError):
        RadialJet(r=1.0, v=-1.0, v_r=0.0, v_rr=0.0)
