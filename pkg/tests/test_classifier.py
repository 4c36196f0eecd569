import math

import pytest
from pytest_check import check

from sigmak.metrics.classification import INADMISSIBLE, REPRESENTATIVES
from sigmak.utils.classifier import (
    ALL_LEAVES,
    CkExtension,
    ConicalDegeneracy,
    CylinderAsymptote,
    CylinderExact,
    DomainType,
    EuclideanEnd,
    HyperbolicComplete,
    LogCuspComplete,
    PeriodicComplete,
    PowerDegeneracy,
    RegularCenter,
    SecondDerivBlowup,
    VRLimit,
    classify,
    classify_flat,
    classify_state,
    endpoint_asymptotics,
    infer_xi_tt_sign,
)
from sigmak.utils.closed_forms import cylinder, hyperbolic
from sigmak.utils.errors import ContractError, InadmissibleError
from sigmak.utils.first_integral import critical_h, turning_points
from sigmak.utils.ode_engine import period
from sigmak.utils.schouten import ConeClass, LogState, MetricParams

P_5_2 = MetricParams.from_sign(5, 2, 1)
M_3_2 = MetricParams.from_sign(3, 2, -1)


@pytest.mark.parametrize("inputs, leaf", REPRESENTATIVES)
def test_representatives(inputs, leaf: str) -> None:
    n, k, s, h, branch, xi_tt_sign = inputs
    assert classify(MetricParams.from_sign(n, k, s), h, branch, xi_tt_sign).case_path == leaf


@pytest.mark.parametrize("inputs, constraint", INADMISSIBLE)
def test_inadmissible_inputs_name_the_constraint(inputs, constraint: str) -> None:
    n, k, s, h, branch = inputs
    with pytest.raises(InadmissibleError) as info:
        classify(MetricParams.from_sign(n, k, s), h, branch)
    assert info.value.constraint == constraint


@pytest.mark.parametrize(
    "n, k, s, h, branch, leaf, domain",
    [
        (4, 2, 1, 1.0, -1, "Thm1.II.3b", DomainType.PuncturedBall),
        (3, 2, 1, 1.0, -1, "Thm1.II.3c", DomainType.PuncturedBall),
        (7, 3, 1, -1.0, -1, "Thm1.III.1", DomainType.Annulus),
        (6, 3, 1, -1.0, -1, "Thm1.III.2", DomainType.PuncturedBall),
        (5, 3, 1, -1.0, -1, "Thm1.III.3", DomainType.PuncturedBall),
        (5, 3, -1, 0.0, -1, "Thm2.II.1", DomainType.Ball),
        (5, 3, -1, 1.0, -1, "Thm2.II.2", DomainType.Annulus),
        (7, 3, -1, -1.0, -1, "Thm2.II.3a", DomainType.Annulus),
        (5, 2, -1, 1.0, -1, "Thm2.III.1", DomainType.Annulus),
        (4, 2, -1, 1.0, -1, "Thm2.III.2", DomainType.PuncturedBall),
    ],
)
def test_leaves_and_domains(n: int, k: int, s: int, h: float, branch: int, leaf: str, domain: DomainType) -> None:
    solution_class = classify(MetricParams.from_sign(n, k, s), h, branch)
    assert solution_class.case_path == leaf
    assert solution_class.domain == domain
    assert leaf in ALL_LEAVES


def test_round_sphere_leaf() -> None:
    solution_class = classify(P_5_2, 0.0, 1)
    assert solution_class.domain == DomainType.FullSpace
    assert solution_class.closed_form == "round_sphere"
    assert solution_class.cone == ConeClass.GammaPlusK
    assert solution_class.representative_orientation is None
    assert solution_class.theorem_case == "round spherical metric on the whole space"


def test_blowup_annulus_endpoints() -> None:
    inner, outer = classify(P_5_2, -1.0, 1).endpoints
    assert inner == SecondDerivBlowup(v_r_limit=VRLimit.Zero, rate_exponent=-0.5)
    assert outer == SecondDerivBlowup(v_r_limit=VRLimit.SlopeTwo, rate_exponent=-0.5)


def test_threshold_is_the_cylinder() -> None:
    solution_class = classify(P_5_2, critical_h(P_5_2), 1)
    assert solution_class.case_path == "Thm1.I.3a"
    assert solution_class.endpoints == (CylinderExact(), CylinderExact())
    assert solution_class.closed_form == "cylinder"
    assert classify(P_5_2, 0.3, 1).endpoints == (PeriodicComplete(), PeriodicComplete())


def test_cone_exponents_in_critical_dimension() -> None:
    inner, outer = classify(MetricParams.from_sign(4, 2, 1), 0.25, 1).endpoints
    beta = math.sqrt(0.5)
    assert inner.exponent == pytest.approx(-2.0 * (1.0 - beta))
    assert outer.exponent == pytest.approx(-2.0 * (1.0 + beta))


def test_degenerate_ends() -> None:
    power = classify(P_5_2, 1.0, -1).endpoints[0]
    assert isinstance(power, PowerDegeneracy)
    assert power.exponent == pytest.approx(8.0)
    conical = classify(MetricParams.from_sign(4, 2, 1), 1.0, -1).endpoints[0]
    assert isinstance(conical, ConicalDegeneracy)
    assert conical.exponent == pytest.approx(2.0 * (math.sqrt(2.0) - 1.0))
    ck = classify(MetricParams.from_sign(3, 2, 1), 1.0, -1).endpoints[0]
    assert isinstance(ck, CkExtension)
    assert ck.holder == pytest.approx(0.5)
    assert ck.expansion_coefficient == pytest.approx(2.0)


@pytest.mark.parametrize("h, leaf", [(0.25, "Thm2.I.2a"), (1.0, "Thm2.I.2b"), (2.0, "Thm2.I.2c")])
def test_negative_sign_critical_dimension(h: float, leaf: str) -> None:
    solution_class = classify(MetricParams.from_sign(4, 2, -1), h, 1)
    assert solution_class.case_path == leaf
    if leaf == "Thm2.I.2b":
        assert solution_class.endpoints[0] == LogCuspComplete(exponents=(-2.0, -1.0))


@pytest.mark.parametrize(
    "xi_tt_sign, leaf, inner",
    [(-1, "Thm2.I.3b", CylinderAsymptote()), (0, "Thm2.I.3d", CylinderExact())],
)
def test_components_at_threshold(xi_tt_sign: int, leaf: str, inner) -> None:
    solution_class = classify(M_3_2, critical_h(M_3_2), 1, xi_tt_sign)
    assert solution_class.case_path == leaf
    assert solution_class.endpoints[0] == inner


def test_components_need_xi_tt_sign() -> None:
    assert classify(M_3_2, critical_h(M_3_2), 1, 1).endpoints[1] == CylinderAsymptote()
    assert classify(M_3_2, 3.0, 1, -1).case_path == "Thm2.I.3e"
    with pytest.raises(ContractError):
        classify(M_3_2, 3.0, 1)
    with pytest.raises(InadmissibleError) as info:
        classify(M_3_2, 3.0, 1, 0)
    assert info.value.constraint == "Thm 2 Case I.3 with h>h* requires ξ_tt ≠ 0"


@pytest.mark.parametrize(
    "params, h, branch, xi_tt_sign",
    [
        (MetricParams.from_sign(5, 1, 1), 0.0, 1, None),
        (MetricParams.from_sign(5, 2, 0), 0.0, 1, None),
        (P_5_2, math.nan, 1, None),
        (P_5_2, 0.0, 1, 2),
        (P_5_2, 0.0, 0, None),
    ],
)
def test_contract_violations(params: MetricParams, h: float, branch: int, xi_tt_sign) -> None:
    with pytest.raises(ContractError):
        classify(params, h, branch, xi_tt_sign)


def test_orientation_swaps_endpoints() -> None:
    solution_class = classify(P_5_2, 0.0, -1)
    assert solution_class.representative_orientation == -1
    assert solution_class.oriented(-1) == solution_class
    inverted = solution_class.oriented(1)
    assert inverted.inversion_applied
    assert inverted.endpoints == (HyperbolicComplete(), RegularCenter())


def test_classify_state_follows_direction_of_travel() -> None:
    state = hyperbolic(P_5_2, 1.0).state(-1.0)
    assert state.xi_t < -1.0
    along = classify_state(state, P_5_2)
    with check:
        assert along.case_path == "Thm1.II.1"
    with check:
        assert not along.inversion_applied
    reversed_state = LogState(t=state.t, xi=state.xi, xi_t=-state.xi_t)
    with check:
        assert classify_state(reversed_state, P_5_2).inversion_applied
    with check:
        assert classify_state(LogState(t=0.0, xi=0.0, xi_t=0.0), P_5_2).case_path == "Thm1.I.1"


def test_infer_xi_tt_sign() -> None:
    assert infer_xi_tt_sign(LogState(t=0.0, xi=0.0, xi_t=0.0), P_5_2) == 1
    assert infer_xi_tt_sign(LogState(t=0.0, xi=cylinder(P_5_2).xi_star, xi_t=0.0), P_5_2) == 0


def test_flat_linear_family() -> None:
    params = MetricParams.from_sign(5, 2, 0)
    flat = classify_flat(params, "linear", c=0.5)
    assert flat.case_path == "Thm3.1"
    assert flat.domain == DomainType.EntireSpace
    assert flat.endpoints == (RegularCenter(), EuclideanEnd())
    assert flat.cone == ConeClass.Indeterminate
    inverted = classify_flat(params, "linear", sign=1)
    assert inverted.inversion_applied
    assert inverted.endpoints == (EuclideanEnd(), RegularCenter())


def test_flat_sinh_and_cosh_families() -> None:
    params = MetricParams.from_sign(5, 2, 0)
    sinh = classify_flat(params, "sinh", t0=0.5)
    assert sinh.case_path == "Thm3.2"
    assert sinh.domain == DomainType.PuncturedBall
    assert sinh.endpoints == (EuclideanEnd(), PowerDegeneracy(exponent=8.0))
    assert sinh.parameters == {"t0": 0.5, "c": 0.0}
    assert classify_flat(params, "sinh", t0=0.5, sign=1).inversion_applied
    assert classify_flat(params, "cosh").domain == DomainType.PuncturedSpace
    assert classify_flat(MetricParams.from_sign(3, 2, 0), "cosh").domain == DomainType.FullSpace


def test_flat_family_contract() -> None:
    with pytest.raises(ContractError):
        classify_flat(P_5_2, "linear")
    with pytest.raises(ContractError):
        classify_flat(MetricParams.from_sign(5, 2, 0), "linear", sign=0)
    with pytest.raises(ContractError):
        classify_flat(MetricParams.from_sign(5, 2, 0), "tanh")


def test_periodic_template_reports_period() -> None:
    inner, _ = endpoint_asymptotics(classify(P_5_2, 0.3, 1), 0.3, P_5_2)
    lower, upper = turning_points(0.3, P_5_2)
    assert inner.extra["period"] == pytest.approx(period(0.3, P_5_2))
    assert (inner.extra["xi_min"], inner.extra["xi_max"]) == pytest.approx((lower, upper))


def test_blowup_and_cylinder_templates() -> None:
    inner, outer = endpoint_asymptotics(classify(P_5_2, -1.0, 1), -1.0, P_5_2)
    assert (inner.limit, outer.limit) == (0.0, 2.0)
    assert inner.exponent == pytest.approx(-0.5)
    h_star = critical_h(P_5_2)
    cylinder_end, _ = endpoint_asymptotics(classify(P_5_2, h_star, 1), h_star, P_5_2)
    assert cylinder_end.extra["xi_star"] == pytest.approx(cylinder(P_5_2).xi_star)
