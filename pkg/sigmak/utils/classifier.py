"""
Classification of radial solutions by (n, k, s, branch, h) and, where the level set has several components,
the sign of xi_tt.

Endpoints are reported as (inner, outer) along a representative solution. When xi_t keeps its sign along
the solution the representative runs with xi_t < 0; a solution running the other way is its inversion
|x| -> 1/|x| and has the endpoints swapped. Solutions through a turning point are their own inversions up to
a translation in t.
"""

import logging
import math
from dataclasses import asdict, dataclass, field, replace
from enum import Enum
from typing import Dict, Optional, Tuple

from sigmak.utils.closed_forms import flat_coefficient
from sigmak.utils.errors import ContractError, InadmissibleError
from sigmak.utils.first_integral import (
    compare_h,
    conserved_h,
    critical_h,
    h_sign,
    require_admissible,
    stationary_xi,
    turning_points,
)
from sigmak.utils.ode_engine import period, rhs_values
from sigmak.utils.schouten import ConeClass, LogState, MetricParams, cone_class

logger = logging.getLogger(__name__)

XI_TT_ZERO_TOL = 1e-9


class DomainType(str, Enum):
    FullSpace = "FullSpace"
    PuncturedSpace = "PuncturedSpace"
    Ball = "Ball"
    PuncturedBall = "PuncturedBall"
    Annulus = "Annulus"
    EntireSpace = "EntireSpace"


class VRLimit(str, Enum):
    Zero = "v_r -> 0"
    SlopeTwo = "r v_r / v -> 2"


@dataclass(frozen=True)
class EndpointBehavior:
    @property
    def kind(self) -> str:
        return type(self).__name__

    def payload(self) -> dict:
        return {key: (value.name if isinstance(value, Enum) else value) for key, value in asdict(self).items()}


@dataclass(frozen=True)
class RoundSphereClosure(EndpointBehavior):
    pass


@dataclass(frozen=True)
class SecondDerivBlowup(EndpointBehavior):
    v_r_limit: VRLimit
    rate_exponent: float


@dataclass(frozen=True)
class PeriodicComplete(EndpointBehavior):
    pass


@dataclass(frozen=True)
class ConeIncomplete(EndpointBehavior):
    exponent: float


@dataclass(frozen=True)
class CkExtension(EndpointBehavior):
    holder: float
    expansion_coefficient: float


@dataclass(frozen=True)
class HyperbolicComplete(EndpointBehavior):
    pass


@dataclass(frozen=True)
class LogComplete(EndpointBehavior):
    pass


@dataclass(frozen=True)
class PowerDegeneracy(EndpointBehavior):
    exponent: float


@dataclass(frozen=True)
class ConicalDegeneracy(EndpointBehavior):
    exponent: float


@dataclass(frozen=True)
class CylinderAsymptote(EndpointBehavior):
    pass


@dataclass(frozen=True)
class CylinderExact(EndpointBehavior):
    pass


@dataclass(frozen=True)
class LogCuspComplete(EndpointBehavior):
    exponents: Tuple[float, float]


@dataclass(frozen=True)
class RegularCenter(EndpointBehavior):
    """The metric extends smoothly over the endpoint (v tends to a positive constant with v_r -> 0)."""


@dataclass(frozen=True)
class EuclideanEnd(EndpointBehavior):
    """A complete flat end, or its image under inversion."""


ENDPOINT_KINDS = {
    cls.__name__: cls
    for cls in (
        RoundSphereClosure,
        SecondDerivBlowup,
        PeriodicComplete,
        ConeIncomplete,
        CkExtension,
        HyperbolicComplete,
        LogComplete,
        PowerDegeneracy,
        ConicalDegeneracy,
        CylinderAsymptote,
        CylinderExact,
        LogCuspComplete,
        RegularCenter,
        EuclideanEnd,
    )
}


@dataclass(frozen=True)
class SolutionClass:
    case_path: str
    domain: DomainType
    endpoints: Tuple[EndpointBehavior, EndpointBehavior]
    cone: ConeClass
    closed_form: Optional[str] = None
    representative_orientation: Optional[int] = None
    inversion_applied: bool = False
    parameters: Dict[str, float] = field(default_factory=dict, compare=False)

    @property
    def theorem_case(self) -> str:
        return LEAF_DESCRIPTIONS.get(self.case_path, self.case_path)

    def oriented(self, xi_t_sign: Optional[int]) -> "SolutionClass":
        """The class as seen along a solution whose xi_t has the given sign."""
        if self.representative_orientation is None or xi_t_sign is None or xi_t_sign == 0:
            return self
        if xi_t_sign == self.representative_orientation:
            return replace(self, inversion_applied=False)
        return replace(self, endpoints=(self.endpoints[1], self.endpoints[0]), inversion_applied=True)


LEAF_DESCRIPTIONS = {
    "Thm1.I.1": "round spherical metric on the whole space",
    "Thm1.I.2": "annulus with second-derivative blow-up at both ends",
    "Thm1.I.3a": "periodic solutions on the punctured space (the cylinder at h = h*)",
    "Thm1.I.3b": "incomplete cone-like metric with finite volume at both ends",
    "Thm1.I.3c": "C^{2-n/k} extension over 0 and infinity",
    "Thm1.II.1": "hyperbolic metric on a ball",
    "Thm1.II.2": "annulus with blow-up at the inner end and a complete outer end",
    "Thm1.II.3a": "annulus with a power degeneracy at the inner end",
    "Thm1.II.3b": "punctured ball with a conical degeneracy at 0",
    "Thm1.II.3c": "punctured ball with a C^{2-n/k} extension over 0",
    "Thm1.III.1": "annulus with a power degeneracy and blow-up",
    "Thm1.III.2": "punctured ball with a conical degeneracy and blow-up",
    "Thm1.III.3": "punctured ball with a C^{2-n/k} extension and blow-up",
    "Thm2.I.1": "annulus with second-derivative blow-up at both ends",
    "Thm2.I.2a": "punctured ball with an incomplete cone end at 0",
    "Thm2.I.2b": "punctured ball with a complete logarithmic cusp at 0",
    "Thm2.I.2c": "annulus with second-derivative blow-up at both ends",
    "Thm2.I.3a": "punctured ball with a C^{2-n/k} extension over 0",
    "Thm2.I.3b": "punctured ball asymptotic to the cylinder at 0",
    "Thm2.I.3c": "punctured space asymptotic to the cylinder at infinity",
    "Thm2.I.3d": "the cylindrical metric",
    "Thm2.I.3e": "annulus with second-derivative blow-up at both ends",
    "Thm2.I.3f": "C^{2-n/k} extension over 0 and infinity",
    "Thm2.II.1": "hyperbolic metric on a ball",
    "Thm2.II.2": "annulus with blow-up at the inner end and a complete outer end",
    "Thm2.II.3a": "annulus with a power degeneracy at the inner end",
    "Thm2.II.3b": "punctured ball with a conical degeneracy at 0",
    "Thm2.II.3c": "punctured ball with a C^{2-n/k} extension over 0",
    "Thm2.III.1": "annulus with a power degeneracy and blow-up",
    "Thm2.III.2": "punctured ball with a conical degeneracy and blow-up",
    "Thm2.III.3": "punctured ball with a C^{2-n/k} extension and blow-up",
    "Thm3.1": "the flat metric (xi_t = -1) or its inversion (xi_t = +1)",
    "Thm3.2": "sinh family with a power degeneracy at r0 = e^t0",
    "Thm3.3": "cosh family",
}

ALL_LEAVES = tuple(path for path in LEAF_DESCRIPTIONS if not path.startswith("Thm3"))
FLAT_LEAVES = ("Thm3.1", "Thm3.2", "Thm3.3")


def _blowup(params: MetricParams, limit: VRLimit) -> SecondDerivBlowup:
    return SecondDerivBlowup(v_r_limit=limit, rate_exponent=-1.0 + 1.0 / params.k)


def _degenerate_end(params: MetricParams, root: float, branch: int) -> EndpointBehavior:
    """The end where xi -> +infinity on branch -1, sorted by the sign of n - 2k."""
    n, k = params.n, params.k
    if params.gap > 0:
        return PowerDegeneracy(exponent=4 * k / (n - 2 * k))
    if params.gap == 0:
        return ConicalDegeneracy(exponent=2.0 * (math.sqrt(1.0 + root) - 1.0))
    return _ck_end(params, root, branch)


def _ck_end(params: MetricParams, root: float, branch: int) -> CkExtension:
    n, k = params.n, params.k
    return CkExtension(holder=2.0 - n / k, expansion_coefficient=-branch * root * k / (2 * k - n))


def _leaf(
    case_path: str,
    domain: DomainType,
    inner: EndpointBehavior,
    outer: EndpointBehavior,
    cone: ConeClass,
    turning: bool,
    closed_form: Optional[str] = None,
) -> SolutionClass:
    return SolutionClass(
        case_path=case_path,
        domain=domain,
        endpoints=(inner, outer),
        cone=cone,
        closed_form=closed_form,
        representative_orientation=None if turning else -1,
    )


def _classify_positive(params: MetricParams, h: float, branch: int, cone: ConeClass) -> SolutionClass:
    n, k = params.n, params.k
    sign_h = h_sign(h)
    root = abs(h) ** (1.0 / k)
    if branch == 1:
        if sign_h == 0:
            return _leaf(
                "Thm1.I.1", DomainType.FullSpace, RoundSphereClosure(), RoundSphereClosure(), cone, True,
                closed_form="round_sphere",
            )
        if sign_h < 0:
            return _leaf(
                "Thm1.I.2", DomainType.Annulus, _blowup(params, VRLimit.Zero), _blowup(params, VRLimit.SlopeTwo),
                cone, True,
            )
        if params.gap > 0:
            if compare_h(h, critical_h(params)) == 0:
                leaf = _leaf(
                    "Thm1.I.3a", DomainType.PuncturedSpace, CylinderExact(), CylinderExact(), cone, True,
                    closed_form="cylinder",
                )
                return replace(leaf, representative_orientation=None)
            return _leaf("Thm1.I.3a", DomainType.PuncturedSpace, PeriodicComplete(), PeriodicComplete(), cone, True)
        if params.gap == 0:
            beta = math.sqrt(1.0 - root)
            return _leaf(
                "Thm1.I.3b",
                DomainType.PuncturedSpace,
                ConeIncomplete(exponent=-2.0 * (1.0 - beta)),
                ConeIncomplete(exponent=-2.0 * (1.0 + beta)),
                cone,
                True,
            )
        end = _ck_end(params, root, 1)
        return _leaf("Thm1.I.3c", DomainType.PuncturedSpace, end, end, cone, True)
    if k % 2 == 0:
        if sign_h == 0:
            return _leaf(
                "Thm1.II.1", DomainType.Ball, RegularCenter(), HyperbolicComplete(), cone, False,
                closed_form="hyperbolic",
            )
        if sign_h < 0:
            return _leaf("Thm1.II.2", DomainType.Annulus, _blowup(params, VRLimit.Zero), LogComplete(), cone, False)
        sub = "a" if params.gap > 0 else ("b" if params.gap == 0 else "c")
        domain = DomainType.Annulus if params.gap > 0 else DomainType.PuncturedBall
        return _leaf(f"Thm1.II.3{sub}", domain, _degenerate_end(params, root, -1), LogComplete(), cone, False)
    sub = "1" if params.gap > 0 else ("2" if params.gap == 0 else "3")
    domain = DomainType.Annulus if params.gap > 0 else DomainType.PuncturedBall
    return _leaf(
        f"Thm1.III.{sub}", domain, _degenerate_end(params, root, -1), _blowup(params, VRLimit.Zero), cone, False
    )


def _classify_negative(
    params: MetricParams, h: float, branch: int, xi_tt_sign: Optional[int], cone: ConeClass
) -> SolutionClass:
    k = params.k
    sign_h = h_sign(h)
    root = abs(h) ** (1.0 / k)
    zero, slope_two = _blowup(params, VRLimit.Zero), _blowup(params, VRLimit.SlopeTwo)
    if branch == 1:
        if params.gap > 0:
            return _leaf("Thm2.I.1", DomainType.Annulus, slope_two, zero, cone, True)
        if params.gap == 0:
            versus_one = compare_h(h, 1.0)
            if versus_one < 0:
                beta = math.sqrt(1.0 - root)
                return _leaf(
                    "Thm2.I.2a", DomainType.PuncturedBall, ConeIncomplete(exponent=-2.0 * (1.0 - beta)), zero,
                    cone, False,
                )
            if versus_one == 0:
                return _leaf(
                    "Thm2.I.2b", DomainType.PuncturedBall, LogCuspComplete(exponents=(-2.0, -2.0 / k)), zero,
                    cone, False,
                )
            return _leaf("Thm2.I.2c", DomainType.Annulus, slope_two, zero, cone, True)
        ck = _ck_end(params, root, 1)
        versus_star = compare_h(h, critical_h(params))
        if versus_star < 0:
            return _leaf("Thm2.I.3a", DomainType.PuncturedBall, ck, zero, cone, False)
        if xi_tt_sign is None:
            raise ContractError("the sign of xi_tt is required for s=-1, 2k>n, branch +1 and h ≥ h*")
        if versus_star == 0:
            if xi_tt_sign < 0:
                return _leaf("Thm2.I.3b", DomainType.PuncturedBall, CylinderAsymptote(), zero, cone, False)
            if xi_tt_sign > 0:
                return _leaf("Thm2.I.3c", DomainType.PuncturedSpace, ck, CylinderAsymptote(), cone, False)
            leaf = _leaf(
                "Thm2.I.3d", DomainType.PuncturedSpace, CylinderExact(), CylinderExact(), cone, True,
                closed_form="cylinder",
            )
            return leaf
        if xi_tt_sign == 0:
            raise InadmissibleError("Thm 2 Case I.3 with h>h* requires ξ_tt ≠ 0", f"h={h:g}")
        if xi_tt_sign < 0:
            return _leaf("Thm2.I.3e", DomainType.Annulus, slope_two, zero, cone, True)
        return _leaf("Thm2.I.3f", DomainType.PuncturedSpace, ck, ck, cone, True)
    if k % 2 == 1:
        if sign_h == 0:
            return _leaf(
                "Thm2.II.1", DomainType.Ball, RegularCenter(), HyperbolicComplete(), cone, False,
                closed_form="hyperbolic",
            )
        if sign_h > 0:
            return _leaf("Thm2.II.2", DomainType.Annulus, zero, LogComplete(), cone, False)
        sub = "a" if params.gap > 0 else ("b" if params.gap == 0 else "c")
        domain = DomainType.Annulus if params.gap > 0 else DomainType.PuncturedBall
        return _leaf(f"Thm2.II.3{sub}", domain, _degenerate_end(params, root, -1), LogComplete(), cone, False)
    sub = "1" if params.gap > 0 else ("2" if params.gap == 0 else "3")
    domain = DomainType.Annulus if params.gap > 0 else DomainType.PuncturedBall
    return _leaf(f"Thm2.III.{sub}", domain, _degenerate_end(params, root, -1), zero, cone, False)


def classify(params: MetricParams, h: float, branch: int, xi_tt_sign: Optional[int] = None) -> SolutionClass:
    if params.k < 2:
        raise ContractError(f"the classification needs k >= 2, got k={params.k}")
    if params.s == 0:
        raise ContractError("sigma_k = 0 solutions are classified by classify_flat")
    if not math.isfinite(h):
        raise ContractError(f"h must be finite, got {h}")
    if xi_tt_sign is not None and xi_tt_sign not in (-1, 0, 1):
        raise ContractError(f"xi_tt sign must be -1, 0 or +1, got {xi_tt_sign}")
    require_admissible(params, h, branch)
    cone = cone_class(branch, params)
    if params.s == 1:
        solution_class = _classify_positive(params, h, branch, cone)
    else:
        solution_class = _classify_negative(params, h, branch, xi_tt_sign, cone)
    logger.debug(f"{params}, h={h:g}, branch {branch:+d} -> {solution_class.case_path}")
    return solution_class


def classify_flat(
    params: MetricParams, family_selector: str, t0: float = 0.0, c: float = 0.0, sign: int = -1
) -> SolutionClass:
    """
    Classify the sigma_k = 0 solutions. `sign` is xi_t for the linear family and selects the piece t < t0
    (-1) or t > t0 (+1) of the sinh family.
    """
    if params.s != 0:
        raise ContractError(f"classify_flat needs s=0, got {params}")
    if sign not in (-1, 1):
        raise ContractError(f"sign must be +1 or -1, got {sign}")
    cone = ConeClass.Indeterminate
    parameters = {"t0": t0, "c": c}
    if family_selector == "linear":
        solution_class = SolutionClass(
            case_path="Thm3.1",
            domain=DomainType.EntireSpace,
            endpoints=(RegularCenter(), EuclideanEnd()),
            cone=cone,
            closed_form="flat_linear",
            representative_orientation=-1,
            parameters={"c": c},
        )
        return solution_class.oriented(sign)
    if family_selector == "sinh":
        a = flat_coefficient(params)
        degeneracy = PowerDegeneracy(exponent=-2.0 / a)
        solution_class = SolutionClass(
            case_path="Thm3.2",
            domain=DomainType.Ball if a > 0 else DomainType.PuncturedBall,
            endpoints=(RegularCenter() if a > 0 else EuclideanEnd(), degeneracy),
            cone=cone,
            closed_form="flat_sinh",
            representative_orientation=-1 if a > 0 else 1,
            parameters=parameters,
        )
        # on the piece t > t0, coth(a (t - t0)) has the opposite sign
        piece_orientation = solution_class.representative_orientation * (1 if sign < 0 else -1)
        return solution_class.oriented(piece_orientation)
    if family_selector == "cosh":
        a = flat_coefficient(params)
        end = RegularCenter() if a > 0 else EuclideanEnd()
        return SolutionClass(
            case_path="Thm3.3",
            domain=DomainType.FullSpace if a > 0 else DomainType.PuncturedSpace,
            endpoints=(end, end),
            cone=cone,
            closed_form="flat_cosh",
            parameters=parameters,
        )
    raise ContractError(f"unknown flat family {family_selector!r}, expected linear, sinh or cosh")


def infer_xi_tt_sign(state: LogState, params: MetricParams) -> int:
    """sign(xi_tt) from the equation, with |xi_tt| <= 1e-9 at |xi_t| <= 1e-9 counted as the equilibrium."""
    xi_tt = float(rhs_values(state.xi, state.xi_t, params))
    if abs(xi_tt) <= XI_TT_ZERO_TOL and abs(state.xi_t) <= XI_TT_ZERO_TOL:
        return 0
    return 1 if xi_tt > 0 else -1


def classify_state(state: LogState, params: MetricParams) -> SolutionClass:
    """Classify the solution through a state, oriented along its direction of travel."""
    value = conserved_h(state, params, check=False)
    solution_class = classify(params, value.h, value.branch, infer_xi_tt_sign(state, params))
    orientation = 0 if state.xi_t == 0 else (1 if state.xi_t > 0 else -1)
    return solution_class.oriented(orientation)


@dataclass(frozen=True)
class ExpansionTemplate:
    kind: str
    formula: str
    exponent: Optional[float] = None
    coefficient: Optional[float] = None
    limit: Optional[float] = None
    extra: Dict[str, float] = field(default_factory=dict)


def _template(endpoint: EndpointBehavior, h: float, params: MetricParams) -> ExpansionTemplate:
    kind = endpoint.kind
    if isinstance(endpoint, SecondDerivBlowup):
        limit = 0.0 if endpoint.v_r_limit == VRLimit.Zero else 2.0
        form = "|v_rr| ~ C |r - r*|^(-1+1/k), r v_r / v -> limit"
        return ExpansionTemplate(kind, form, endpoint.rate_exponent, limit=limit)
    if isinstance(endpoint, PeriodicComplete):
        extra = {}
        if h_sign(h) > 0 and compare_h(h, critical_h(params)) < 0:
            lower, upper = turning_points(h, params)
            extra = {"period": period(h, params), "xi_min": lower, "xi_max": upper}
        return ExpansionTemplate(kind, "xi(t + T) = xi(t)", extra=extra)
    if isinstance(endpoint, ConeIncomplete):
        return ExpansionTemplate(kind, "v^-2 ~ |x|^exponent", endpoint.exponent)
    if isinstance(endpoint, CkExtension):
        return ExpansionTemplate(
            kind, "v^-2 = rho^-2 {1 + coefficient (|x|/rho)^(2-n/k) + ...}", endpoint.holder,
            coefficient=endpoint.expansion_coefficient,
        )
    if isinstance(endpoint, HyperbolicComplete):
        return ExpansionTemplate(kind, "v^-2 ~ (r+ - r)^-2", -2.0)
    if isinstance(endpoint, LogComplete):
        return ExpansionTemplate(kind, "v^-2 ~ |x|^-2 (ln(r+/|x|))^-2", -2.0)
    if isinstance(endpoint, PowerDegeneracy):
        return ExpansionTemplate(kind, "v^-2 ~ (r - r-)^exponent", endpoint.exponent)
    if isinstance(endpoint, ConicalDegeneracy):
        return ExpansionTemplate(kind, "v^-2 ~ |x|^exponent", endpoint.exponent)
    if isinstance(endpoint, (CylinderAsymptote, CylinderExact)):
        xi_star = stationary_xi(critical_h(params), params)
        return ExpansionTemplate(kind, "v^-2 -> e^(-2 xi*) |x|^-2", -2.0, extra={"xi_star": xi_star})
    if isinstance(endpoint, LogCuspComplete):
        return ExpansionTemplate(
            kind, "v^-2 ~ |x|^-2 (ln 1/|x|)^(-2/k)", endpoint.exponents[0],
            extra={"log_exponent": endpoint.exponents[1]},
        )
    if isinstance(endpoint, RoundSphereClosure):
        return ExpansionTemplate(kind, "v^-2 = (2 rho / (|x|^2 + rho^2))^2")
    if isinstance(endpoint, RegularCenter):
        return ExpansionTemplate(kind, "v -> v0 > 0, v_r -> 0", 0.0)
    return ExpansionTemplate(kind, "g ~ |dx|^2 up to inversion", 0.0)


def endpoint_asymptotics(
    solution_class: SolutionClass, h: float, params: MetricParams
) -> Tuple[ExpansionTemplate, ExpansionTemplate]:
    inner, outer = solution_class.endpoints
    return (_template(inner, h, params), _template(outer, h, params))
