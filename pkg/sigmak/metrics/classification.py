"""
Classification metric: coverage of the default sweep grid, agreement between predicted leaves and integrated
endpoint behavior for curated representatives, and rejection of inadmissible combinations.
"""

from typing import Any, Dict, List, Optional, Set, Tuple

from sigmak.metrics.checks import CheckList, relative_error, tight_config
from sigmak.utils.classifier import (
    EndpointBehavior,
    HyperbolicComplete,
    LogComplete,
    PeriodicComplete,
    SecondDerivBlowup,
    VRLimit,
    classify,
)
from sigmak.utils.errors import DomainError, InadmissibleError, SigmaKError
from sigmak.utils.first_integral import sample_state
from sigmak.utils.ode_engine import Escape, NullPoint, SpanExhausted, Trajectory, integrate, null_point_fit
from sigmak.utils.schouten import MetricParams
from sigmak.utils.sweep import build_grid, missing_leaves, run_cell

# (n, k, s, h, branch, xi_tt sign) -> leaf
REPRESENTATIVES: Tuple[Tuple[Tuple[int, int, int, float, int, Optional[int]], str], ...] = (
    ((5, 2, 1, 0.0, 1, None), "Thm1.I.1"),
    ((5, 2, 1, -1.0, 1, None), "Thm1.I.2"),
    ((5, 2, 1, 0.3, 1, None), "Thm1.I.3a"),
    ((4, 2, 1, 0.5, 1, None), "Thm1.I.3b"),
    ((3, 2, 1, 1.0, 1, None), "Thm1.I.3c"),
    ((5, 2, 1, 0.0, -1, None), "Thm1.II.1"),
    ((5, 2, 1, -1.0, -1, None), "Thm1.II.2"),
    ((5, 2, 1, 1.0, -1, None), "Thm1.II.3a"),
    ((7, 3, 1, -1.0, -1, None), "Thm1.III.1"),
    ((5, 2, -1, 1.0, 1, None), "Thm2.I.1"),
    ((3, 2, -1, 1.0, 1, None), "Thm2.I.3a"),
    ((3, 2, -1, 3.0, 1, 1), "Thm2.I.3f"),
)

INADMISSIBLE = (
    ((5, 3, 1, 0.5, -1), "Thm 1 Case III requires h<0"),
    ((5, 2, 1, 0.6, 1), "Thm 1 Case I.3(a) requires h ≤ h*"),
    ((4, 2, 1, 1.5, 1), "Thm 1 Case I.3(b) requires h<1"),
    ((5, 2, -1, -1.0, 1), "Thm 2 Case I requires h>0"),
    ((5, 2, -1, -1.0, -1), "Thm 2 Case III requires h>0"),
)


def expected_terminal(endpoint: EndpointBehavior) -> Tuple[Set[str], Optional[int]]:
    """Event kinds that may end the integration toward this endpoint, and the expected sign of xi or null side."""
    if isinstance(endpoint, SecondDerivBlowup):
        return {"NullPoint"}, -1 if endpoint.v_r_limit == VRLimit.Zero else 1
    if isinstance(endpoint, (HyperbolicComplete, LogComplete)):
        return {"Escape"}, -1
    if isinstance(endpoint, PeriodicComplete):
        return {"SpanExhausted"}, None
    return {"Escape", "SpanExhausted"}, 1


def _terminal_event(trajectory: Trajectory, direction: int):
    for event in trajectory.events:
        if isinstance(event, (NullPoint, Escape, SpanExhausted)) and event.direction == direction:
            return event
    return None


def endpoint_agreement(trajectory: Trajectory, endpoints: Tuple[EndpointBehavior, EndpointBehavior]) -> List[str]:
    """Mismatches between integrated ends (backward = inner, forward = outer) and the predicted endpoints."""
    problems = []
    for direction, endpoint in ((-1, endpoints[0]), (1, endpoints[1])):
        kinds, orientation = expected_terminal(endpoint)
        event = _terminal_event(trajectory, direction)
        if event is None or event.kind not in kinds:
            found = None if event is None else event.kind
            problems.append(f"direction {direction:+d}: expected {sorted(kinds)} for {endpoint.kind}, found {found}")
            continue
        if isinstance(event, NullPoint):
            if event.side != orientation:
                problems.append(f"direction {direction:+d}: null point side {event.side:+d} for {endpoint.kind}")
                continue
            try:
                fit = null_point_fit(trajectory, event)
            except DomainError as e:
                problems.append(f"direction {direction:+d}: {e}")
                continue
            if relative_error(fit.slope, fit.expected_slope) > 0.05:
                problems.append(f"direction {direction:+d}: blow-up slope {fit.slope:.4f}")
        elif isinstance(event, Escape) and orientation is not None and (event.xi > 0) != (orientation > 0):
            problems.append(f"direction {direction:+d}: escape toward xi={event.xi:.3g}")
    if isinstance(endpoints[0], PeriodicComplete) and len(trajectory.events_of("TurningPoint")) < 2:
        problems.append("periodic solution without repeated turning points")
    return problems


def compute_classification_metric(seed: int = 0, tolerance_scale: float = 1.0) -> Dict[str, Any]:
    checks = CheckList("classification", tolerance_scale)
    cells = build_grid()
    results = [run_cell(cell, tight_config(), spot_integration=False) for cell in cells]
    missing = missing_leaves(results)
    checks.check("default grid covers every leaf", len(missing), 1.0, ", ".join(missing) or "all leaves reached")
    unclassified = [r.index for r in results if r.status not in ("classified", "inadmissible")]
    checks.check("every grid cell is classified or flagged", len(unclassified), 1.0, str(unclassified[:10]))

    for (n, k, s, h, branch, xi_tt_sign), leaf in REPRESENTATIVES:
        params = MetricParams.from_sign(n, k, s)
        label = f"{leaf} {params} h={h} branch {branch:+d}"
        solution_class = classify(params, h, branch, xi_tt_sign)
        if solution_class.case_path != leaf:
            checks.fail(label, f"classified as {solution_class.case_path}")
            continue
        try:
            state = sample_state(h, params, branch, xi_tt_sign)
            trajectory = integrate(state, params, tight_config())
        except SigmaKError as e:
            checks.fail(label, f"integration failed: {e}")
            continue
        problems = endpoint_agreement(trajectory, solution_class.endpoints)
        checks.check(label, len(problems), 1.0, "; ".join(problems))

    for (n, k, s, h, branch), constraint in INADMISSIBLE:
        params = MetricParams.from_sign(n, k, s)
        try:
            classify(params, h, branch)
        except InadmissibleError as e:
            checks.check(f"rejects {params} h={h} branch {branch:+d}", float(e.constraint != constraint), 0.5, str(e))
        else:
            checks.fail(f"rejects {params} h={h} branch {branch:+d}", "classified an inadmissible combination")
    return checks.summary(missing_leaves=missing)
