"""Endpoint exponent metric: blow-up rates at null points and the leading exponents at the ends."""

import math
from typing import Any, Dict, Tuple

import numpy as np

from sigmak.metrics.checks import CheckList, power_law_fit, relative_error, tight_config
from sigmak.utils.closed_forms import hyperbolic
from sigmak.utils.errors import DomainError
from sigmak.utils.first_integral import sample_state, turning_points
from sigmak.utils.ode_engine import NullPoint, Trajectory, asymptotic_offset, integrate, null_point_fit
from sigmak.utils.schouten import LogState, MetricParams

BLOWUP_CASES = ((5, 2, 1, -1.0), (7, 3, 1, -1.0))


def _window(trajectory: Trajectory, lo: float, hi: float) -> np.ndarray:
    return (trajectory.xi >= lo) & (trajectory.xi <= hi)


def _anchor(trajectory: Trajectory, xi_target: float) -> LogState:
    """The sample closest to xi_target, as the starting point of an asymptotic offset."""
    i = int(np.argmin(np.abs(trajectory.xi - xi_target)))
    return LogState(t=float(trajectory.t[i]), xi=float(trajectory.xi[i]), xi_t=float(trajectory.xi_t[i]))


def blowup_fits(checks: CheckList) -> None:
    for n, k, s, h in BLOWUP_CASES:
        params = MetricParams.from_sign(n, k, s)
        state = sample_state(h, params, 1)
        trajectory = integrate(state, params, tight_config())
        events = [event for event in trajectory.events if isinstance(event, NullPoint)]
        if len(events) != 2:
            checks.fail(f"null points {params} h={h}", f"expected 2, found {len(events)}")
            continue
        for event in events:
            label = f"{params} h={h} at t*={event.t:.6f} ({event.limit})"
            try:
                fit = null_point_fit(trajectory, event)
            except DomainError as e:
                checks.fail(f"blow-up slope {label}", str(e))
                continue
            checks.check(f"blow-up slope {label}", relative_error(fit.slope, fit.expected_slope), 0.05)
            checks.check(f"near-event ratio {label}", abs(fit.ratio - fit.expected_ratio), 1e-3)
        sides = sorted(event.side for event in events)
        checks.check(f"null point sides {params} h={h}", float(sides != [-1, 1]), 0.5)


def hyperbolic_fit() -> Tuple[float, float]:
    """v^-2 against r+ - r along an integrated hyperbolic solution, with r+ from the remaining-time quadrature."""
    params = MetricParams.from_sign(5, 2, 1)
    form = hyperbolic(params, 1.0)
    trajectory = integrate(form.state(-1.0), params, tight_config(), directions="forward")
    anchor = _anchor(trajectory, -2.0)
    t_plus = anchor.t + asymptotic_offset(anchor.xi, 0.0, params, -1, -1, toward=-1)
    mask = _window(trajectory, -14.0, -6.0)
    gap = np.exp(t_plus) * -np.expm1(trajectory.t[mask] - t_plus)
    slope, _ = power_law_fit(gap, np.exp(-2.0 * (trajectory.xi[mask] + trajectory.t[mask])))
    return slope, -2.0


def power_degeneracy_fit() -> Tuple[float, float]:
    """v^-2 against r - r- at the end where xi -> +infinity in finite time."""
    params = MetricParams.from_sign(5, 2, 1)
    h = 1.0
    state = sample_state(h, params, -1)
    trajectory = integrate(state, params, tight_config(max_span=20.0), directions="backward")
    anchor = _anchor(trajectory, state.xi + 2.0)
    t_minus = anchor.t + asymptotic_offset(anchor.xi, h, params, -1, -1, toward=1)
    mask = _window(trajectory, 20.0, 30.0)
    gap = np.exp(t_minus) * np.expm1(trajectory.t[mask] - t_minus)
    slope, _ = power_law_fit(gap, np.exp(-2.0 * (trajectory.xi[mask] + trajectory.t[mask])))
    return slope, 4 * params.k / (params.n - 2 * params.k)


def conical_fit() -> Tuple[float, float]:
    """log v^-2 = -2 (xi + t) against t = log r as xi -> +infinity and t -> -infinity."""
    params = MetricParams.from_sign(4, 2, 1)
    h = 1.0
    trajectory = integrate(sample_state(h, params, -1), params, tight_config(), directions="backward")
    mask = _window(trajectory, 5.0, 25.0)
    slope = float(np.polyfit(trajectory.t[mask], -2.0 * (trajectory.xi[mask] + trajectory.t[mask]), 1)[0])
    return slope, 2.0 * (math.sqrt(1.0 + abs(h) ** (1.0 / params.k)) - 1.0)


def ck_fit() -> Tuple[float, float, float, float]:
    """
    Leading correction of v^-2 = rho^-2 {1 + c (r/rho)^(2-n/k)} at r -> 0, rho = e^(lim xi + t); returns the
    fitted exponent and coefficient with their predicted values.
    """
    params = MetricParams.from_sign(3, 2, 1)
    h = 1.0
    start = LogState(t=0.0, xi=turning_points(h, params)[0], xi_t=0.0)
    trajectory = integrate(start, params, tight_config(), directions="backward")
    anchor = _anchor(trajectory, start.xi + 2.0)
    c = anchor.xi + anchor.t + asymptotic_offset(anchor.xi, h, params, 1, -1, toward=1)
    mask = _window(trajectory, 14.0, 24.0)
    log_ratio = trajectory.t[mask] - c
    correction = np.expm1(2.0 * c - 2.0 * (trajectory.xi[mask] + trajectory.t[mask]))
    slope, intercept = np.polyfit(log_ratio, np.log(np.abs(correction)), 1)
    coefficient = float(np.sign(np.median(correction)) * math.exp(intercept))
    expected_coefficient = -abs(h) ** (1.0 / params.k) * params.k / (2 * params.k - params.n)
    return float(slope), 2.0 - params.n / params.k, coefficient, expected_coefficient


def compute_exponents_metric(seed: int = 0, tolerance_scale: float = 1.0) -> Dict[str, Any]:
    checks = CheckList("exponents", tolerance_scale)
    blowup_fits(checks)
    fitted = {}
    for name, fit, tolerance in (
        ("hyperbolic", hyperbolic_fit, 0.01),
        ("power degeneracy (5,2)", power_degeneracy_fit, 0.02),
        ("conical (4,2)", conical_fit, 0.02),
    ):
        slope, expected = fit()
        fitted[name] = slope
        checks.check(f"{name} exponent", relative_error(slope, expected), tolerance, f"{slope:.6g} vs {expected:.6g}")
    slope, expected, coefficient, expected_coefficient = ck_fit()
    fitted["C^(2-n/k) (3,2)"] = slope
    checks.check("C^(2-n/k) exponent (3,2)", relative_error(slope, expected), 0.02, f"{slope:.6g} vs {expected:.6g}")
    checks.check(
        "C^(2-n/k) coefficient (3,2)",
        relative_error(coefficient, expected_coefficient),
        0.05,
        f"{coefficient:.6g} vs {expected_coefficient:.6g}",
    )
    return checks.summary(fitted=fitted)
