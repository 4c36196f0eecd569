"""Threshold metric: h* by closed formula against an independent characterization through extrema of D."""

from typing import Any, Dict

from scipy.optimize import bisect, minimize_scalar

from sigmak.metrics.checks import CheckList
from sigmak.utils.first_integral import critical_h, mass_M, profile_D
from sigmak.utils.schouten import MetricParams

EXPECTED = {(5, 2, 1): 0.534992, (3, 2, -1): 1.754766}


def extremal_D(h: float, params: MetricParams) -> float:
    """min D for s = +1 and max D for s = -1, found numerically without the stationary-point formula."""
    sign = 1.0 if params.s == 1 else -1.0
    result = minimize_scalar(
        lambda xi: sign * float(profile_D(xi, h, params)),
        bounds=(-10.0, 10.0),
        method="bounded",
        options={"xatol": 1e-12},
    )
    return sign * float(result.fun)


def bisected_h_star(params: MetricParams, lo: float = 1e-3, hi: float = 10.0) -> float:
    return bisect(lambda h: extremal_D(h, params) - 1.0, lo, hi, xtol=1e-12)


def compute_thresholds_metric(seed: int = 0, tolerance_scale: float = 1.0) -> Dict[str, Any]:
    checks = CheckList("thresholds", tolerance_scale)
    for (n, k, s), expected in EXPECTED.items():
        params = MetricParams.from_sign(n, k, s)
        formula = critical_h(params)
        independent = bisected_h_star(params)
        checks.check(f"h* formula {params}", abs(formula - expected), 1e-4, f"h*={formula:.9f}")
        checks.check(f"h* bisection {params}", abs(independent - expected), 1e-4, f"h*={independent:.9f}")
        checks.check(f"h* agreement {params}", abs(independent - formula), 1e-6)
        if s == -1:
            checks.check(f"M(h*) = 1 {params}", abs(mass_M(formula, params) - 1.0), 1e-6)
    return checks.summary()
