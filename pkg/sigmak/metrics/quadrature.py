"""Quadrature oracle and periodicity metric."""

from typing import Any, Dict

import numpy as np

from sigmak.metrics.checks import CheckList, tight_config
from sigmak.metrics.conservation import random_cases
from sigmak.utils.errors import SigmaKError
from sigmak.utils.ode_engine import integrate, return_map, time_quadrature
from sigmak.utils.schouten import MetricParams

ORACLE_CASES = 10
MIN_SPEED = 0.05
PERIODIC_CASE = (5, 2, 1, 0.3)


def _monotone_prefix(trajectory) -> int:
    """Number of leading samples before the first event and before |xi_t| drops below MIN_SPEED."""
    stops = [event.t for event in trajectory.events if hasattr(event, "t")]
    t_stop = min(stops) if stops else np.inf
    ok = (trajectory.t < t_stop) & (np.abs(trajectory.xi_t) >= MIN_SPEED)
    bad = np.flatnonzero(~ok)
    return int(bad[0]) if len(bad) else len(ok)


def compute_quadrature_metric(seed: int = 7, tolerance_scale: float = 1.0) -> Dict[str, Any]:
    checks = CheckList("quadrature", tolerance_scale)
    for index, (params, state) in enumerate(random_cases(seed, ORACLE_CASES)):
        label = f"oracle {index} {params}"
        try:
            trajectory = integrate(state, params, tight_config(max_span=1.0), directions="forward")
        except SigmaKError as e:
            checks.fail(label, str(e))
            continue
        stop = _monotone_prefix(trajectory)
        if stop < 3:
            checks.fail(label, f"only {stop} monotone samples")
            continue
        h, branch = trajectory.h0.h, trajectory.branch
        direction = 1 if state.xi_t > 0 else -1
        sample = np.linspace(1, stop - 1, min(stop - 1, 25)).astype(int)
        errors = [
            abs(time_quadrature(state.xi, trajectory.xi[i], h, params, branch, direction) - (trajectory.t[i] - state.t))
            for i in sample
        ]
        checks.check(label, max(errors), 1e-6, f"{len(sample)} samples")

    n, k, s, h = PERIODIC_CASE
    params = MetricParams.from_sign(n, k, s)
    result = return_map(h, params, tight_config())
    checks.check(f"return map closure {params} h={h}", result.closure_error, 1e-6)
    checks.check(
        f"period {params} h={h}",
        abs(result.period_integration - result.period_quadrature) / result.period_quadrature,
        1e-5,
        f"T={result.period_quadrature:.12g}",
    )
    return checks.summary(period=result.period_quadrature)
