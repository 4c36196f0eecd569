"""Closed-form residual metric."""

from typing import Any, Dict

import numpy as np

from sigmak.metrics.checks import CheckList, sigma_residual
from sigmak.utils.closed_forms import cylinder, flat_family, hyperbolic, round_sphere
from sigmak.utils.schouten import MetricParams, RadialJet, sigma_k_radial

NORMALIZATION_CASES = ((4, 2), (5, 2), (6, 3))
FLAT_CASES = ((5, 2), (3, 2))


def compute_closed_forms_metric(seed: int = 0, tolerance_scale: float = 1.0) -> Dict[str, Any]:
    checks = CheckList("closed-forms", tolerance_scale)
    radii = np.logspace(-2, 2, 100)
    sphere = round_sphere(1.0)
    for n, k in NORMALIZATION_CASES:
        params = MetricParams.from_sign(n, k, 1)
        expected = sphere.nominal_sigma(params)
        jets = [RadialJet(r, float(sphere.v(r)), float(sphere.v_r(r)), float(sphere.v_rr(r))) for r in radii]
        errors = [abs(sigma_k_radial(jet, params) - expected) / expected for jet in jets]
        checks.check(f"round_sphere normalization ({n},{k})", max(errors), 1e-10, f"sigma_k = {expected:.12g}")

    for n, k, s in ((5, 2, 1), (4, 2, 1), (5, 3, -1)):
        params = MetricParams.from_sign(n, k, s)
        form = hyperbolic(params, 1.0)
        residual = sigma_residual(form, form.grid(200, margin=1e-2, span=5.0), params)
        checks.check(f"hyperbolic residual ({n},{k},{s:+d})", residual.max(), 1e-9)

    for n, k, s in ((5, 2, 1), (3, 2, -1)):
        params = MetricParams.from_sign(n, k, s)
        form = cylinder(params)
        residual = sigma_residual(form, form.grid(50), params)
        checks.check(f"cylinder residual ({n},{k},{s:+d})", residual.max(), 1e-9)

    for n, k in FLAT_CASES:
        params = MetricParams.from_sign(n, k, 0)
        for selector in ("linear", "sinh", "cosh"):
            for sign in (-1, 1) if selector != "cosh" else (-1,):
                form = flat_family(selector, t0=0.3, c=-0.2, params=params, sign=sign)
                residual = sigma_residual(form, form.grid(400, margin=1e-2), params)
                checks.check(f"flat {selector} residual ({n},{k}), sign {sign:+d}", residual.max(), 1e-9)
    return checks.summary()
