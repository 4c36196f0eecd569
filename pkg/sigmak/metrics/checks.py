"""Shared pieces of the verification suites."""

import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np

from sigmak.utils.closed_forms import ClosedForm
from sigmak.utils.ode_engine import IntegrationConfig
from sigmak.utils.schouten import MetricParams

TIGHT_CONFIG = dict(rel_tol=1e-12, abs_tol=1e-14)


@dataclass
class CheckResult:
    suite: str
    name: str
    passed: bool
    value: float
    tolerance: float
    detail: str = ""

    def as_dict(self) -> Dict[str, Any]:
        return asdict(self)


class CheckList:
    """Collects checks of one suite; a check passes when its value is strictly below the scaled tolerance."""

    def __init__(self, suite: str, tolerance_scale: float = 1.0) -> None:
        self.suite = suite
        self.tolerance_scale = tolerance_scale
        self.results: List[CheckResult] = []

    def check(self, name: str, value: float, tolerance: float, detail: str = "") -> CheckResult:
        scaled = tolerance * self.tolerance_scale
        value = float(value)
        result = CheckResult(self.suite, name, bool(math.isfinite(value) and value < scaled), value, scaled, detail)
        self.results.append(result)
        return result

    def fail(self, name: str, detail: str) -> CheckResult:
        result = CheckResult(self.suite, name, False, math.nan, 0.0, detail)
        self.results.append(result)
        return result

    @property
    def passed(self) -> bool:
        return bool(self.results) and all(result.passed for result in self.results)

    def summary(self, **extra: Any) -> Dict[str, Any]:
        failed = [result.name for result in self.results if not result.passed]
        return {
            "suite": self.suite,
            "passed": self.passed,
            "checks": [result.as_dict() for result in self.results],
            "first_failure": failed[0] if failed else None,
            **extra,
        }


def relative_error(value: float, reference: float) -> float:
    return abs(value - reference) / abs(reference)


def power_law_fit(x: Sequence[float], y: Sequence[float]) -> Tuple[float, float]:
    """Slope and intercept of log|y| against log|x|."""
    x, y = np.abs(np.asarray(x, dtype=float)), np.abs(np.asarray(y, dtype=float))
    slope, intercept = np.polyfit(np.log(x), np.log(y), 1)
    return float(slope), float(intercept)


def sigma_residual(form: ClosedForm, t: np.ndarray, params: MetricParams) -> np.ndarray:
    """
    |sigma_k - nominal| relative to the size of the two terms of sigma_k, pointwise on t.
    Where both terms vanish (the linear flat family) the raw difference is returned.
    """
    n, k = params.n, params.k
    xi, xi_t, xi_tt = form.xi(t), form.xi_t(t), form.xi_tt(t)
    w = 1.0 - xi_t**2
    factor = params.cp_nk * np.abs(w) ** (k - 1) * np.exp(2.0 * k * xi)
    first, second = (k / n) * xi_tt, (0.5 - k / n) * w
    sigma = params.cp_nk * w ** (k - 1) * (first + second) * np.exp(2.0 * k * xi)
    scale = factor * (np.abs(first) + np.abs(second))
    difference = np.abs(sigma - form.nominal_sigma(params))
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(scale > 0, difference / np.where(scale > 0, scale, 1.0), difference)


def tight_config(**overrides: float) -> IntegrationConfig:
    return IntegrationConfig(**{**TIGHT_CONFIG, **overrides})
