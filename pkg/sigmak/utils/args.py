import math
import os
from dataclasses import dataclass, field
from typing import Optional

from sigmak.utils.errors import ContractError
from sigmak.utils.ode_engine import IntegrationConfig
from sigmak.utils.schouten import MetricParams

_SIGNS = {"+": 1, "+1": 1, "1": 1, "plus": 1, "-": -1, "-1": -1, "minus": -1, "0": 0, "zero": 0}


def parse_sign(value: str, allow_zero: bool = True) -> int:
    """Map '+', '-', '0', '+1', '-1' (and the words plus, minus, zero) to integers."""
    sign = _SIGNS.get(str(value).strip().lower())
    if sign is None or (sign == 0 and not allow_zero):
        expected = "+, - or 0" if allow_zero else "+ or -"
        raise ContractError(f"expected a sign ({expected}), got {value!r}")
    return sign


def parse_optional_sign(value: Optional[str]) -> Optional[int]:
    return None if value is None else parse_sign(value)


def default_num_workers() -> int:
    return int(os.environ.get("SIGMAK_NUM_WORKERS", "1"))


@dataclass
class MetricArguments:
    """
    Arguments pertaining to the equation sigma_k = s 2^-k binomial(n, k) being studied.
    """

    n: int = field(default=5, metadata={"aliases": ["-n"], "help": "The dimension n >= 3."})
    k: int = field(default=2, metadata={"aliases": ["-k"], "help": "The order k, 1 <= k <= n."})
    sign: str = field(
        default="+",
        metadata={"help": "The sign s of sigma_k. Choose between ``+``, ``-`` and ``0``."},
    )

    def __post_init__(self):
        self.sign = str(parse_sign(self.sign))

    @property
    def params(self) -> MetricParams:
        return MetricParams.from_sign(self.n, self.k, int(self.sign))


@dataclass
class IntegrationArguments:
    """
    Arguments pertaining to the adaptive integrator and its event detection.
    """

    rel_tol: float = field(default=1e-10, metadata={"aliases": ["--tol"], "help": "Relative tolerance per step."})
    abs_tol: float = field(default=1e-12, metadata={"help": "Absolute tolerance per step."})
    max_step: float = field(default=math.inf, metadata={"help": "Upper bound on the step size."})
    event_epsilon: float = field(
        default=1e-10,
        metadata={"help": "Minimal distance of an initial state from the null locus |xi_t| = 1."},
    )
    chart_switch: float = field(
        default=0.05,
        metadata={
            "help": "Switch to xi as independent variable when |1 - xi_t^2| falls below this value or exceeds "
            "its inverse."
        },
    )
    max_span: float = field(default=50.0, metadata={"aliases": ["--span"], "help": "Span in t per direction."})
    xi_bound: float = field(default=30.0, metadata={"help": "Record an Escape event once |xi| reaches this bound."})
    null_refinement: int = field(
        default=9,
        metadata={"help": "Number of geometrically spaced samples inserted before every null point."},
    )

    def config(self) -> IntegrationConfig:
        return IntegrationConfig(
            rel_tol=self.rel_tol,
            abs_tol=self.abs_tol,
            max_step=self.max_step,
            event_epsilon=self.event_epsilon,
            max_span=self.max_span,
            chart_switch=self.chart_switch,
            xi_bound=self.xi_bound,
            null_refinement=self.null_refinement,
        )


@dataclass
class LoggingArguments:
    """
    Arguments pertaining to console output.
    """

    log_level: str = field(
        default="WARNING",
        metadata={"help": "Logging level. Choose between ``DEBUG``, ``INFO``, ``WARNING`` and ``ERROR``."},
    )

    def __post_init__(self):
        self.log_level = self.log_level.upper()
        if self.log_level not in ("DEBUG", "INFO", "WARNING", "ERROR"):
            raise ContractError(f"unknown log level {self.log_level!r}")
