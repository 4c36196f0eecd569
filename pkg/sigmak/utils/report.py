"""
Serialized forms of classification results and trajectories.

Reports are single JSON objects validated by pydantic; unknown fields are rejected. Trajectory tables are
comma-separated text with `#`-prefixed metadata lines and 17 significant digits per number.
"""

import io
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict

from sigmak.utils.classifier import DomainType, SolutionClass, endpoint_asymptotics
from sigmak.utils.first_integral import critical_h_or_none
from sigmak.utils.ode_engine import Trajectory
from sigmak.utils.schouten import ConeClass, MetricParams, sigma_l_values

FLOAT_FORMAT = "%.17g"


class _StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ReportInputs(_StrictModel):
    n: int
    k: int
    s: int
    h: Optional[float] = None
    branch: Optional[int] = None
    xi_tt_sign: Optional[int] = None
    xi: Optional[float] = None
    xi_t: Optional[float] = None
    family: Optional[str] = None


class EndpointRecord(_StrictModel):
    kind: str
    formula: str
    exponent: Optional[float] = None
    coefficient: Optional[float] = None
    limit: Optional[float] = None
    payload: Dict[str, Union[float, str, Tuple[float, float]]] = {}
    extra: Dict[str, float] = {}


class ClassificationReport(_StrictModel):
    inputs: ReportInputs
    h_star: Optional[float] = None
    case_path: str
    theorem_case: str
    domain: DomainType
    endpoints: Tuple[EndpointRecord, EndpointRecord]
    cone: ConeClass
    orientation: Optional[int] = None
    inversion_applied: bool = False
    closed_form: Optional[str] = None
    closed_form_parameters: Dict[str, float] = {}

    def to_json(self) -> str:
        return self.model_dump_json(indent=2)

    @classmethod
    def from_json(cls, text: str) -> "ClassificationReport":
        return cls.model_validate_json(text)

    def to_text(self) -> str:
        inputs = ", ".join(f"{key}={value}" for key, value in self.inputs.model_dump(exclude_none=True).items())
        lines = [
            f"case:      {self.case_path} ({self.theorem_case})",
            f"inputs:    {inputs}",
            f"domain:    {self.domain.value}",
            f"cone:      {self.cone.value}",
        ]
        if self.h_star is not None:
            lines.append(f"h*:        {self.h_star:.17g}")
        for label, endpoint in zip(("inner", "outer"), self.endpoints):
            exponent = "" if endpoint.exponent is None else f", exponent {endpoint.exponent:.6g}"
            lines.append(f"{label}:     {endpoint.kind}{exponent}  [{endpoint.formula}]")
        if self.closed_form:
            lines.append(f"closed form: {self.closed_form}")
        if self.inversion_applied:
            lines.append("inversion applied: endpoints listed along the inverted solution")
        return "\n".join(lines)


def build_report(
    solution_class: SolutionClass,
    inputs: ReportInputs,
    params: MetricParams,
    h: float = 0.0,
    orientation: Optional[int] = None,
) -> ClassificationReport:
    templates = endpoint_asymptotics(solution_class, h, params)
    endpoints = tuple(
        EndpointRecord(
            kind=endpoint.kind,
            formula=template.formula,
            exponent=template.exponent,
            coefficient=template.coefficient,
            limit=template.limit,
            payload=endpoint.payload(),
            extra=template.extra,
        )
        for endpoint, template in zip(solution_class.endpoints, templates)
    )
    return ClassificationReport(
        inputs=inputs,
        h_star=critical_h_or_none(params) if params.s != 0 else None,
        case_path=solution_class.case_path,
        theorem_case=solution_class.theorem_case,
        domain=solution_class.domain,
        endpoints=endpoints,
        cone=solution_class.cone,
        orientation=orientation,
        inversion_applied=solution_class.inversion_applied,
        closed_form=solution_class.closed_form,
        closed_form_parameters=dict(solution_class.parameters),
    )


def trajectory_columns(k: int) -> List[str]:
    return ["t", "r", "xi", "xi_t", "xi_tt", "v", "v_r", "v_rr", "h_drift"] + [f"sigma_{l}" for l in range(1, k + 1)]


class TrajectoryTable:
    """Rows (t, r, xi, xi_t, xi_tt, v, v_r, v_rr, h_drift, sigma_1 ... sigma_k) with run metadata."""

    def __init__(self, frame: pd.DataFrame, metadata: Optional[Dict[str, str]] = None) -> None:
        self.frame = frame
        self.metadata = dict(metadata or {})

    @classmethod
    def from_trajectory(cls, trajectory: Trajectory, metadata: Optional[Dict[str, str]] = None) -> "TrajectoryTable":
        params = trajectory.params
        t, xi, xi_t, xi_tt = trajectory.t, trajectory.xi, trajectory.xi_t, trajectory.xi_tt
        with np.errstate(over="ignore"):
            data = {
                "t": t,
                "r": np.exp(t),
                "xi": xi,
                "xi_t": xi_t,
                "xi_tt": xi_tt,
                "v": np.exp(xi + t),
                "v_r": np.exp(xi) * (xi_t + 1.0),
                "v_rr": np.exp(xi - t) * (xi_tt + xi_t * (xi_t + 1.0)),
                "h_drift": trajectory.h_values() - trajectory.h0.h,
            }
        for l in range(1, params.k + 1):
            data[f"sigma_{l}"] = sigma_l_values(xi, xi_t, xi_tt, l, params)
        header = {
            "n": str(params.n),
            "k": str(params.k),
            "s": f"{params.s:+d}",
            "h0": FLOAT_FORMAT % trajectory.h0.h,
            "branch": f"{trajectory.branch:+d}",
            "drift": FLOAT_FORMAT % trajectory.drift,
            "absolute_drift": FLOAT_FORMAT % trajectory.absolute_drift,
            "events": " ".join(event.kind for event in trajectory.events) or "none",
        }
        header.update(metadata or {})
        return cls(pd.DataFrame(data, columns=trajectory_columns(params.k)), header)

    def __len__(self) -> int:
        return len(self.frame)

    def to_csv(self) -> str:
        buffer = io.StringIO()
        for key, value in self.metadata.items():
            buffer.write(f"# {key}: {value}\n")
        self.frame.to_csv(buffer, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        return buffer.getvalue()

    def write(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_csv())
        return path

    @classmethod
    def read(cls, path: Union[str, Path]) -> "TrajectoryTable":
        metadata = {}
        body = []
        for line in Path(path).read_text().splitlines():
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition(":")
                metadata[key.strip()] = value.strip()
            else:
                body.append(line)
        frame = pd.read_csv(io.StringIO("\n".join(body)), float_precision="round_trip")
        return cls(frame, metadata)

