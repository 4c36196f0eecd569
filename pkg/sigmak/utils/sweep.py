"""
Parameter sweeps: every cell of an (n, k, s, h, branch) grid is classified and, when admissible, integrated
from a sample state on its level set.
"""

import itertools
import logging
import math
from collections import Counter
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import pandas as pd
from alive_progress import alive_bar
from joblib import Parallel, delayed
from pydantic import BaseModel, ConfigDict
from tenacity import Retrying, before_sleep_log, retry_if_exception_type, stop_after_attempt

from sigmak.utils.classifier import ALL_LEAVES, classify, classify_state
from sigmak.utils.errors import ContractError, DomainError, InadmissibleError, IntegrationError
from sigmak.utils.first_integral import critical_h_or_none, sample_state
from sigmak.utils.ode_engine import IntegrationConfig, integrate
from sigmak.utils.report import ClassificationReport, ReportInputs, build_report
from sigmak.utils.schouten import MetricParams

logger = logging.getLogger(__name__)

H_STAR = "h*"
DEFAULT_N_VALUES = (3, 4, 5, 6, 7)
DEFAULT_K_VALUES = (2, 3)
DEFAULT_H_VALUES = ("-1", "0", "0.3", "0.5", "1", "2", "3", H_STAR)
RETRY_ATTEMPTS = 3


@dataclass(frozen=True)
class SweepCell:
    index: int
    n: int
    k: int
    s: int
    h_label: str
    h: float
    branch: int
    xi_tt_sign: Optional[int] = None

    @property
    def params(self) -> MetricParams:
        return MetricParams.from_sign(self.n, self.k, self.s)


class CellResult(BaseModel):
    model_config = ConfigDict(extra="forbid")

    index: int
    n: int
    k: int
    s: int
    h_label: str
    h: float
    branch: int
    xi_tt_sign: Optional[int] = None
    status: str
    case_path: Optional[str] = None
    constraint: Optional[str] = None
    error: Optional[str] = None
    events: List[str] = []
    drift: Optional[float] = None
    attempts: int = 0
    state_consistent: Optional[bool] = None
    report: Optional[ClassificationReport] = None


def _needs_xi_tt_sign(params: MetricParams, h: float, branch: int) -> bool:
    h_star = critical_h_or_none(params)
    return params.s == -1 and branch == 1 and params.gap < 0 and h_star is not None and h >= h_star * (1 - 1e-9)


def build_grid(
    n_values: Iterable[int] = DEFAULT_N_VALUES,
    k_values: Iterable[int] = DEFAULT_K_VALUES,
    signs: Iterable[int] = (1, -1),
    h_values: Iterable[str] = DEFAULT_H_VALUES,
    branches: Iterable[int] = (1, -1),
) -> List[SweepCell]:
    """
    The cartesian grid with k <= n. `h*` entries resolve to the threshold where it is defined and are dropped
    elsewhere; cells that need the sign of xi_tt are expanded into -1, 0 (only at h*) and +1.
    """
    cells: List[SweepCell] = []
    for n, k, s, label, branch in itertools.product(n_values, k_values, signs, h_values, branches):
        if not 2 <= k <= n:
            continue
        params = MetricParams.from_sign(n, k, s)
        if label == H_STAR:
            h = critical_h_or_none(params)
            if h is None:
                continue
        else:
            h = float(label)
        if _needs_xi_tt_sign(params, h, branch):
            signs_tt = (-1, 0, 1) if label == H_STAR else (-1, 1)
        else:
            signs_tt = (None,)
        for xi_tt_sign in signs_tt:
            cells.append(SweepCell(len(cells), n, k, s, label, h, branch, xi_tt_sign))
    return cells


def _integrate_with_retries(state, params: MetricParams, config: IntegrationConfig):
    attempt_config = IntegrationConfig(**asdict(config))
    attempts = 0
    for attempt in Retrying(
        retry=retry_if_exception_type(IntegrationError),
        stop=stop_after_attempt(RETRY_ATTEMPTS),
        before_sleep=before_sleep_log(logger, logging.WARNING),
        reraise=True,
    ):
        with attempt:
            attempts += 1
            if attempts > 1:
                previous = attempt_config.max_step if math.isfinite(attempt_config.max_step) else 1.0
                attempt_config.max_step = 0.5 * previous
            return integrate(state, params, attempt_config), attempts
    raise IntegrationError("retries exhausted")


def run_cell(cell: SweepCell, config: IntegrationConfig, spot_integration: bool = True) -> CellResult:
    params = cell.params
    fields = dict(
        index=cell.index, n=cell.n, k=cell.k, s=cell.s, h_label=cell.h_label, h=cell.h, branch=cell.branch,
        xi_tt_sign=cell.xi_tt_sign,
    )
    try:
        solution_class = classify(params, cell.h, cell.branch, cell.xi_tt_sign)
    except InadmissibleError as e:
        return CellResult(**fields, status="inadmissible", constraint=e.constraint)
    except (ContractError, DomainError) as e:
        return CellResult(**fields, status="rejected", error=str(e))
    inputs = ReportInputs(n=cell.n, k=cell.k, s=cell.s, h=cell.h, branch=cell.branch, xi_tt_sign=cell.xi_tt_sign)
    report = build_report(solution_class, inputs, params, cell.h)
    result = CellResult(**fields, status="classified", case_path=solution_class.case_path, report=report)
    if not spot_integration:
        return result
    try:
        state = sample_state(cell.h, params, cell.branch, cell.xi_tt_sign)
        trajectory, attempts = _integrate_with_retries(state, params, config)
    except (IntegrationError, DomainError, ContractError) as e:
        logger.warning(f"cell {cell.index} ({solution_class.case_path}): spot integration failed: {e}")
        return result.model_copy(update={"status": "integration_failed", "error": str(e)})
    consistent = classify_state(state, params).case_path == solution_class.case_path
    return result.model_copy(
        update={
            "events": [event.kind for event in trajectory.events],
            "drift": trajectory.drift,
            "attempts": attempts,
            "state_consistent": consistent,
        }
    )


def run_sweep(
    cells: Sequence[SweepCell],
    config: Optional[IntegrationConfig] = None,
    num_workers: int = 1,
    spot_integration: bool = True,
) -> List[CellResult]:
    config = config or IntegrationConfig()
    results: List[CellResult] = []
    jobs = Parallel(n_jobs=num_workers, return_as="generator")(
        delayed(run_cell)(cell, config, spot_integration) for cell in cells
    )
    with alive_bar(len(cells), title="sweep") as bar:
        for result in jobs:
            results.append(result)
            bar()
    results.sort(key=lambda result: result.index)
    return results


def missing_leaves(results: Sequence[CellResult]) -> List[str]:
    seen = {result.case_path for result in results if result.case_path}
    return [leaf for leaf in ALL_LEAVES if leaf not in seen]


def summarize(results: Sequence[CellResult]) -> Tuple[pd.DataFrame, pd.DataFrame]:
    summary = pd.DataFrame(
        [
            {
                "index": result.index,
                "n": result.n,
                "k": result.k,
                "s": result.s,
                "h_label": result.h_label,
                "h": result.h,
                "branch": result.branch,
                "xi_tt_sign": result.xi_tt_sign,
                "status": result.status,
                "case_path": result.case_path,
                "constraint": result.constraint,
                "events": " ".join(result.events),
                "drift": result.drift,
                "state_consistent": result.state_consistent,
            }
            for result in results
        ]
    )
    counter: Dict[str, int] = Counter(result.case_path for result in results if result.case_path)
    counts = pd.DataFrame(
        [{"case_path": leaf, "count": counter.get(leaf, 0)} for leaf in sorted(set(ALL_LEAVES) | set(counter))]
    )
    return summary, counts


def write_sweep(results: Sequence[CellResult], out_dir: Union[str, Path]) -> Path:
    """Cell reports, summary.csv and counts.csv, written by the calling process only."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for result in results:
        (out_dir / f"cell_{result.index}.json").write_text(result.model_dump_json(indent=2))
    summary, counts = summarize(results)
    summary.to_csv(out_dir / "summary.csv", index=False, float_format="%.17g", lineterminator="\n")
    counts.to_csv(out_dir / "counts.csv", index=False, lineterminator="\n")
    missing = missing_leaves(results)
    if missing:
        logger.warning(f"leaves not reached by the grid: {', '.join(missing)}")
    logger.info(f"wrote {len(results)} cells to {out_dir}")
    return out_dir
