"""Phase-portrait curves xi_t = ±sqrt(1 - w(xi)) computed from the first integral, without integration."""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Sequence, Tuple, Union

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402

from sigmak.utils.errors import ContractError  # noqa: E402
from sigmak.utils.first_integral import (  # noqa: E402
    admissibility_violation,
    branch_w_values,
    null_points,
    turning_points,
)
from sigmak.utils.schouten import MetricParams  # noqa: E402

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"


@dataclass
class PortraitCurve:
    """All polylines of one (h, branch, sign of xi_t) level curve."""

    h: float
    branch: int
    sign: int
    segments: List[np.ndarray] = field(default_factory=list)

    @property
    def is_empty(self) -> bool:
        return not self.segments

    def frame(self) -> pd.DataFrame:
        rows = [
            pd.DataFrame({"segment": index, "xi": segment[:, 0], "xi_t": segment[:, 1]})
            for index, segment in enumerate(self.segments)
        ]
        if not rows:
            return pd.DataFrame({"segment": pd.Series(dtype=int), "xi": [], "xi_t": []})
        return pd.concat(rows, ignore_index=True)

    def file_name(self, prefix: str, index: int) -> str:
        branch = "plus" if self.branch > 0 else "minus"
        sign = "up" if self.sign > 0 else "down"
        return f"{prefix}_h{index}_{branch}_{sign}.csv"


def _split_finite(xi: np.ndarray, xi_t: np.ndarray) -> List[np.ndarray]:
    finite = np.isfinite(xi_t)
    segments = []
    start = None
    for i, ok in enumerate(np.append(finite, False)):
        if ok and start is None:
            start = i
        elif not ok and start is not None:
            segments.append(np.column_stack([xi[start:i], xi_t[start:i]]))
            start = None
    return segments


def level_curves(
    params: MetricParams, h: float, xi_range: Tuple[float, float], samples: int = 2001
) -> List[PortraitCurve]:
    """The four curves (branch ±1, sign ±1) of the level set h on [xi_lo, xi_hi]; inadmissible branches are empty."""
    lo, hi = xi_range
    turning = [] if params.s == 0 else [xi for xi in turning_points(h, params) if lo < xi < hi]
    nulls = [] if params.s == 0 else [xi for xi in null_points(h, params) if lo < xi < hi]
    special = turning + nulls
    xi = np.unique(np.concatenate([np.linspace(lo, hi, samples), special]))
    curves = []
    for branch in (1, -1):
        if admissibility_violation(params, h, branch) is not None:
            curves.extend(PortraitCurve(h=h, branch=branch, sign=sign) for sign in (1, -1))
            continue
        w = branch_w_values(xi, h, params, branch)
        if branch == 1:
            # D = 1 at turning points up to rounding, which would otherwise drop them from the curve
            w[np.isin(xi, turning)] = 1.0
        magnitude = np.sqrt(np.clip(1.0 - w, 0.0, None))
        magnitude[np.isnan(w)] = np.nan
        for sign in (1, -1):
            curves.append(PortraitCurve(h=h, branch=branch, sign=sign, segments=_split_finite(xi, sign * magnitude)))
    return curves


def portrait_curves(
    params: MetricParams, h_values: Sequence[float], xi_range: Tuple[float, float], samples: int = 2001
) -> List[Tuple[int, PortraitCurve]]:
    if not xi_range[0] < xi_range[1]:
        raise ContractError(f"the xi range must be increasing, got {xi_range}")
    curves = []
    for index, h in enumerate(h_values):
        for curve in level_curves(params, h, xi_range, samples):
            if curve.is_empty:
                logger.warning(f"h={h:g}, branch {curve.branch:+d}, sign {curve.sign:+d}: empty admissible set")
            curves.append((index, curve))
    return curves


def write_curves(curves: List[Tuple[int, PortraitCurve]], prefix: Union[str, Path]) -> List[Path]:
    prefix = Path(prefix)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    paths = []
    for index, curve in curves:
        if curve.is_empty:
            continue
        path = prefix.parent / curve.file_name(prefix.name, index)
        with path.open("w") as fh:
            fh.write(f"# h: {FLOAT_FORMAT % curve.h}\n# branch: {curve.branch:+d}\n# sign: {curve.sign:+d}\n")
            curve.frame().to_csv(fh, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        paths.append(path)
    return paths


def render_svg(
    curves: List[Tuple[int, PortraitCurve]], params: MetricParams, path: Union[str, Path], xi_range: Tuple[float, float]
) -> Path:
    """A self-contained SVG with xi on the horizontal and xi_t on the vertical axis; output is byte-deterministic."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    colors = plt.get_cmap("viridis")
    count = max(1, max((index for index, _ in curves), default=0) + 1)
    with matplotlib.rc_context({"svg.hashsalt": "sigmak", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(6, 4.5))
        for index, curve in curves:
            style = "-" if curve.branch > 0 else "--"
            for segment in curve.segments:
                if len(segment) == 1:
                    ax.plot(segment[:, 0], segment[:, 1], "o", color=colors(index / count), markersize=3)
                else:
                    ax.plot(segment[:, 0], segment[:, 1], style, color=colors(index / count), linewidth=0.8)
        ax.axhline(1.0, color="grey", linewidth=0.4)
        ax.axhline(-1.0, color="grey", linewidth=0.4)
        ax.set_xlim(*xi_range)
        ax.set_xlabel("xi")
        ax.set_ylabel("xi_t")
        ax.set_title(f"n={params.n}, k={params.k}, s={params.s:+d}")
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
    return path
