"""
The first integral of the reduced dynamics and the profile it induces.

Along every solution of the normalized equation the quantity

    h = e^((2k-n) xi) (1 - xi_t^2)^k - s e^(-n xi)

is constant, so that (1 - xi_t^2)^k = D(xi) = s e^(-2k xi) + h e^((n-2k) xi). Turning points are the roots
of D = 1 and null points the roots of D = 0.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

import numpy as np
from scipy.optimize import brentq

from sigmak.utils.errors import BranchUndefinedError, ContractError, DomainError, InadmissibleError, NoThresholdError
from sigmak.utils.schouten import LogState, MetricParams, branch_sign

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

H_ABS_TOL = 1e-12
H_REL_TOL = 1e-9
TANGENCY_TOL = 1e-9
ROOT_XTOL = 1e-13


@dataclass(frozen=True)
class FirstIntegralValue:
    h: float
    branch: int
    params: MetricParams


@dataclass(frozen=True)
class ProfileD:
    h: float
    params: MetricParams

    def __call__(self, xi: ArrayLike) -> ArrayLike:
        return profile_D(xi, self.h, self.params)

    def derivative(self, xi: ArrayLike) -> ArrayLike:
        return profile_dD(xi, self.h, self.params)


def _require_signed(params: MetricParams) -> None:
    if params.s not in (-1, 1):
        raise ContractError(f"the first integral needs a non-zero sign of sigma_k, got s={params.s}")


def h_sign(h: float) -> int:
    """Sign of h with the absolute snap |h| <= 1e-12 counted as zero."""
    if abs(h) <= H_ABS_TOL:
        return 0
    return 1 if h > 0 else -1


def compare_h(h: float, reference: float) -> int:
    """-1, 0 or +1 as h is below, at (relative 1e-9) or above the reference value."""
    if abs(h - reference) <= H_REL_TOL * abs(reference):
        return 0
    return 1 if h > reference else -1


def conserved_h(state: LogState, params: MetricParams, check: bool = True) -> FirstIntegralValue:
    if abs(state.xi_t) == 1.0:
        raise BranchUndefinedError(f"conserved_h is undefined on the null locus (xi_t={state.xi_t})")
    n, k = params.n, params.k
    w = state.w
    h = math.exp((2 * k - n) * state.xi) * w**k - params.s * math.exp(-n * state.xi)
    value = FirstIntegralValue(h=h, branch=branch_sign(state), params=params)
    if check:
        violation = admissibility_violation(params, h, value.branch)
        if violation is not None:
            raise InadmissibleError(*violation)
    return value


def profile_D(xi: ArrayLike, h: float, params: MetricParams) -> ArrayLike:
    with np.errstate(over="ignore"):
        return params.s * np.exp(-2 * params.k * xi) + h * np.exp(params.gap * xi)


def profile_dD(xi: ArrayLike, h: float, params: MetricParams) -> ArrayLike:
    k = params.k
    with np.errstate(over="ignore"):
        return -2 * k * params.s * np.exp(-2 * k * xi) + params.gap * h * np.exp(params.gap * xi)


def critical_h(params: MetricParams) -> float:
    n, k, s = params.n, params.k, params.s
    if s == 1 and 2 * k < n:
        return (2 * k / (n - 2 * k)) * ((n - 2 * k) / n) ** (n / (2 * k))
    if s == -1 and 2 * k > n:
        return (2 * k / (2 * k - n)) * ((2 * k - n) / n) ** (n / (2 * k))
    raise NoThresholdError(f"no critical value h* exists for {params}")


def critical_h_or_none(params: MetricParams) -> Optional[float]:
    try:
        return critical_h(params)
    except NoThresholdError:
        return None


def mass_M(h: float, params: MetricParams) -> float:
    """max over xi of h e^((n-2k) xi) - e^(-2k xi), for s = -1 and 2k > n."""
    n, k = params.n, params.k
    if params.s != -1 or 2 * k <= n:
        raise ContractError(f"M(h) is defined for s=-1 and 2k>n, got {params}")
    if not h > 0:
        raise DomainError(f"M(h) is only attained for h > 0, got h={h}")
    return (n / (2 * k - n)) * ((2 * k - n) * h / (2 * k)) ** (2 * k / n)


def minimum_D(h: float, params: MetricParams) -> float:
    """min over xi of D for s = +1, 2k < n and h > 0."""
    n, k = params.n, params.k
    if params.s != 1 or 2 * k >= n:
        raise ContractError(f"min D is finite for s=+1 and 2k<n, got {params}")
    if not h > 0:
        raise DomainError(f"min D is only attained for h > 0, got h={h}")
    return (n / (n - 2 * k)) * ((n - 2 * k) * h / (2 * k)) ** (2 * k / n)


def stationary_xi(h: float, params: MetricParams) -> Optional[float]:
    """The unique stationary point of D, where e^(n xi) = 2k s / ((n-2k) h), if it exists."""
    if params.gap == 0 or h == 0.0:
        return None
    ratio = 2 * params.k * params.s / (params.gap * h)
    if ratio <= 0:
        return None
    return math.log(ratio) / params.n


def _xi_limit(params: MetricParams) -> float:
    return 700.0 / max(2 * params.k, abs(params.gap), 1)


def _polish(xi: float, h: float, params: MetricParams, target: float, lo: float, hi: float) -> float:
    for _ in range(2):
        slope = float(profile_dD(xi, h, params))
        if slope == 0.0 or not math.isfinite(slope):
            break
        step = (float(profile_D(xi, h, params)) - target) / slope
        candidate = xi - step
        if not lo <= candidate <= hi:
            break
        xi = candidate
    return xi


def _expand(f, anchor: float, direction: int, limit: float) -> Optional[Tuple[float, float]]:
    """Double the step away from `anchor` until f changes sign; None if it never does within `limit`."""
    f_anchor = f(anchor)
    previous, step = anchor, 0.5
    while True:
        candidate = anchor + direction * step
        if abs(candidate) > limit:
            candidate = direction * limit
        f_candidate = f(candidate)
        if np.sign(f_candidate) != np.sign(f_anchor) or f_candidate == 0.0:
            return (min(previous, candidate), max(previous, candidate))
        if abs(candidate) >= limit:
            return None
        previous, step = candidate, step * 2.0


def _is_tangent(f_center: float, h: float, params: MetricParams, target: float) -> bool:
    """D touches the target at its stationary point; at the turning level this is h = h* in the sense of compare_h."""
    h_star = critical_h_or_none(params) if target == 1.0 else None
    if h_star is not None:
        return compare_h(h, h_star) == 0
    return abs(f_center) <= TANGENCY_TOL * max(1.0, abs(target))


def profile_roots(h: float, params: MetricParams, target: float) -> List[float]:
    """All real roots of D(xi) = target, ascending; a tangential root is returned once."""
    _require_signed(params)
    s, k = params.s, params.k
    if params.gap == 0 or h == 0.0:
        # D = s e^(-2k xi) + h
        rhs = (target - h) / s if params.gap == 0 else target / s
        return [-math.log(rhs) / (2 * k)] if rhs > 0 else []

    def f(xi: float) -> float:
        return float(profile_D(xi, h, params)) - target

    limit = _xi_limit(params)
    center = stationary_xi(h, params)
    brackets: List[Tuple[float, float]] = []
    if center is None:
        for direction in (-1, 1):
            bracket = _expand(f, 0.0, direction, limit)
            if bracket is not None:
                brackets.append(bracket)
                break
    else:
        if _is_tangent(f(center), h, params, target):
            return [center]
        for direction in (-1, 1):
            bracket = _expand(f, center, direction, limit)
            if bracket is not None:
                brackets.append(bracket)
    roots = []
    for lo, hi in brackets:
        if f(lo) == 0.0:
            roots.append(lo)
            continue
        root = brentq(f, lo, hi, xtol=ROOT_XTOL, rtol=4 * np.finfo(float).eps)
        roots.append(_polish(root, h, params, target, lo, hi))
    return sorted(roots)


def turning_points(h: float, params: MetricParams) -> List[float]:
    return profile_roots(h, params, 1.0)


def null_points(h: float, params: MetricParams) -> List[float]:
    _require_signed(params)
    ratio = -params.s / h if h != 0.0 else -1.0
    if ratio <= 0:
        return []
    return [math.log(ratio) / params.n]


def is_tangential(xi: float, h: float, params: MetricParams) -> bool:
    """True when D touches the turning level at xi without crossing it."""
    center = stationary_xi(h, params)
    return center is not None and math.isclose(xi, center, rel_tol=0.0, abs_tol=1e-9)


def admissibility_violation(params: MetricParams, h: float, branch: int) -> Optional[Tuple[str, Optional[str]]]:
    """The violated case constraint as (constraint, detail), or None if (h, branch) is realized."""
    n, k, s = params.n, params.k, params.s
    sign_h = h_sign(h)
    if s == 1 and branch == 1:
        if 2 * k < n and compare_h(h, critical_h(params)) > 0:
            return ("Thm 1 Case I.3(a) requires h ≤ h*", f"h exceeds h* ≈ {critical_h(params):.6f}")
        if 2 * k == n and sign_h > 0 and compare_h(h, 1.0) >= 0:
            return ("Thm 1 Case I.3(b) requires h<1", f"h={h:g}")
    elif s == 1 and branch == -1 and k % 2 == 1 and sign_h >= 0:
        return ("Thm 1 Case III requires h<0", f"h={h:g}")
    elif s == -1 and branch == 1 and sign_h <= 0:
        return ("Thm 2 Case I requires h>0", f"h={h:g}")
    elif s == -1 and branch == -1 and k % 2 == 0 and sign_h <= 0:
        return ("Thm 2 Case III requires h>0", f"h={h:g}")
    return None


def require_admissible(params: MetricParams, h: float, branch: int) -> None:
    if branch not in (-1, 1):
        raise ContractError(f"branch must be +1 or -1, got {branch}")
    violation = admissibility_violation(params, h, branch)
    if violation is not None:
        raise InadmissibleError(*violation)


def _branch_valid(d: float, branch: int, k: int) -> bool:
    if branch == 1:
        return 0.0 < d <= 1.0
    return d > 0.0 if k % 2 == 0 else d < 0.0


def branch_w(xi: float, h: float, params: MetricParams, branch: int) -> float:
    """1 - xi_t^2 recovered from D(xi) through the branch-correct k-th root."""
    d = float(profile_D(xi, h, params))
    if branch == 1 and 1.0 < d <= 1.0 + 1e-12:
        d = 1.0
    if not (_branch_valid(d, branch, params.k) or d == 0.0):
        raise DomainError(f"D({xi:g}) = {d:g} is not realizable on branch {branch:+d} for {params}")
    root = abs(d) ** (1.0 / params.k)
    return root if branch == 1 else -root


def branch_w_values(xi: np.ndarray, h: float, params: MetricParams, branch: int) -> np.ndarray:
    """Vectorized branch_w with NaN wherever the branch is not realized."""
    d = np.asarray(profile_D(np.asarray(xi, dtype=float), h, params), dtype=float)
    if branch == 1:
        valid = (d >= 0.0) & (d <= 1.0)
    else:
        valid = d >= 0.0 if params.k % 2 == 0 else d <= 0.0
    root = np.abs(d) ** (1.0 / params.k)
    return np.where(valid, root if branch == 1 else -root, np.nan)


def admissible_intervals(h: float, params: MetricParams, branch: int) -> List[Tuple[float, float]]:
    """Maximal xi-intervals on which the branch is realized, split at turning and null points."""
    breaks = sorted(set(null_points(h, params) + (turning_points(h, params) if branch == 1 else [])))
    edges = [-math.inf] + breaks + [math.inf]
    intervals = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        if math.isinf(lo) and math.isinf(hi):
            probe = 0.0
        elif math.isinf(lo):
            probe = hi - 1.0
        elif math.isinf(hi):
            probe = lo + 1.0
        else:
            probe = 0.5 * (lo + hi)
        if _branch_valid(float(profile_D(probe, h, params)), branch, params.k):
            intervals.append((lo, hi))
    if not intervals and branch == 1:
        # the level set is the single equilibrium point of a tangential profile
        intervals = [(xi, xi) for xi in turning_points(h, params) if is_tangential(xi, h, params)]
    return intervals


def _interior_point(lo: float, hi: float, h: float, params: MetricParams, branch: int) -> float:
    target = 0.5**params.k if branch == 1 else (1.0 if params.k % 2 == 0 else -1.0)
    inside = [xi for xi in profile_roots(h, params, target) if lo < xi < hi]
    if inside:
        return inside[0]
    center = stationary_xi(h, params)
    if center is not None and lo < center < hi:
        return center
    if math.isinf(lo) and math.isinf(hi):
        return 0.0
    if math.isinf(lo):
        return hi - 1.0
    if math.isinf(hi):
        return lo + 1.0
    return 0.5 * (lo + hi)


def xi_tt_from_profile(xi: float, w: float, h: float, params: MetricParams) -> float:
    """xi_tt = -D'(xi) / (2k w^(k-1)), the second-order equation rewritten through the first integral."""
    return -float(profile_dD(xi, h, params)) / (2 * params.k * w ** (params.k - 1))


def sample_state(
    h: float,
    params: MetricParams,
    branch: int,
    xi_tt_sign: Optional[int] = None,
    orientation: int = -1,
) -> LogState:
    """
    A concrete state at t = 0 on the level set h of the given branch.

    A turning point (xi_t = 0) is preferred. For s = -1, 2k > n, h >= h* the level set has several
    components, selected by the sign of xi_tt; `xi_tt_sign=0` at h = h* returns the equilibrium.
    `orientation` is the sign of xi_t for states that are not turning points.
    """
    require_admissible(params, h, branch)
    h_star = critical_h_or_none(params)
    if h_star is not None and compare_h(h, h_star) == 0:
        h = h_star
        if branch == 1 and (params.s == 1 or xi_tt_sign == 0):
            center = stationary_xi(h, params)
            return LogState(t=0.0, xi=center, xi_t=0.0, xi_tt=0.0)
    intervals = admissible_intervals(h, params, branch)
    if not intervals:
        raise DomainError(f"the level set h={h:g} of branch {branch:+d} is empty for {params}")
    if len(intervals) > 1:
        # on branch +1, sign(xi_tt) = -sign(D'); the component below the stationary point has D' > 0
        if xi_tt_sign not in (-1, 1):
            raise ContractError(f"the level set h={h:g} has {len(intervals)} components; xi_tt sign is required")
        intervals = intervals[:1] if xi_tt_sign < 0 else intervals[-1:]
    lo, hi = intervals[0]
    for xi in (lo, hi):
        if branch == 1 and math.isfinite(xi) and not is_tangential(xi, h, params):
            if abs(float(profile_D(xi, h, params)) - 1.0) <= 1e-9:
                return LogState(t=0.0, xi=xi, xi_t=0.0, xi_tt=xi_tt_from_profile(xi, 1.0, h, params))
    xi = _interior_point(lo, hi, h, params, branch)
    w = branch_w(xi, h, params, branch)
    xi_t = (1 if orientation >= 0 else -1) * math.sqrt(1.0 - w)
    logger.debug(f"sample state for h={h:g}, branch {branch:+d}: xi={xi:.6g}, xi_t={xi_t:.6g}")
    return LogState(t=0.0, xi=xi, xi_t=xi_t, xi_tt=xi_tt_from_profile(xi, w, h, params))
