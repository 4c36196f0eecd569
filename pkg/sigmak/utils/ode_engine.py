"""
Integration of the reduced dynamics xi_tt = F(xi, xi_t).

Away from the null locus |xi_t| = 1 the state (xi, xi_t) is advanced in t. Close to it, and in the tails where
|xi_t| is large, the engine switches to xi as the independent variable with the state (t, p),
p = e^(2k xi) (1 - xi_t^2)^k, which obeys dp/dxi = n (p - s) and dt/dxi = 1 / xi_t. The linear equation for p is solved
in closed form from the state where the chart is entered, so only t is stepped numerically. Null points are the roots
p = 0.
"""

import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Iterator, List, Optional, Tuple

import numpy as np
from scipy.integrate import quad, solve_ivp

from sigmak.utils.errors import ContractError, DomainError, IntegrationError, SingularLocusError
from sigmak.utils.first_integral import (
    FirstIntegralValue,
    branch_w,
    compare_h,
    conserved_h,
    critical_h,
    null_points,
    profile_D,
    profile_dD,
    turning_points,
)
from sigmak.utils.schouten import LogState, MetricParams

logger = logging.getLogger(__name__)

EQUILIBRIUM_TOL = 1e-12
TURNING_TOL = 1e-8
MAX_CHART_SWITCHES = 10000


@dataclass
class IntegrationConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_step: float = math.inf
    event_epsilon: float = 1e-10
    max_span: float = 50.0
    chart_switch: float = 0.05
    xi_bound: float = 30.0
    null_refinement: int = 9

    def __post_init__(self) -> None:
        for name in ("rel_tol", "abs_tol", "max_step", "event_epsilon", "max_span", "chart_switch", "xi_bound"):
            if not getattr(self, name) > 0:
                raise ContractError(f"{name} must be positive, got {getattr(self, name)}")
        if self.chart_switch >= 0.25:
            raise ContractError(f"chart_switch must be below 0.25, got {self.chart_switch}")
        if self.null_refinement < 0:
            raise ContractError(f"null_refinement must be non-negative, got {self.null_refinement}")


@dataclass(frozen=True)
class EventRecord:
    @property
    def kind(self) -> str:
        return type(self).__name__

    def as_dict(self) -> dict:
        return {"kind": self.kind, **asdict(self)}


@dataclass(frozen=True)
class NullPoint(EventRecord):
    """xi_t^2 reaches 1; side is the limit of xi_t (-1: v_r -> 0, +1: r v_r / v -> 2)."""

    t: float
    xi: float
    side: int
    direction: int

    @property
    def limit(self) -> str:
        return "v_r -> 0" if self.side < 0 else "r v_r / v -> 2"


@dataclass(frozen=True)
class TurningPoint(EventRecord):
    t: float
    xi: float


@dataclass(frozen=True)
class Equilibrium(EventRecord):
    xi: float


@dataclass(frozen=True)
class SpanExhausted(EventRecord):
    t: float
    direction: int


@dataclass(frozen=True)
class Escape(EventRecord):
    """|xi| reached the configured bound."""

    t: float
    xi: float
    xi_t: float
    direction: int


@dataclass
class Trajectory:
    """
    Samples of one solution in increasing t. `drift` is max |h - h0| over the samples, each deviation divided by
    max(1, h_scale) so that tails where the two terms of h grow without bound are measured relative to them.
    """

    params: MetricParams
    t: np.ndarray
    xi: np.ndarray
    xi_t: np.ndarray
    xi_tt: np.ndarray
    events: List[EventRecord]
    h0: FirstIntegralValue
    drift: float = field(init=False)
    absolute_drift: float = field(init=False)

    def __post_init__(self) -> None:
        if not len(self.t):
            self.drift = self.absolute_drift = 0.0
            return
        deviation = np.abs(self.h_values() - self.h0.h)
        self.absolute_drift = float(np.max(deviation))
        self.drift = float(np.max(deviation / np.maximum(1.0, self.h_scale())))

    def __len__(self) -> int:
        return len(self.t)

    @property
    def branch(self) -> int:
        return self.h0.branch

    def h_values(self) -> np.ndarray:
        n, k = self.params.n, self.params.k
        w = 1.0 - self.xi_t**2
        with np.errstate(over="ignore"):
            return np.exp((2 * k - n) * self.xi) * w**k - self.params.s * np.exp(-n * self.xi)

    def h_scale(self) -> np.ndarray:
        """|e^((2k-n) xi) w^k| + |s| e^(-n xi), the size of the two terms of h at each sample."""
        n, k = self.params.n, self.params.k
        w = 1.0 - self.xi_t**2
        with np.errstate(over="ignore"):
            return np.exp((2 * k - n) * self.xi) * np.abs(w) ** k + abs(self.params.s) * np.exp(-n * self.xi)

    def states(self) -> Iterator[LogState]:
        for t, xi, xi_t, xi_tt in zip(self.t, self.xi, self.xi_t, self.xi_tt):
            yield LogState(t=float(t), xi=float(xi), xi_t=float(xi_t), xi_tt=float(xi_tt))

    def events_of(self, kind: str) -> List[EventRecord]:
        return [event for event in self.events if event.kind == kind]


def rhs_values(xi: np.ndarray, xi_t: np.ndarray, params: MetricParams) -> np.ndarray:
    n, k, s = params.n, params.k, params.s
    w = 1.0 - np.asarray(xi_t) ** 2
    with np.errstate(over="ignore", divide="ignore"):
        return (n * s / (2 * k)) * np.exp(-2 * k * np.asarray(xi)) * w ** (1 - k) - (params.gap / (2 * k)) * w


def rhs(state: LogState, params: MetricParams) -> float:
    """xi_tt from the normalized equation sigma_k = s 2^-k binomial(n, k)."""
    if state.w == 0.0 and params.s != 0 and params.k >= 2:
        raise SingularLocusError(f"the equation is singular at |xi_t| = 1 (xi_t={state.xi_t})")
    return float(rhs_values(state.xi, state.xi_t, params))


def rhs_p(p: float, params: MetricParams) -> float:
    """dp/dxi for p = e^(2k xi) (1 - xi_t^2)^k; the xi-chart carries its solution p = s + h_entry e^(n xi) in closed form."""
    return params.n * (p - params.s)


def _merge_turning(t: np.ndarray, y: np.ndarray, t_turn: np.ndarray, y_turn: np.ndarray) -> Tuple[np.ndarray, ...]:
    """Solver steps with the located turning points inserted in t order."""
    if not len(t_turn):
        return t, y[0], y[1]
    inner = (t_turn - t[0]) * (t_turn - t[-1]) < 0
    t_all = np.concatenate([t, t_turn[inner]])
    y_all = np.concatenate([y, np.asarray(y_turn)[inner].T], axis=1)
    order = np.argsort(t_all * np.sign(t[-1] - t[0]), kind="stable")
    return t_all[order], y_all[0, order], y_all[1, order]


class _Integrator:
    """One time direction of `integrate`, alternating between the t-chart and the xi-chart."""

    def __init__(self, params: MetricParams, config: IntegrationConfig, branch: int, direction: int) -> None:
        self.params = params
        self.config = config
        self.branch = branch
        self.direction = direction
        self.samples: List[Tuple[float, float, float]] = []
        self.events: List[EventRecord] = []

    def _w_of_p(self, xi: float, p: float) -> float:
        return self.branch * abs(p) ** (1.0 / self.params.k) * math.exp(-2.0 * xi)

    def _in_xi_region(self, xi_t: float) -> bool:
        w = abs(1.0 - xi_t * xi_t)
        return w < self.config.chart_switch or w > 1.0 / self.config.chart_switch

    def _append(self, t: np.ndarray, xi: np.ndarray, xi_t: np.ndarray) -> None:
        start = 1 if self.samples else 0
        self.samples.extend(zip(t[start:], xi[start:], xi_t[start:]))

    def _fail(self, message: str) -> None:
        last = self.samples[-1] if self.samples else None
        raise IntegrationError(f"integration failed: {message}", last_state=last)

    def run(self, initial: LogState) -> None:
        t_end = initial.t + self.direction * self.config.max_span
        state = (initial.t, initial.xi, initial.xi_t)
        self.samples.append(state)
        chart = "xi" if self._in_xi_region(initial.xi_t) else "t"
        for _ in range(MAX_CHART_SWITCHES):
            logger.debug(f"{chart}-chart from (t, xi, xi_t) = {state} in direction {self.direction:+d}")
            state = self._t_chart(*state, t_end) if chart == "t" else self._xi_chart(*state, t_end)
            if state is None:
                return
            chart = "xi" if chart == "t" else "t"
        self._fail(f"more than {MAX_CHART_SWITCHES} chart switches")

    def _t_chart(self, t0: float, xi0: float, xi_t0: float, t_end: float) -> Optional[Tuple[float, float, float]]:
        params, config = self.params, self.config
        cs = config.chart_switch

        def f(t, y):
            return [y[1], float(rhs_values(y[0], y[1], params))]

        def enter_small(t, y):
            return abs(1.0 - y[1] ** 2) - cs

        def enter_large(t, y):
            return 1.0 / cs - abs(1.0 - y[1] ** 2)

        def bound(t, y):
            return config.xi_bound - abs(y[0])

        def turning(t, y):
            return y[1]

        for event in (enter_small, enter_large, bound):
            event.terminal, event.direction = True, -1
        turning.terminal = False

        solution = solve_ivp(
            f,
            (t0, t_end),
            [xi0, xi_t0],
            method="RK45",
            rtol=config.rel_tol,
            atol=config.abs_tol,
            max_step=config.max_step,
            events=[enter_small, enter_large, bound, turning],
        )
        if solution.status == -1:
            self._append(solution.t, solution.y[0], solution.y[1])
            self._fail(solution.message)
        t_turn, y_turn = solution.t_events[3], solution.y_events[3]
        self._append(*_merge_turning(solution.t, solution.y, t_turn, y_turn))
        for t_event, y_event in zip(t_turn, y_turn):
            self.events.append(TurningPoint(t=float(t_event), xi=float(y_event[0])))
        last = (float(solution.t[-1]), float(solution.y[0, -1]), float(solution.y[1, -1]))
        if solution.status == 0:
            self.events.append(SpanExhausted(t=last[0], direction=self.direction))
            return None
        if len(solution.t_events[2]):
            self.events.append(Escape(t=last[0], xi=last[1], xi_t=last[2], direction=self.direction))
            return None
        return last

    def _xi_chart(self, t0: float, xi0: float, xi_t0: float, t_end: float) -> Optional[Tuple[float, float, float]]:
        params, config = self.params, self.config
        n, k, s = params.n, params.k, params.s
        cs = config.chart_switch
        sigma = 1 if xi_t0 > 0 else -1
        step = self.direction * sigma
        xi_end = step * config.xi_bound
        if (xi_end - xi0) * step <= 0:
            self.events.append(Escape(t=t0, xi=xi0, xi_t=xi_t0, direction=self.direction))
            return None
        small = abs(1.0 - xi_t0 * xi_t0) < cs
        # dp/dxi = n (p - s) solved from the chart entry: p = s + q e^(n xi)
        q = math.exp((2 * k - n) * xi0) * (1.0 - xi_t0 * xi_t0) ** k - s * math.exp(-n * xi0)

        def p_of(xi: float) -> float:
            return s + q * math.exp(n * xi)

        def xi_t_of(xi: float) -> float:
            one_minus_w = 1.0 - self._w_of_p(xi, p_of(xi))
            if one_minus_w <= 0.0:
                self._fail(f"1 - w = {one_minus_w:.3e} at xi={xi:.12g} in the xi-chart")
            return sigma * math.sqrt(one_minus_w)

        def f(xi, y):
            # stage points past the chart exit may reach w >= 1
            one_minus_w = max(1.0 - self._w_of_p(xi, p_of(xi)), cs * cs)
            return [sigma / math.sqrt(one_minus_w)]

        def null(xi, y):
            return p_of(xi)

        def leave(xi, y):
            w = abs(self._w_of_p(xi, p_of(xi)))
            return w - 2.0 * cs if small else 1.0 / (2.0 * cs) - w

        def limit(xi, y):
            return self.direction * (t_end - y[0])

        null.terminal, null.direction = True, 0
        leave.terminal, leave.direction = True, 1
        limit.terminal, limit.direction = True, -1

        solution = solve_ivp(
            f,
            (xi0, xi_end),
            [t0],
            method="RK45",
            rtol=config.rel_tol,
            atol=config.abs_tol,
            max_step=config.max_step,
            events=[null, leave, limit],
            dense_output=True,
        )
        xi_grid, t_grid = solution.t, solution.y[0]
        if solution.status == -1:
            self._append(t_grid, xi_grid, np.array([xi_t_of(xi) for xi in xi_grid]))
            self._fail(solution.message)
        if len(solution.t_events[0]):
            xi_star = float(solution.t_events[0][0])
            t_star = float(solution.y_events[0][0][0])
            self._append(t_grid[:-1], xi_grid[:-1], np.array([xi_t_of(xi) for xi in xi_grid[:-1]]))
            self._refine_null(solution, xi_star, step, xi_t_of)
            self.events.append(NullPoint(t=t_star, xi=xi_star, side=sigma, direction=self.direction))
            logger.debug(f"null point at t*={t_star:.12g}, xi*={xi_star:.12g}, xi_t -> {sigma:+d}")
            return None
        xi_t_grid = np.array([xi_t_of(xi) for xi in xi_grid])
        self._append(t_grid, xi_grid, xi_t_grid)
        last = (float(t_grid[-1]), float(xi_grid[-1]), float(xi_t_grid[-1]))
        if len(solution.t_events[1]):
            return last
        if len(solution.t_events[2]):
            self.events.append(SpanExhausted(t=last[0], direction=self.direction))
        else:
            self.events.append(Escape(t=last[0], xi=last[1], xi_t=last[2], direction=self.direction))
        return None

    def _refine_null(self, solution, xi_star: float, step: int, xi_t_of) -> None:
        """Dense samples at geometric distances 1e-2, 1e-3, ... in xi before a null point."""
        last_xi = self.samples[-1][1]
        for power in range(2, 2 + self.config.null_refinement):
            xi = xi_star - step * 10.0 ** (-power)
            if (xi - last_xi) * step <= 0:
                continue
            self.samples.append((float(solution.sol(xi)[0]), float(xi), xi_t_of(xi)))


def _is_equilibrium(state: LogState, params: MetricParams) -> bool:
    if abs(state.xi_t) > EQUILIBRIUM_TOL or params.s == 0:
        return False
    return abs(float(rhs_values(state.xi, state.xi_t, params))) <= EQUILIBRIUM_TOL


def integrate(
    initial: LogState,
    params: MetricParams,
    config: Optional[IntegrationConfig] = None,
    directions: str = "both",
) -> Trajectory:
    config = config or IntegrationConfig()
    if directions not in ("both", "forward", "backward"):
        raise ContractError(f"directions must be both, forward or backward, got {directions!r}")
    if abs(abs(initial.xi_t) - 1.0) <= config.event_epsilon:
        raise SingularLocusError(
            f"initial state is within {config.event_epsilon:g} of the null locus |xi_t| = 1 (xi_t={initial.xi_t})"
        )
    h0 = conserved_h(initial, params, check=False)
    signs = {"both": (-1, 1), "forward": (1,), "backward": (-1,)}[directions]

    if _is_equilibrium(initial, params):
        lo = initial.t - config.max_span if -1 in signs else initial.t
        hi = initial.t + config.max_span if 1 in signs else initial.t
        t = np.linspace(lo, hi, 101)
        logger.info(f"equilibrium at xi*={initial.xi:.12g}")
        return Trajectory(
            params=params,
            t=t,
            xi=np.full_like(t, initial.xi),
            xi_t=np.zeros_like(t),
            xi_tt=np.zeros_like(t),
            events=[Equilibrium(xi=initial.xi)],
            h0=h0,
        )

    halves = {}
    events: List[EventRecord] = []
    for direction in signs:
        runner = _Integrator(params, config, h0.branch, direction)
        runner.run(initial)
        halves[direction] = runner.samples
        events.extend(runner.events)
    samples = list(reversed(halves.get(-1, [])))
    samples += halves.get(1, [])[1:] if -1 in halves else halves.get(1, [])
    data = np.array(samples, dtype=float)
    keep = np.concatenate([[True], np.diff(data[:, 0]) > 0])
    while not keep.all():
        data = data[keep]
        keep = np.concatenate([[True], np.diff(data[:, 0]) > 0])
    t, xi, xi_t = data[:, 0], data[:, 1], data[:, 2]
    events = _dedupe_turning(events)
    events.sort(key=lambda event: getattr(event, "t", 0.0))
    trajectory = Trajectory(
        params=params, t=t, xi=xi, xi_t=xi_t, xi_tt=rhs_values(xi, xi_t, params), events=events, h0=h0
    )
    logger.info(
        f"integrated {len(trajectory)} samples on t in [{t[0]:.6g}, {t[-1]:.6g}], "
        f"events {[event.kind for event in events]}, drift {trajectory.drift:.3e}"
    )
    return trajectory


def _dedupe_turning(events: List[EventRecord]) -> List[EventRecord]:
    kept: List[EventRecord] = []
    for event in events:
        if isinstance(event, TurningPoint) and any(
            isinstance(other, TurningPoint) and abs(other.t - event.t) <= 1e-9 for other in kept
        ):
            continue
        kept.append(event)
    return kept


def drift_report(trajectory: Trajectory) -> float:
    """max |h - h0| in units of max(1, size of the terms of h); the unscaled value is `absolute_drift`."""
    if not len(trajectory):
        raise ContractError("drift_report needs a non-empty trajectory")
    return trajectory.drift


def _one_minus_w(xi: float, h: float, params: MetricParams, branch: int, anchor: Optional[float]) -> float:
    """1 - w with the k-th root taken accurately near turning points, where D is close to 1."""
    d = float(profile_D(xi, h, params))
    if branch == -1:
        return 1.0 - branch_w(xi, h, params, branch)
    value = -math.expm1(math.log(d) / params.k) if d > 0 else 1.0
    if value <= 0.0 and anchor is not None:
        value = abs(float(profile_dD(anchor, h, params))) * abs(xi - anchor) / params.k
    if value <= 0.0:
        raise DomainError(f"D({xi:g}) = {d:.17g} is outside branch +1")
    return value


def _is_turning(xi: float, h: float, params: MetricParams, branch: int) -> bool:
    return branch == 1 and math.isfinite(xi) and abs(float(profile_D(xi, h, params)) - 1.0) < TURNING_TOL


def _quad_segment(
    lo: float, hi: float, h: float, params: MetricParams, branch: int, singular_end: Optional[float]
) -> float:
    """Integral of 1/sqrt(1 - w) over [lo, hi]; u^2 = |xi - end| regularizes a turning end."""
    if singular_end is None:

        def integrand(xi):
            return 1.0 / math.sqrt(_one_minus_w(xi, h, params, branch, None))

        value, _ = quad(integrand, lo, hi, epsabs=1e-12, epsrel=1e-12, limit=200)
        return value
    other = hi if singular_end == lo else lo
    sign = 1.0 if other > singular_end else -1.0

    def substituted(u):
        xi = singular_end + sign * u * u
        return 2.0 * u / math.sqrt(_one_minus_w(xi, h, params, branch, singular_end))

    value, _ = quad(substituted, 0.0, math.sqrt(abs(other - singular_end)), epsabs=1e-12, epsrel=1e-12, limit=200)
    return value


def time_quadrature(
    xi_from: float, xi_to: float, h: float, params: MetricParams, branch: int, direction_sign: int
) -> float:
    """
    Elapsed t between xi_from and xi_to along the branch, dt = dxi / xi_t with xi_t = direction_sign sqrt(1 - w).

    The result is signed; it is positive when xi moves in the direction of xi_t. Either end may be a turning
    point or infinite.
    """
    if branch not in (-1, 1) or direction_sign not in (-1, 1):
        raise ContractError("branch and direction_sign must be +1 or -1")
    lo, hi = min(xi_from, xi_to), max(xi_from, xi_to)
    if lo == hi:
        return 0.0
    for xi_null in null_points(h, params):
        if lo < xi_null < hi:
            raise DomainError(f"the interval [{lo:g}, {hi:g}] crosses the null point {xi_null:g}")
    lo_turning, hi_turning = _is_turning(lo, h, params, branch), _is_turning(hi, h, params, branch)
    if lo_turning and hi_turning:
        mid = 0.5 * (lo + hi)
        total = _quad_segment(lo, mid, h, params, branch, lo) + _quad_segment(mid, hi, h, params, branch, hi)
    elif lo_turning:
        total = _quad_segment(lo, hi, h, params, branch, lo)
    elif hi_turning:
        total = _quad_segment(lo, hi, h, params, branch, hi)
    else:
        total = _quad_segment(lo, hi, h, params, branch, None)
    orientation = 1.0 if xi_to > xi_from else -1.0
    return orientation * direction_sign * total


def period(h: float, params: MetricParams) -> float:
    """The period of the closed orbits for s = +1, branch +1, 2k < n and 0 < h < h*."""
    if params.s != 1 or 2 * params.k >= params.n:
        raise DomainError(f"periodic solutions need s=+1 and 2k<n, got {params}")
    if not h > 0 or compare_h(h, critical_h(params)) >= 0:
        raise DomainError(f"periodic solutions need 0 < h < h* = {critical_h(params):.6f}, got h={h}")
    lower, upper = turning_points(h, params)
    return 2.0 * time_quadrature(lower, upper, h, params, 1, 1)


def _profile_limit(h: float, params: MetricParams, toward: int) -> float:
    """lim D(xi) as xi -> toward * infinity; inf when |D| diverges."""
    limit = 0.0
    if params.s != 0 and toward < 0:
        return math.inf
    if h != 0.0:
        if params.gap == 0:
            limit += h
        elif params.gap * toward > 0:
            return math.inf
    return limit


def asymptotic_offset(
    xi_from: float, h: float, params: MetricParams, branch: int, xi_t_sign: int, toward: int
) -> float:
    """
    The integral of 1/xi_t - 1/L from xi_from to toward * infinity, L the limit of xi_t at that end.

    Where xi_t has a finite limit L this is lim (t - xi / L) - (t_from - xi_from / L); where |w| -> inf the end
    is reached in finite time and this is the remaining time t_end - t_from.
    """
    d_far = _profile_limit(h, params, toward)
    if math.isinf(d_far):
        inverse_limit = 0.0
    else:
        w_far = branch * abs(d_far) ** (1.0 / params.k)
        inverse_limit = xi_t_sign / math.sqrt(1.0 - w_far)
    anchor = xi_from if _is_turning(xi_from, h, params, branch) else None

    def integrand(xi):
        return xi_t_sign / math.sqrt(_one_minus_w(xi, h, params, branch, anchor)) - inverse_limit

    lo, hi = (xi_from, math.inf) if toward > 0 else (-math.inf, xi_from)
    value, _ = quad(integrand, lo, hi, epsabs=1e-12, epsrel=1e-10, limit=400)
    return value if toward > 0 else -value


@dataclass(frozen=True)
class ReturnMap:
    period_quadrature: float
    period_integration: float
    closure_error: float


def return_map(h: float, params: MetricParams, config: Optional[IntegrationConfig] = None) -> ReturnMap:
    """Integrate one quadrature period from the lower turning point and measure how well the orbit closes."""
    config = config or IntegrationConfig()
    period_q = period(h, params)
    lower = turning_points(h, params)[0]
    start = LogState(t=0.0, xi=lower, xi_t=0.0)
    span = IntegrationConfig(**{**asdict(config), "max_span": period_q})
    trajectory = integrate(start, params, span, directions="forward")
    closure = math.hypot(trajectory.xi[-1] - lower, trajectory.xi_t[-1])
    returns = [event.t for event in trajectory.events_of("TurningPoint") if event.t > 0.75 * period_q]
    if not returns:
        extended = IntegrationConfig(**{**asdict(config), "max_span": 1.25 * period_q})
        trajectory = integrate(start, params, extended, directions="forward")
        returns = [event.t for event in trajectory.events_of("TurningPoint") if event.t > 0.75 * period_q]
    if not returns:
        raise IntegrationError(f"no return to the lower turning point within 1.25 periods (T={period_q:.6g})")
    return ReturnMap(period_quadrature=period_q, period_integration=returns[0], closure_error=closure)


@dataclass(frozen=True)
class NullPointFit:
    slope: float
    expected_slope: float
    ratio: float
    expected_ratio: float
    samples: int


def null_point_fit(
    trajectory: Trajectory, event: NullPoint, window: Tuple[float, float] = (1e-8, 1e-4)
) -> NullPointFit:
    """Log-log slope of |v_rr| against |r - r*| on the approach to a null point, and the nearest r v_r / v."""
    approach = (trajectory.t - event.t) * event.direction < 0
    r = np.exp(trajectory.t[approach])
    r_star = math.exp(event.t)
    distance = np.abs(r - r_star) / r_star
    xi, xi_t, xi_tt, t = (
        trajectory.xi[approach],
        trajectory.xi_t[approach],
        trajectory.xi_tt[approach],
        trajectory.t[approach],
    )
    v_rr = np.exp(xi - t) * (xi_tt + xi_t * (xi_t + 1.0))
    mask = (distance >= window[0]) & (distance <= window[1])
    if mask.sum() < 3:
        raise DomainError(f"only {int(mask.sum())} samples within {window} of the null point at t*={event.t:.6g}")
    slope = float(np.polyfit(np.log(np.abs(r[mask] - r_star)), np.log(np.abs(v_rr[mask])), 1)[0])
    nearest = int(np.argmin(distance))
    return NullPointFit(
        slope=slope,
        expected_slope=-1.0 + 1.0 / trajectory.params.k,
        ratio=float(xi_t[nearest] + 1.0),
        expected_ratio=0.0 if event.side < 0 else 2.0,
        samples=int(mask.sum()),
    )
