"""Exact radial solutions used as oracles for the integrator and the classifier."""

import math
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

from sigmak.utils.errors import ContractError, DegenerateCoefficientError, DomainError, InadmissibleError
from sigmak.utils.first_integral import compare_h, critical_h
from sigmak.utils.schouten import LogState, MetricParams

ArrayLike = Union[float, np.ndarray]


def _log_cosh(u: ArrayLike) -> ArrayLike:
    return np.logaddexp(u, -u) - math.log(2.0)


def _log_abs_sinh(u: ArrayLike) -> ArrayLike:
    a = np.abs(u)
    return a + np.log1p(-np.exp(-2.0 * a)) - math.log(2.0)


class ClosedForm:
    """
    Base class of the closed-form families. Subclasses provide xi, xi_t, xi_tt as functions of t = ln r
    on the open interval `domain`; the radial evaluators follow from v = e^(xi + t).
    """

    name: str = "closed_form"
    domain: Tuple[float, float] = (-math.inf, math.inf)

    def xi(self, t: ArrayLike) -> ArrayLike:
        raise NotImplementedError()

    def xi_t(self, t: ArrayLike) -> ArrayLike:
        raise NotImplementedError()

    def xi_tt(self, t: ArrayLike) -> ArrayLike:
        raise NotImplementedError()

    def nominal_sigma(self, params: MetricParams) -> float:
        return params.sigma_value

    def state(self, t: float) -> LogState:
        return LogState(t=t, xi=float(self.xi(t)), xi_t=float(self.xi_t(t)), xi_tt=float(self.xi_tt(t)))

    def v(self, r: ArrayLike) -> ArrayLike:
        t = np.log(r)
        return np.exp(self.xi(t) + t)

    def v_r(self, r: ArrayLike) -> ArrayLike:
        t = np.log(r)
        return np.exp(self.xi(t)) * (self.xi_t(t) + 1.0)

    def v_rr(self, r: ArrayLike) -> ArrayLike:
        t = np.log(r)
        xi_t = self.xi_t(t)
        return np.exp(self.xi(t) - t) * (self.xi_tt(t) + xi_t * (xi_t + 1.0))

    def grid(self, samples: int = 1000, margin: float = 1e-3, span: float = 10.0) -> np.ndarray:
        """An evaluation grid in t covering the domain, kept `margin` away from finite endpoints."""
        lo, hi = self.domain
        lo = hi - span if math.isinf(lo) and math.isfinite(hi) else lo
        hi = lo + span if math.isinf(hi) and math.isfinite(lo) else hi
        if math.isinf(lo) and math.isinf(hi):
            lo, hi = self.center - 0.5 * span, self.center + 0.5 * span
        return np.linspace(lo + margin, hi - margin, samples)

    @property
    def center(self) -> float:
        return 0.0


@dataclass(frozen=True)
class RoundSphere(ClosedForm):
    rho: float = 1.0
    name = "round_sphere"

    def xi(self, t: ArrayLike) -> ArrayLike:
        return _log_cosh(np.asarray(t) - math.log(self.rho))

    def xi_t(self, t: ArrayLike) -> ArrayLike:
        return np.tanh(np.asarray(t) - math.log(self.rho))

    def xi_tt(self, t: ArrayLike) -> ArrayLike:
        return 1.0 / np.cosh(np.asarray(t) - math.log(self.rho)) ** 2

    def v(self, r: ArrayLike) -> ArrayLike:
        return (np.asarray(r) ** 2 + self.rho**2) / (2.0 * self.rho)

    def v_r(self, r: ArrayLike) -> ArrayLike:
        return np.asarray(r) / self.rho

    def v_rr(self, r: ArrayLike) -> ArrayLike:
        return np.full_like(np.asarray(r, dtype=float), 1.0 / self.rho)

    def nominal_sigma(self, params: MetricParams) -> float:
        return 2.0 ** (-params.k) * math.comb(params.n, params.k)

    @property
    def center(self) -> float:
        return math.log(self.rho)


@dataclass(frozen=True)
class Cylinder(ClosedForm):
    xi_star: float = 0.0
    name = "cylinder"

    def xi(self, t: ArrayLike) -> ArrayLike:
        return np.full_like(np.asarray(t, dtype=float), self.xi_star)

    def xi_t(self, t: ArrayLike) -> ArrayLike:
        return np.zeros_like(np.asarray(t, dtype=float))

    def xi_tt(self, t: ArrayLike) -> ArrayLike:
        return np.zeros_like(np.asarray(t, dtype=float))

    def v(self, r: ArrayLike) -> ArrayLike:
        return math.exp(self.xi_star) * np.asarray(r)

    def v_r(self, r: ArrayLike) -> ArrayLike:
        return np.full_like(np.asarray(r, dtype=float), math.exp(self.xi_star))

    def v_rr(self, r: ArrayLike) -> ArrayLike:
        return np.zeros_like(np.asarray(r, dtype=float))


@dataclass(frozen=True)
class Hyperbolic(ClosedForm):
    """xi = ln sinh(t+ - t) on t < t+ = ln r+, i.e. v = (r+^2 - r^2) / (2 r+) on the ball |x| < r+."""

    r_plus: float = 1.0
    name = "hyperbolic"

    @property
    def t_plus(self) -> float:
        return math.log(self.r_plus)

    @property
    def domain(self) -> Tuple[float, float]:  # type: ignore[override]
        return (-math.inf, self.t_plus)

    def xi(self, t: ArrayLike) -> ArrayLike:
        return _log_abs_sinh(self.t_plus - np.asarray(t))

    def xi_t(self, t: ArrayLike) -> ArrayLike:
        return -1.0 / np.tanh(self.t_plus - np.asarray(t))

    def xi_tt(self, t: ArrayLike) -> ArrayLike:
        return -1.0 / np.sinh(self.t_plus - np.asarray(t)) ** 2

    def v(self, r: ArrayLike) -> ArrayLike:
        return (self.r_plus**2 - np.asarray(r) ** 2) / (2.0 * self.r_plus)

    def v_r(self, r: ArrayLike) -> ArrayLike:
        return -np.asarray(r) / self.r_plus

    def v_rr(self, r: ArrayLike) -> ArrayLike:
        return np.full_like(np.asarray(r, dtype=float), -1.0 / self.r_plus)

    @property
    def center(self) -> float:
        return self.t_plus - 5.0


@dataclass(frozen=True)
class FlatLinear(ClosedForm):
    """xi_t = sign identically; sign -1 is the flat metric itself, sign +1 its inversion."""

    sign: int = -1
    c: float = 0.0
    name = "flat_linear"

    def xi(self, t: ArrayLike) -> ArrayLike:
        return self.sign * np.asarray(t, dtype=float) + self.c

    def xi_t(self, t: ArrayLike) -> ArrayLike:
        return np.full_like(np.asarray(t, dtype=float), float(self.sign))

    def xi_tt(self, t: ArrayLike) -> ArrayLike:
        return np.zeros_like(np.asarray(t, dtype=float))

    def nominal_sigma(self, params: MetricParams) -> float:
        return 0.0


@dataclass(frozen=True)
class FlatSinh(ClosedForm):
    """(1 - n/2k)^-1 ln|sinh((1 - n/2k)(t - t0))| + c on one side of t0."""

    a: float = 1.0
    t0: float = 0.0
    c: float = 0.0
    piece: int = -1
    name = "flat_sinh"

    @property
    def domain(self) -> Tuple[float, float]:  # type: ignore[override]
        return (-math.inf, self.t0) if self.piece < 0 else (self.t0, math.inf)

    def _tau(self, t: ArrayLike) -> ArrayLike:
        return self.a * (np.asarray(t, dtype=float) - self.t0)

    def xi(self, t: ArrayLike) -> ArrayLike:
        return _log_abs_sinh(self._tau(t)) / self.a + self.c

    def xi_t(self, t: ArrayLike) -> ArrayLike:
        return 1.0 / np.tanh(self._tau(t))

    def xi_tt(self, t: ArrayLike) -> ArrayLike:
        return -self.a / np.sinh(self._tau(t)) ** 2

    def nominal_sigma(self, params: MetricParams) -> float:
        return 0.0

    @property
    def center(self) -> float:
        return self.t0


@dataclass(frozen=True)
class FlatCosh(ClosedForm):
    """(1 - n/2k)^-1 ln cosh((1 - n/2k)(t - t0)) + c."""

    a: float = 1.0
    t0: float = 0.0
    c: float = 0.0
    name = "flat_cosh"

    def _tau(self, t: ArrayLike) -> ArrayLike:
        return self.a * (np.asarray(t, dtype=float) - self.t0)

    def xi(self, t: ArrayLike) -> ArrayLike:
        return _log_cosh(self._tau(t)) / self.a + self.c

    def xi_t(self, t: ArrayLike) -> ArrayLike:
        return np.tanh(self._tau(t))

    def xi_tt(self, t: ArrayLike) -> ArrayLike:
        return self.a / np.cosh(self._tau(t)) ** 2

    def nominal_sigma(self, params: MetricParams) -> float:
        return 0.0

    @property
    def center(self) -> float:
        return self.t0


def round_sphere(rho: float = 1.0) -> RoundSphere:
    if not rho > 0 or not math.isfinite(rho):
        raise DomainError(f"round sphere radius must be positive, got rho={rho}")
    return RoundSphere(rho=rho)


def cylinder(params: MetricParams, h: Optional[float] = None) -> Cylinder:
    """The equilibrium xi = xi* at the critical level h = h*."""
    h_star = critical_h(params)
    if h is not None and compare_h(h, h_star) != 0:
        raise DomainError(f"the cylinder lives at h = h* = {h_star:.6f}, got h={h}")
    if params.s == 1:
        xi_star = math.log(params.n / (params.n - 2 * params.k)) / (2 * params.k)
    else:
        xi_star = math.log(2 * params.k / ((2 * params.k - params.n) * h_star)) / params.n
    return Cylinder(xi_star=xi_star)


def hyperbolic(params: MetricParams, r_plus: float = 1.0) -> Hyperbolic:
    if not (params.s == 1 and params.k % 2 == 0) and not (params.s == -1 and params.k % 2 == 1):
        raise InadmissibleError(
            "the hyperbolic metric requires s=+1 with k even or s=-1 with k odd", f"got {params}"
        )
    if not r_plus > 0:
        raise DomainError(f"r+ must be positive, got {r_plus}")
    return Hyperbolic(r_plus=r_plus)


FLAT_FAMILIES = ("linear", "sinh", "cosh")


def flat_coefficient(params: MetricParams) -> float:
    """a = 1 - n/2k, the rate of the flat families."""
    if params.gap == 0:
        raise DegenerateCoefficientError(
            "Thm 3 families 2 and 3 require 2k ≠ n", "the coefficient (1 - n/2k)^-1 is infinite"
        )
    return 1.0 - params.n / (2 * params.k)


def flat_family(
    selector: str, t0: float = 0.0, c: float = 0.0, params: Optional[MetricParams] = None, sign: int = -1
) -> ClosedForm:
    """
    The sigma_k = 0 solutions: "linear" (xi_t = sign), "sinh" (piece t < t0 for sign -1, t > t0 for +1)
    or "cosh". The sinh and cosh families need `params` for their rate 1 - n/2k.
    """
    if sign not in (-1, 1):
        raise ContractError(f"sign must be +1 or -1, got {sign}")
    if selector == "linear":
        return FlatLinear(sign=sign, c=c)
    if selector not in FLAT_FAMILIES:
        raise ContractError(f"unknown flat family {selector!r}, expected one of {FLAT_FAMILIES}")
    if params is None:
        raise ContractError(f"the {selector} family needs (n, k)")
    a = flat_coefficient(params)
    if selector == "sinh":
        return FlatSinh(a=a, t0=t0, c=c, piece=sign)
    return FlatCosh(a=a, t0=t0, c=c)
