"""
Pointwise curvature algebra for radial conformal metrics g = v(|x|)^-2 |dx|^2.

The Schouten tensor of such a metric has the eigenvalue `lambda` with multiplicity n-1 and the
simple eigenvalue `lambda + mu`. In log variables t = ln r, xi = ln(v / r) the sigma_l curvature reads

    sigma_l = c'_{n,l} (1 - xi_t^2)^(l-1) [l/n xi_tt + (1/2 - l/n)(1 - xi_t^2)] e^(2 l xi).
"""

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np

from sigmak.utils.errors import BranchUndefinedError, ContractError, DomainError


def _require_finite(what: str, *values: Optional[float]) -> None:
    for value in values:
        if value is not None and not math.isfinite(value):
            raise DomainError(f"{what} must be finite, got {value!r}")


@dataclass(frozen=True)
class MetricParams:
    n: int
    k: int
    s: int

    def __post_init__(self) -> None:
        if self.n < 3:
            raise ContractError(f"dimension n must be at least 3, got n={self.n}")
        if not 1 <= self.k <= self.n:
            raise ContractError(f"order k must satisfy 1 <= k <= n, got k={self.k}, n={self.n}")
        if self.s not in (-1, 0, 1):
            raise ContractError(f"sign s must be one of -1, 0, +1, got {self.s}")

    @classmethod
    def from_sign(cls, n: int, k: int, s: int) -> "MetricParams":
        return cls(n=int(n), k=int(k), s=int(s))

    @property
    def c_nk(self) -> float:
        """(n-1)! / (k! (n-k)!)"""
        return math.comb(self.n, self.k) / self.n

    @property
    def cp_nk(self) -> float:
        """2^(1-k) binomial(n, k) = n c_nk 2^(1-k)"""
        return self.c_prime(self.k)

    def c_prime(self, l: int) -> float:
        return 2.0 ** (1 - l) * math.comb(self.n, l)

    @property
    def sigma_value(self) -> float:
        """The normalized constant s 2^-k binomial(n, k)."""
        return self.s * 2.0 ** (-self.k) * math.comb(self.n, self.k)

    @property
    def gap(self) -> int:
        """n - 2k; its sign separates the sub-cases of every classification branch."""
        return self.n - 2 * self.k

    def __str__(self) -> str:
        return f"(n={self.n}, k={self.k}, s={self.s:+d})"


@dataclass(frozen=True)
class RadialJet:
    r: float
    v: float
    v_r: float
    v_rr: float

    def __post_init__(self) -> None:
        _require_finite("radial jet", self.r, self.v, self.v_r, self.v_rr)
        if self.r <= 0:
            raise DomainError(f"radius must be positive, got r={self.r}")
        if self.v <= 0:
            raise DomainError(f"conformal factor must be positive, got v={self.v}")


@dataclass(frozen=True)
class EigenPair:
    lambda_: float
    mu: float


@dataclass(frozen=True)
class LogState:
    t: float
    xi: float
    xi_t: float
    xi_tt: Optional[float] = None

    def __post_init__(self) -> None:
        _require_finite("log state", self.t, self.xi, self.xi_t, self.xi_tt)

    @property
    def w(self) -> float:
        """1 - xi_t^2"""
        return 1.0 - self.xi_t * self.xi_t

    def as_tuple(self) -> Tuple[float, float, float]:
        return (self.t, self.xi, self.xi_t)


class ConeClass(str, Enum):
    GammaPlusK = "GammaPlusK"
    GammaMinusK = "GammaMinusK"
    Indeterminate = "Indeterminate"


def branch_sign(state: LogState) -> int:
    """sign(1 - xi_t^2), undefined on the null locus |xi_t| = 1."""
    w = state.w
    if w == 0.0:
        raise BranchUndefinedError(f"branch is undefined at |xi_t| = 1 (xi_t={state.xi_t})")
    return 1 if w > 0 else -1


def eigen_pair(jet: RadialJet) -> EigenPair:
    ratio = jet.v_r / (jet.r * jet.v)
    lambda_ = ratio * (1.0 - jet.r * jet.v_r / (2.0 * jet.v))
    mu = jet.v_rr / jet.v - ratio
    _require_finite("eigenvalues", lambda_, mu)
    return EigenPair(lambda_=lambda_, mu=mu)


def eigen_pair_log(state: LogState) -> EigenPair:
    if state.xi_tt is None:
        raise ContractError("xi_tt is required to evaluate the Schouten eigenvalues")
    scale = math.exp(-2.0 * state.t)
    return EigenPair(lambda_=0.5 * state.w * scale, mu=scale * (state.xi_tt + state.xi_t**2 - 1.0))


def sigma_l_radial(jet: RadialJet, l: int, params: MetricParams) -> float:
    if not 1 <= l <= params.n:
        raise ContractError(f"order l must satisfy 1 <= l <= n, got l={l}")
    pair = eigen_pair(jet)
    c_nl = math.comb(params.n, l) / params.n
    return c_nl * jet.v ** (2 * l) * pair.lambda_ ** (l - 1) * (params.n * pair.lambda_ + l * pair.mu)


def sigma_k_radial(jet: RadialJet, params: MetricParams) -> float:
    return sigma_l_radial(jet, params.k, params)


def sigma_l_log(state: LogState, l: int, params: MetricParams) -> float:
    if state.xi_tt is None:
        raise ContractError("xi_tt is required to evaluate sigma_l")
    if not 1 <= l <= params.k:
        raise ContractError(f"order l must satisfy 1 <= l <= k={params.k}, got l={l}")
    w = state.w
    bracket = (l / params.n) * state.xi_tt + (0.5 - l / params.n) * w
    return params.c_prime(l) * w ** (l - 1) * bracket * math.exp(2.0 * l * state.xi)


def sigma_k_log(state: LogState, params: MetricParams) -> float:
    return sigma_l_log(state, params.k, params)


def sigma_values(state: LogState, params: MetricParams) -> List[float]:
    """[sigma_1, ..., sigma_k] at the state."""
    return [sigma_l_log(state, l, params) for l in range(1, params.k + 1)]


def to_log(jet: RadialJet) -> LogState:
    xi_t = jet.r * jet.v_r / jet.v - 1.0
    xi_tt = jet.r * jet.r * jet.v_rr / jet.v - xi_t * (xi_t + 1.0)
    return LogState(t=math.log(jet.r), xi=math.log(jet.v / jet.r), xi_t=xi_t, xi_tt=xi_tt)


def from_log(state: LogState) -> RadialJet:
    if state.xi_tt is None:
        raise ContractError("xi_tt is required to recover v_rr")
    e_xi = math.exp(state.xi)
    return RadialJet(
        r=math.exp(state.t),
        v=math.exp(state.xi + state.t),
        v_r=e_xi * (state.xi_t + 1.0),
        v_rr=math.exp(state.xi - state.t) * (state.xi_tt + state.xi_t * (state.xi_t + 1.0)),
    )


def cone_class(branch: int, params: MetricParams) -> ConeClass:
    if params.k < 2:
        raise ContractError(f"cone membership is only defined for k >= 2, got k={params.k}")
    if branch not in (-1, 1):
        raise ContractError(f"branch must be +1 or -1, got {branch}")
    if params.s == 1 and branch == 1:
        return ConeClass.GammaPlusK
    if branch == -1 and ((params.s == 1 and params.k % 2 == 0) or (params.s == -1 and params.k % 2 == 1)):
        return ConeClass.GammaMinusK
    return ConeClass.Indeterminate


def monotonicity_sign(state: LogState) -> int:
    """sign(v_r) = sign(xi_t + 1)."""
    return int(math.copysign(1.0, state.xi_t + 1.0)) if state.xi_t != -1.0 else 0


def normalized_sigma(params: MetricParams) -> float:
    return params.sigma_value


def normalization_shift(c: float, params: MetricParams) -> float:
    """
    Translation in xi carrying the normalized problem to sigma_k = c.

    A solution xi of the normalized problem gives the solution xi + shift of sigma_k = c, because a
    translation in xi scales sigma_k by e^(2k shift). The sign of `c` must agree with `params.s`.
    """
    _require_finite("sigma_k constant", c)
    if c == 0.0 or params.s == 0:
        raise ContractError("only non-zero constants can be normalized")
    if math.copysign(1, c) != params.s:
        raise ContractError(f"constant {c} does not have the sign s={params.s:+d}")
    return math.log(abs(c) / abs(params.sigma_value)) / (2.0 * params.k)


def rescale_state(state: LogState, shift: float) -> LogState:
    return replace(state, xi=state.xi + shift)


def sigma_l_values(xi: np.ndarray, xi_t: np.ndarray, xi_tt: np.ndarray, l: int, params: MetricParams) -> np.ndarray:
    """sigma_l along sampled arrays, for trajectory tables."""
    w = 1.0 - np.asarray(xi_t) ** 2
    bracket = (l / params.n) * np.asarray(xi_tt) + (0.5 - l / params.n) * w
    with np.errstate(over="ignore"):
        return params.c_prime(l) * w ** (l - 1) * bracket * np.exp(2.0 * l * np.asarray(xi))
