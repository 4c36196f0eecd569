"""First-integral conservation and cone membership metric."""

import logging
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from alive_progress import alive_bar

from sigmak.metrics.checks import CheckList, tight_config
from sigmak.utils.errors import SigmaKError
from sigmak.utils.first_integral import admissibility_violation, conserved_h
from sigmak.utils.ode_engine import Trajectory, integrate
from sigmak.utils.schouten import ConeClass, LogState, MetricParams, cone_class, sigma_l_values

logger = logging.getLogger(__name__)

TRAJECTORIES = 20
CENTRAL_SPAN = 10.0


def random_cases(seed: int, count: int = TRAJECTORIES) -> List[Tuple[MetricParams, LogState]]:
    """Admissible initial states with n in 3..8, k in 2..4, both signs and both branches."""
    rng = np.random.default_rng(seed)
    cases = []
    while len(cases) < count:
        n = int(rng.integers(3, 9))
        k = int(rng.integers(2, min(4, n) + 1))
        s = int(rng.choice([-1, 1]))
        branch = 1 if len(cases) % 2 == 0 else -1
        magnitude = rng.uniform(0.1, 0.9) if branch == 1 else rng.uniform(1.1, 2.0)
        state = LogState(t=0.0, xi=float(rng.uniform(-0.3, 0.3)), xi_t=float(rng.choice([-1, 1]) * magnitude))
        params = MetricParams.from_sign(n, k, s)
        h = conserved_h(state, params, check=False).h
        if admissibility_violation(params, h, branch) is None:
            cases.append((params, state))
    return cases


def cone_violations(trajectory: Trajectory, mask: Optional[np.ndarray] = None) -> int:
    """Samples (within `mask`) where sigma_1 ... sigma_(k-1) leave the cone of the trajectory's branch."""
    params = trajectory.params
    cone = cone_class(trajectory.branch, params)
    if cone == ConeClass.Indeterminate:
        return 0
    count = np.zeros(len(trajectory), dtype=bool)
    for l in range(1, params.k):
        sigma = sigma_l_values(trajectory.xi, trajectory.xi_t, trajectory.xi_tt, l, params)
        signed = sigma if cone == ConeClass.GammaPlusK else (-1) ** l * sigma
        count |= ~(signed > 0)
    if mask is not None:
        count &= mask
    return int(count.sum())


def central_samples(trajectory: Trajectory) -> np.ndarray:
    """|xi| <= 0.3 + 3/n and |t| <= 10, where the sigma_l are resolved well enough to read their signs."""
    return (np.abs(trajectory.xi) <= 0.3 + 3.0 / trajectory.params.n) & (np.abs(trajectory.t) <= CENTRAL_SPAN)


def compute_conservation_metric(seed: int = 42, tolerance_scale: float = 1.0) -> Dict[str, Any]:
    checks = CheckList("conservation", tolerance_scale)
    max_drift = 0.0
    cases = random_cases(seed)
    with alive_bar(len(cases), title="conservation") as bar:
        for index, (params, state) in enumerate(cases):
            label = f"trajectory {index} {params} xi0={state.xi:.4f} xi_t0={state.xi_t:.4f}"
            config = tight_config()
            try:
                trajectory = integrate(state, params, config)
            except SigmaKError as e:
                checks.fail(f"integrate {label}", str(e))
                bar()
                continue
            h0 = trajectory.h0.h
            max_drift = max(max_drift, trajectory.drift)
            checks.check(f"drift {label}", trajectory.drift, 1e-8 * (1.0 + abs(h0)), f"h0={h0:.12g}")
            central = central_samples(trajectory)
            checks.check(f"cone {label}", cone_violations(trajectory, central), 1.0)
            monotone = np.sign(trajectory.xi_t[central] + 1.0)
            checks.check(f"monotone v {label}", float(np.any(monotone != monotone[0])), 0.5)
            bar()
    logger.info(f"maximal drift {max_drift:.3e}")
    return checks.summary(max_drift=max_drift)
