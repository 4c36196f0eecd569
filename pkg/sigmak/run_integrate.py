# Set up logging
import sys
import logging

logging.basicConfig(
    format="%(asctime)s - %(levelname)s - %(name)s -   %(message)s",
    datefmt="%m/%d/%Y %H:%M:%S",
    handlers=[logging.StreamHandler(sys.stdout)],
    level=logging.WARNING,
)
logger = logging.getLogger(__name__)

import os
from dataclasses import dataclass, field
from typing import List, Optional

from transformers.hf_argparser import HfArgumentParser

from sigmak.utils.args import IntegrationArguments, LoggingArguments, MetricArguments
from sigmak.utils.errors import ContractError
from sigmak.utils.ode_engine import NullPoint, Trajectory, integrate
from sigmak.utils.report import TrajectoryTable
from sigmak.utils.schouten import LogState


@dataclass
class IntegrateArguments:
    """
    Arguments pertaining to the initial state and the output of a single integration.
    """

    xi0: float = field(default=0.0, metadata={"help": "Initial xi at t = 0."})
    xit0: float = field(default=0.0, metadata={"help": "Initial xi_t at t = 0; |xi_t| = 1 is singular."})
    direction: str = field(
        default="both", metadata={"help": "Integrate ``forward``, ``backward`` or in ``both`` directions."}
    )
    out: Optional[str] = field(default=None, metadata={"help": "Where to write the trajectory table."})

    def __post_init__(self):
        if self.direction not in ("both", "forward", "backward"):
            raise ContractError(f"unknown direction {self.direction!r}, expected both, forward or backward")


def event_summary(trajectory: Trajectory) -> List[str]:
    lines = []
    for event in trajectory.events:
        details = ", ".join(f"{key}={value:.12g}" for key, value in event.as_dict().items() if key != "kind")
        if isinstance(event, NullPoint):
            details += f", {event.limit}"
        lines.append(f"{event.kind}: {details}")
    return lines or ["no events"]


def main(args: Optional[List[str]] = None) -> int:
    # See all possible arguments by passing the --help flag to this script.
    args = sys.argv[1:] if args is None else args
    parser = HfArgumentParser(
        (MetricArguments, IntegrateArguments, IntegrationArguments, LoggingArguments), prog="sigmak integrate"
    )
    metric_args: MetricArguments
    integrate_args: IntegrateArguments
    integration_args: IntegrationArguments
    logging_args: LoggingArguments
    if len(args) == 1 and args[0].endswith(".json"):
        # If we pass only one argument to the script and it's the path to a json file,
        # let's parse it to get our arguments.
        metric_args, integrate_args, integration_args, logging_args = parser.parse_json_file(
            json_file=os.path.abspath(args[0])
        )
    else:
        metric_args, integrate_args, integration_args, logging_args = parser.parse_args_into_dataclasses(args=args)
    logging.getLogger().setLevel(logging_args.log_level)

    params = metric_args.params
    state = LogState(t=0.0, xi=integrate_args.xi0, xi_t=integrate_args.xit0)
    trajectory = integrate(state, params, integration_args.config(), directions=integrate_args.direction)

    print(f"{params}: h0={trajectory.h0.h:.17g}, branch {trajectory.branch:+d}, {len(trajectory)} samples")
    for line in event_summary(trajectory):
        print(line)
    print(f"drift: {trajectory.drift:.3e} (absolute {trajectory.absolute_drift:.3e})")
    if integrate_args.out is not None:
        path = TrajectoryTable.from_trajectory(trajectory).write(integrate_args.out)
        logger.info(f"wrote trajectory table to {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
