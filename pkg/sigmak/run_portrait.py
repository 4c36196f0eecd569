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
from pathlib import Path
from typing import List, Optional

from transformers.hf_argparser import HfArgumentParser

from sigmak.utils.args import LoggingArguments, MetricArguments
from sigmak.utils.errors import ContractError
from sigmak.utils.portrait import portrait_curves, render_svg, write_curves


@dataclass
class PortraitArguments:
    """
    Arguments pertaining to the level curves of the first integral drawn in the (xi, xi_t) plane.
    """

    h_list: List[float] = field(
        default_factory=lambda: [0.1, 0.3, 0.5], metadata={"help": "Levels h of the first integral."}
    )
    xi_range: List[float] = field(
        default_factory=lambda: [-3.0, 3.0], metadata={"help": "Lower and upper bound of xi."}
    )
    samples: int = field(default=2001, metadata={"help": "Number of xi samples per curve."})
    out: str = field(default="portrait", metadata={"help": "Prefix of the polyline files."})
    svg: bool = field(default=False, metadata={"help": "Whether or not to render <out>.svg as well."})

    def __post_init__(self):
        if len(self.xi_range) != 2:
            raise ContractError(f"xi_range needs two values, got {self.xi_range}")
        if self.samples < 2:
            raise ContractError(f"samples must be at least 2, got {self.samples}")


def main(args: Optional[List[str]] = None) -> int:
    # See all possible arguments by passing the --help flag to this script.
    args = sys.argv[1:] if args is None else args
    parser = HfArgumentParser((MetricArguments, PortraitArguments, LoggingArguments), prog="sigmak portrait")
    metric_args: MetricArguments
    portrait_args: PortraitArguments
    logging_args: LoggingArguments
    if len(args) == 1 and args[0].endswith(".json"):
        # If we pass only one argument to the script and it's the path to a json file,
        # let's parse it to get our arguments.
        metric_args, portrait_args, logging_args = parser.parse_json_file(json_file=os.path.abspath(args[0]))
    else:
        metric_args, portrait_args, logging_args = parser.parse_args_into_dataclasses(args=args)
    logging.getLogger().setLevel(logging_args.log_level)

    params = metric_args.params
    xi_range = (portrait_args.xi_range[0], portrait_args.xi_range[1])
    curves = portrait_curves(params, portrait_args.h_list, xi_range, portrait_args.samples)
    paths = write_curves(curves, portrait_args.out)
    print(f"wrote {len(paths)} polyline files with prefix {portrait_args.out}")
    if portrait_args.svg:
        svg = render_svg(curves, params, Path(f"{portrait_args.out}.svg"), xi_range)
        print(f"wrote {svg}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
