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
from collections import Counter
from dataclasses import dataclass, field
from typing import List, Optional

from transformers.hf_argparser import HfArgumentParser

from sigmak.utils.args import IntegrationArguments, LoggingArguments, default_num_workers, parse_sign
from sigmak.utils.errors import ContractError
from sigmak.utils.sweep import (
    DEFAULT_H_VALUES,
    DEFAULT_K_VALUES,
    DEFAULT_N_VALUES,
    H_STAR,
    build_grid,
    missing_leaves,
    run_sweep,
    write_sweep,
)


@dataclass
class SweepArguments:
    """
    Arguments pertaining to the (n, k, sign, h, branch) grid and where to write its reports.
    """

    n_values: List[int] = field(default_factory=lambda: list(DEFAULT_N_VALUES), metadata={"help": "Dimensions n."})
    k_values: List[int] = field(default_factory=lambda: list(DEFAULT_K_VALUES), metadata={"help": "Orders k."})
    signs: List[str] = field(default_factory=lambda: ["+", "-"], metadata={"help": "Signs s of sigma_k."})
    h_values: List[str] = field(
        default_factory=lambda: list(DEFAULT_H_VALUES),
        metadata={"help": f"Levels h; ``{H_STAR}`` stands for the threshold where it is defined."},
    )
    branches: List[str] = field(default_factory=lambda: ["+", "-"], metadata={"help": "Branches."})
    out: str = field(default="sweep", metadata={"help": "Where to write the cell reports and the summary tables."})
    num_workers: int = field(
        default_factory=default_num_workers,
        metadata={"help": "Number of parallel workers; defaults to $SIGMAK_NUM_WORKERS or 1."},
    )
    spot_integration: bool = field(
        default=True, metadata={"help": "Whether or not to integrate a sample state of every classified cell."}
    )

    def __post_init__(self):
        for label in self.h_values:
            if label != H_STAR:
                try:
                    float(label)
                except ValueError:
                    raise ContractError(f"h values must be numbers or {H_STAR}, got {label!r}")
        for sign in self.signs + self.branches:
            parse_sign(sign, allow_zero=False)
        if self.num_workers == 0:
            raise ContractError("num_workers must be non-zero")


def main(args: Optional[List[str]] = None) -> int:
    # See all possible arguments by passing the --help flag to this script.
    args = sys.argv[1:] if args is None else args
    parser = HfArgumentParser((SweepArguments, IntegrationArguments, LoggingArguments), prog="sigmak sweep")
    sweep_args: SweepArguments
    integration_args: IntegrationArguments
    logging_args: LoggingArguments
    if len(args) == 1 and args[0].endswith(".json"):
        # If we pass only one argument to the script and it's the path to a json file,
        # let's parse it to get our arguments.
        sweep_args, integration_args, logging_args = parser.parse_json_file(json_file=os.path.abspath(args[0]))
    else:
        sweep_args, integration_args, logging_args = parser.parse_args_into_dataclasses(args=args)
    logging.getLogger().setLevel(logging_args.log_level)

    cells = build_grid(
        n_values=sweep_args.n_values,
        k_values=sweep_args.k_values,
        signs=[parse_sign(sign, allow_zero=False) for sign in sweep_args.signs],
        h_values=sweep_args.h_values,
        branches=[parse_sign(branch, allow_zero=False) for branch in sweep_args.branches],
    )
    results = run_sweep(
        cells,
        integration_args.config(),
        num_workers=sweep_args.num_workers,
        spot_integration=sweep_args.spot_integration,
    )
    out_dir = write_sweep(results, sweep_args.out)

    statuses = Counter(result.status for result in results)
    print(f"{len(results)} cells: " + ", ".join(f"{count} {status}" for status, count in sorted(statuses.items())))
    missing = missing_leaves(results)
    if missing:
        print(f"leaves not reached: {', '.join(missing)}")
    print(f"wrote reports to {out_dir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
