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

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

from transformers.hf_argparser import HfArgumentParser

from sigmak.metrics import SUITES
from sigmak.utils.args import LoggingArguments
from sigmak.utils.errors import ContractError


@dataclass
class VerifyArguments:
    """
    Arguments pertaining to which verification suites to run.
    """

    suite: str = field(
        default="all",
        metadata={"help": f"The suite to run. Choose between ``all``, {', '.join(f'``{name}``' for name in SUITES)}."},
    )
    seed: Optional[int] = field(default=None, metadata={"help": "Seed of the randomized suites."})
    summary_json: Optional[str] = field(
        default=None, metadata={"help": "Where to write the machine-readable summary."}
    )
    tolerance_scale: float = field(
        default=1.0, metadata={"help": "Factor applied to every tolerance; 0 makes every check fail."}
    )

    def __post_init__(self):
        if self.suite != "all" and self.suite not in SUITES:
            raise ContractError(f"unknown suite {self.suite!r}, expected all or one of {', '.join(SUITES)}")


def run_suites(verify_args: VerifyArguments) -> List[Dict[str, Any]]:
    names = list(SUITES) if verify_args.suite == "all" else [verify_args.suite]
    summaries = []
    for name in names:
        kwargs: Dict[str, Any] = {"tolerance_scale": verify_args.tolerance_scale}
        if verify_args.seed is not None:
            kwargs["seed"] = verify_args.seed
        logger.info(f"running suite {name}")
        summaries.append(SUITES[name](**kwargs))
    return summaries


def main(args: Optional[List[str]] = None) -> int:
    # See all possible arguments by passing the --help flag to this script.
    args = sys.argv[1:] if args is None else args
    parser = HfArgumentParser((VerifyArguments, LoggingArguments), prog="sigmak verify")
    verify_args: VerifyArguments
    logging_args: LoggingArguments
    if len(args) == 1 and args[0].endswith(".json"):
        # If we pass only one argument to the script and it's the path to a json file,
        # let's parse it to get our arguments.
        verify_args, logging_args = parser.parse_json_file(json_file=os.path.abspath(args[0]))
    else:
        verify_args, logging_args = parser.parse_args_into_dataclasses(args=args)
    logging.getLogger().setLevel(logging_args.log_level)

    summaries = run_suites(verify_args)
    for summary in summaries:
        checks = summary["checks"]
        passed = sum(check["passed"] for check in checks)
        status = "PASS" if summary["passed"] else "FAIL"
        print(f"{summary['suite']}: {status} ({passed}/{len(checks)} checks)")
        if "max_drift" in summary:
            print(f"  max drift: {summary['max_drift']:.3e}")
        if summary["first_failure"] is not None:
            print(f"  first failing check: {summary['first_failure']}")
    if verify_args.summary_json is not None:
        path = Path(verify_args.summary_json)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps({"passed": all(s["passed"] for s in summaries), "suites": summaries}, indent=2))
        logger.info(f"wrote summary to {path}")
    return 0 if all(summary["passed"] for summary in summaries) else 1


if __name__ == "__main__":
    sys.exit(main())
