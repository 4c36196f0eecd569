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

from sigmak.utils.args import LoggingArguments, MetricArguments, parse_optional_sign, parse_sign
from sigmak.utils.classifier import classify, classify_flat, classify_state
from sigmak.utils.errors import ContractError
from sigmak.utils.first_integral import conserved_h
from sigmak.utils.report import ClassificationReport, ReportInputs, build_report
from sigmak.utils.schouten import LogState


@dataclass
class ClassifyArguments:
    """
    Arguments pertaining to the solution being classified: a level h with a branch, a state (xi, xi_t), or a
    flat family when the sign is 0.
    """

    h: Optional[float] = field(default=None, metadata={"help": "The value of the first integral."})
    branch: Optional[str] = field(
        default=None, metadata={"help": "The branch sign(1 - xi_t^2). Choose between ``+`` and ``-``."}
    )
    xi_tt_sign: Optional[str] = field(
        default=None,
        metadata={"help": "The sign of xi_t_t, needed for s=-1, 2k>n, branch + and h >= h*."},
    )
    xi: Optional[float] = field(default=None, metadata={"help": "xi of a state on the solution."})
    xi_t: Optional[float] = field(default=None, metadata={"help": "xi_t of a state on the solution."})
    family: Optional[str] = field(
        default=None,
        metadata={"help": "The flat family for sign 0. Choose between ``linear``, ``sinh`` and ``cosh``."},
    )
    t0: float = field(default=0.0, metadata={"help": "Center t0 of the sinh and cosh families."})
    c: float = field(default=0.0, metadata={"help": "Additive constant of the flat families."})
    flat_sign: str = field(
        default="-",
        metadata={"help": "xi_t of the linear family, or the piece t < t0 (-) or t > t0 (+) of the sinh family."},
    )
    format: str = field(default="json", metadata={"help": "Output format. Choose between ``json`` and ``text``."})

    def __post_init__(self):
        if self.format not in ("json", "text"):
            raise ContractError(f"unknown format {self.format!r}, expected json or text")


def classify_report(metric_args: MetricArguments, classify_args: ClassifyArguments) -> ClassificationReport:
    params = metric_args.params
    inputs = dict(n=params.n, k=params.k, s=params.s)
    if params.s == 0:
        if classify_args.family is None:
            raise ContractError("sign 0 needs --family linear, sinh or cosh")
        sign = parse_sign(classify_args.flat_sign, allow_zero=False)
        solution_class = classify_flat(params, classify_args.family, classify_args.t0, classify_args.c, sign)
        return build_report(solution_class, ReportInputs(**inputs, family=classify_args.family), params)

    if classify_args.xi is not None or classify_args.xi_t is not None:
        if classify_args.xi is None or classify_args.xi_t is None:
            raise ContractError("a state needs both --xi and --xi_t")
        state = LogState(t=0.0, xi=classify_args.xi, xi_t=classify_args.xi_t)
        value = conserved_h(state, params, check=False)
        solution_class = classify_state(state, params)
        orientation = 0 if state.xi_t == 0 else (1 if state.xi_t > 0 else -1)
        report_inputs = ReportInputs(**inputs, h=value.h, branch=value.branch, xi=state.xi, xi_t=state.xi_t)
        return build_report(solution_class, report_inputs, params, value.h, orientation=orientation)

    if classify_args.h is None or classify_args.branch is None:
        raise ContractError("either --h and --branch or --xi and --xi_t are required")
    branch = parse_sign(classify_args.branch, allow_zero=False)
    xi_tt_sign = parse_optional_sign(classify_args.xi_tt_sign)
    solution_class = classify(params, classify_args.h, branch, xi_tt_sign)
    report_inputs = ReportInputs(**inputs, h=classify_args.h, branch=branch, xi_tt_sign=xi_tt_sign)
    return build_report(solution_class, report_inputs, params, classify_args.h)


def main(args: Optional[List[str]] = None) -> int:
    # See all possible arguments by passing the --help flag to this script.
    args = sys.argv[1:] if args is None else args
    parser = HfArgumentParser((MetricArguments, ClassifyArguments, LoggingArguments), prog="sigmak classify")
    metric_args: MetricArguments
    classify_args: ClassifyArguments
    logging_args: LoggingArguments
    if len(args) == 1 and args[0].endswith(".json"):
        # If we pass only one argument to the script and it's the path to a json file,
        # let's parse it to get our arguments.
        metric_args, classify_args, logging_args = parser.parse_json_file(json_file=os.path.abspath(args[0]))
    else:
        metric_args, classify_args, logging_args = parser.parse_args_into_dataclasses(args=args)
    logging.getLogger().setLevel(logging_args.log_level)

    report = classify_report(metric_args, classify_args)
    logger.info(f"classified {report.inputs} as {report.case_path}")
    print(report.to_json() if classify_args.format == "json" else report.to_text())
    return 0


if __name__ == "__main__":
    sys.exit(main())
