"""
Entry point `sigmak <command> [flags | config.json]`.

Exit codes: 0 on success, 2 on inadmissible input, violated preconditions, out-of-domain values and usage
errors (unknown flags included), 1 on any other failure (including failing verification checks).
"""

import importlib
import logging
import sys
import traceback
from typing import List, Optional

from sigmak.utils.errors import ContractError, DomainError, InadmissibleError

logger = logging.getLogger(__name__)

COMMANDS = {
    "classify": "sigmak.run_classify",
    "integrate": "sigmak.run_integrate",
    "portrait": "sigmak.run_portrait",
    "verify": "sigmak.run_verify",
    "sweep": "sigmak.run_sweep",
}

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def usage() -> str:
    return f"usage: sigmak {{{','.join(COMMANDS)}}} [flags | config.json]"


def main(argv: Optional[List[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    if not argv or argv[0] in ("-h", "--help"):
        print(usage())
        return EXIT_OK if argv else EXIT_USAGE
    command, args = argv[0], argv[1:]
    if command not in COMMANDS:
        print(f"unknown command {command!r}\n{usage()}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return importlib.import_module(COMMANDS[command]).main(args)
    except InadmissibleError as e:
        print(f"inadmissible: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ContractError, DomainError, ValueError) as e:
        # ValueError also covers flags the argument parser does not know
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:
        # argparse reports usage errors with SystemExit(2) and --help with SystemExit(0)
        return e.code if isinstance(e.code, int) else EXIT_FAILURE
    except Exception as e:
        logger.debug(traceback.format_exc())
        print(f"internal failure: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
