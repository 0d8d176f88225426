import argparse
import logging
import sys

from cli.commands import LOG_FORMAT
from suites.runner import run_suite

logger = logging.getLogger(__name__)


def main() -> None:
    logging.basicConfig(
        level=logging.INFO,
        format=LOG_FORMAT,
        stream=sys.stderr,
    )
    parser = argparse.ArgumentParser(description="Run a crosscheck suite.")
    parser.add_argument(
        "-c",
        "--config",
        default="config/suite.yaml",
        help="Path to suite configuration file.",
    )
    args = parser.parse_args()
    logger.info("Loading suite from %s", args.config)
    result = run_suite(args.config)
    sys.exit(0 if result.passed else 1)


if __name__ == "__main__":
    main()
