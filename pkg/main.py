#!/usr/bin/env python3
"""
Main entry point for the h10tower reduction toolkit.
"""
import logging
import sys
from typing import Optional

from dotenv import load_dotenv

import config

# Load environment variables
load_dotenv()


def setup_logging(level: Optional[str] = None):
    """Console logs go to stderr so that JSON on stdout stays byte-stable."""
    handlers = [logging.FileHandler(config.LOGGING["file"])]
    if config.LOGGING["console"]:
        handlers.insert(0, logging.StreamHandler(sys.stderr))
    logging.basicConfig(
        level=getattr(logging, (level or config.LOGGING["level"]).upper(), logging.INFO),
        format=config.LOGGING["format"],
        handlers=handlers,
        force=True,
    )


logger = logging.getLogger(__name__)


def main(argv=None) -> int:
    from cli.commands import build_parser
    from cli.handlers import EXIT_USAGE, get_handler_for_command

    args = build_parser().parse_args(argv)
    setup_logging(args.log_level)
    handler = get_handler_for_command(args.command)
    if handler is None:
        logger.error(f"No handler for command {args.command}")
        return EXIT_USAGE
    result = handler.handle(vars(args))
    if not result["success"] and "error" in result:
        print(f"error: {result['error']}", file=sys.stderr)
    return result["exit_code"]


if __name__ == "__main__":
    sys.exit(main())
