"""
Argument parsing and file plumbing for the command-line front end.

Every FILE argument accepts `-` for stdin or stdout.
"""
import argparse
import logging
import sys
from typing import List

from utils.errors import ParseError

logger = logging.getLogger(__name__)

RUN_MODELS = ("mm", "fractran", "murec", "lterm")
COMPILERS = ("mm-deselfloop", "mm-to-fractran", "murec-to-mm")
REDUCTIONS = ("form-to-elem", "elem-to-single", "finitize", "fractran-to-dio", "dprm", "h10-to-h10z", "h10-to-murec")
SOLVERS = ("cstrs", "single", "h10z")
CHECKS = ("bisim", "oracle")


def read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, "r", encoding="utf-8") as f:
            return f.read()
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}")


def write_text(path: str, text: str):
    if not text.endswith("\n"):
        text += "\n"
    if path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)
    logger.debug(f"wrote {len(text)} characters to {path}")


def parse_nat_list(text: str) -> List[int]:
    """'3,0,2' or '3 0 2' -> [3, 0, 2]; the empty string is the empty list."""
    out = []
    for pos, item in enumerate(text.replace(",", " ").split()):
        if not item.isdigit():
            raise ParseError(f"expected a natural number, got {item!r}", f"input[{pos}]")
        out.append(int(item))
    return out


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="h10tower",
        description="Computation models and the reductions from halting to Hilbert's tenth problem.",
    )
    parser.add_argument("--log-level", default=None, help="Overrides H10_LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="Run a program with a fuel budget")
    run.add_argument("model", choices=RUN_MODELS)
    run.add_argument("--program", required=True, help="Program file (JSON)")
    run.add_argument("--input", default="", help="Comma separated naturals")
    run.add_argument("--fuel", type=positive_int, default=None)
    run.add_argument("--trace", action="store_true", help="Print one state per line")

    comp = sub.add_parser("compile", help="Compile a program to another model")
    comp.add_argument("compiler", choices=COMPILERS)
    comp.add_argument("--in", dest="input_file", required=True)
    comp.add_argument("--out", dest="output_file", default="-")
    comp.add_argument("--report", default=None)

    red = sub.add_parser("reduce", help="Apply one step of the reduction chain")
    red.add_argument("reduction", choices=REDUCTIONS)
    red.add_argument("--in", dest="input_file", required=True)
    red.add_argument("--out", dest="output_file", default="-")
    red.add_argument("--report", default=None)

    solve = sub.add_parser("solve", help="Bounded satisfiability search")
    solve.add_argument("problem", choices=SOLVERS)
    solve.add_argument("--in", dest="input_file", required=True)
    solve.add_argument("--valuation", default=None, help="JSON list of parameter values")
    solve.add_argument("--bound", type=positive_int, default=None)
    solve.add_argument("--shards", type=positive_int, default=None)

    verify = sub.add_parser("verify", help="Randomized cross-checks")
    verify.add_argument("check", choices=CHECKS)
    verify.add_argument("--spec", default=None, help="JSON file with sizes and seeds")
    return parser
