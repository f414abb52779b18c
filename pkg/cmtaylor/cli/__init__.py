import argparse
import logging
import sys
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

from cmtaylor.arith import QuadRat, parse_value
from cmtaylor.cli.explore import congruence, identities, oracle, series, taylor
from cmtaylor.cli.report import FORMATS, render
from cmtaylor.cli.reproduce import EXAMPLES, reproduce
from cmtaylor.taylor import PRESETS
from cmtaylor.utils import CMTaylorError, split_prime_power


log = logging.getLogger(__name__)


@dataclass
class RunConfig:
    command: str
    func: Callable
    precision: int = 128
    truncation: int = 64
    modulus: Optional[Tuple[int, int]] = None
    out: str = "text"
    preset: str = "i"
    form: str = "theta"
    name: str = "theta"
    order: int = 200
    count: int = 12
    horizon: int = 200
    min_repeats: int = 3
    kappa: Optional[QuadRat] = None
    point: str = "i"
    n: int = 0
    recognize: Optional[str] = None
    example: Optional[str] = None
    verbose: bool = False

    @property
    def mode(self) -> str:
        return "exact" if self.modulus is None else "modular"

def prime_power(text: str) -> Tuple[int, int]:
    try:
        return split_prime_power(text)
    except (CMTaylorError, ValueError) as e:
        raise argparse.ArgumentTypeError(str(e))

def evaluation_mode(text: str) -> Optional[Tuple[int, int]]:
    if text == "exact":
        return None
    if text.startswith("mod:"):
        return prime_power(text[len("mod:"):])
    raise argparse.ArgumentTypeError(f"mode must be 'exact' or 'mod:p^A', not '{text}'")

def exact_value(text: str) -> QuadRat:
    try:
        return QuadRat(0) + parse_value(text)
    except CMTaylorError as e:
        raise argparse.ArgumentTypeError(str(e))

def positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, not {text}")
    return value

def recognition(text: str) -> str:
    if text == "q" or (text.startswith("quad:") and text[len("quad:"):].isdigit()):
        return text
    raise argparse.ArgumentTypeError(f"recognize must be 'q' or 'quad:d', not '{text}'")

def common_options() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    parent.add_argument("--precision", "--prec", dest="precision", type=positive_int,
                        help="Working precision in decimal digits (default 128).")
    parent.add_argument("--truncation", type=positive_int, help="q-expansion truncation order (default 64).")
    parent.add_argument("--out", choices=FORMATS, help="Output format (default text).")
    parent.add_argument("--config", type=str,
                        help="A file of key=value lines supplying defaults; command line flags override it.")
    parent.add_argument("--verbose", action="store_true", help="Log each computation step as JSON.")
    return parent

def add_series_subparser(subparsers, parent):
    series_parser = subparsers.add_parser("series", parents=[parent], argument_default=argparse.SUPPRESS,
                                          description="Print the q-expansion of a named form.")
    series_parser.add_argument("--name", type=str,
                               help="theta, f2, e2, e<k> (k >= 4 even), eta, delta, h52 or poly:<expr in X, Y, Z>.")
    series_parser.add_argument("--mod", dest="modulus", type=prime_power, help="Reduce coefficients modulo p^A.")
    series_parser.set_defaults(command="series", func=series)

def add_identities_subparser(subparsers, parent):
    identities_parser = subparsers.add_parser("identities", parents=[parent], argument_default=argparse.SUPPRESS,
                                              description="Check the q-expansion identities to a given order.")
    identities_parser.add_argument("--order", type=positive_int, help="q-expansion order for the checks (default 200).")
    identities_parser.set_defaults(command="identities", func=identities)

def add_taylor_subparser(subparsers, parent):
    taylor_parser = subparsers.add_parser("taylor", parents=[parent], argument_default=argparse.SUPPRESS,
                                          description="Normalized Taylor coefficients at a CM point.")
    taylor_parser.add_argument("--preset", choices=PRESETS)
    taylor_parser.add_argument("--form", type=str, help="theta, f2, h52 or poly:<expr in X, Y>.")
    taylor_parser.add_argument("--count", type=positive_int)
    taylor_parser.add_argument("--mode", dest="modulus", type=evaluation_mode, help="exact or mod:p^A.")
    taylor_parser.add_argument("--kappa", type=exact_value,
                               help="Override the preset's per-step scale, e.g. '(6)+(-4)sqrt(2)'.")
    taylor_parser.set_defaults(command="taylor", func=taylor)

def add_congruence_subparser(subparsers, parent):
    congruence_parser = subparsers.add_parser("congruence", parents=[parent], argument_default=argparse.SUPPRESS,
                                              description="Detect eventual quasiperiodicity modulo p^A.")
    congruence_parser.add_argument("--preset", choices=PRESETS)
    congruence_parser.add_argument("--form", type=str)
    congruence_parser.add_argument("--mod", dest="modulus", type=prime_power, required=True)
    congruence_parser.add_argument("--horizon", type=positive_int)
    congruence_parser.add_argument("--min-repeats", dest="min_repeats", type=positive_int)
    congruence_parser.add_argument("--kappa", type=exact_value)
    congruence_parser.set_defaults(command="congruence", func=congruence)

def add_oracle_subparser(subparsers, parent):
    oracle_parser = subparsers.add_parser("oracle", parents=[parent], argument_default=argparse.SUPPRESS,
                                          description="Evaluate iterated raising operators numerically.")
    oracle_parser.add_argument("--point", type=str, help="i, i/2, z7 or an expression such as 0.5+0.8i.")
    oracle_parser.add_argument("--form", type=str)
    oracle_parser.add_argument("--n", type=int)
    oracle_parser.add_argument("--recognize", type=recognition,
                               help="Recognize d^n f / Theta^(4n+2k) in Q (q) or Q(sqrt(d)) (quad:d).")
    oracle_parser.set_defaults(command="oracle", func=oracle)

def add_reproduce_subparser(subparsers, parent):
    reproduce_parser = subparsers.add_parser("reproduce", parents=[parent], argument_default=argparse.SUPPRESS,
                                             description="Recompute a published example side by side.")
    reproduce_parser.add_argument("example", choices=EXAMPLES)
    reproduce_parser.add_argument("--horizon", type=positive_int)
    reproduce_parser.set_defaults(command="reproduce", func=reproduce)

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cmtaylor", description="Taylor coefficients of modular forms on "
                                                                  "Gamma0(4) at CM points, and their congruences.")
    subparsers = parser.add_subparsers()
    parent = common_options()
    add_series_subparser(subparsers, parent)
    add_identities_subparser(subparsers, parent)
    add_taylor_subparser(subparsers, parent)
    add_congruence_subparser(subparsers, parent)
    add_oracle_subparser(subparsers, parent)
    add_reproduce_subparser(subparsers, parent)
    return parser

def read_config(path: str) -> List[str]:
    """Turn key=value lines into flags; 'true'/'false' switch flags like verbose on or off."""
    args: List[str] = []
    with open(path) as fh:
        for number, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise CMTaylorError(f"{path}:{number}: expected key=value, got '{line}'")
            flag, value = "--" + key.strip().replace("_", "-"), value.strip()
            if value.lower() in ("true", "yes"):
                args.append(flag)
            elif value.lower() not in ("false", "no"):
                args.extend([flag, value])
    return args

def _with_config_file(argv: List[str]) -> List[str]:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", type=str)
    known, rest = pre.parse_known_args(argv)
    if not known.config:
        return rest
    try:
        file_args = read_config(known.config)
    except (OSError, CMTaylorError) as e:
        pre.error(str(e))
    if rest and not rest[0].startswith("-"):
        return rest[:1] + file_args + rest[1:]
    return file_args + rest

def parse_args(argv: List[str]) -> RunConfig:
    parser = build_parser()
    args = parser.parse_args(_with_config_file(list(argv)))
    if not hasattr(args, "func"):
        parser.error("a subcommand is required")
    return RunConfig(**vars(args))

def main(args: List[str]) -> int:
    config = parse_args(args)
    if config.verbose:
        logging.basicConfig(level=logging.INFO)
    try:
        report = config.func(config)
    except CMTaylorError as e:
        print(f"cmtaylor {config.command}: {e}", file=sys.stderr)
        return 1
    sys.stdout.write(render(report, config.out))
    return report.exit_code()
