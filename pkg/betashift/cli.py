"""
Command-line front end

    betashift expand --beta B --alpha A --x X --n N --side minus
    betashift kneading --beta B --alpha A --n N [--detect]
    betashift check "(011)" "(100)"
    betashift classify --beta B --alpha A
    betashift approx --beta B --alpha A --epsilon E
    betashift scan --beta-steps 10 --alpha-steps 10 --epsilon E --csv out.csv [--svg out.svg]
"""

import argparse
import json
import logging
import sys
from typing import Any, Callable, Dict, List, Optional

from models.shift_models import Params, ShiftClassification, Side

from .admissibility import is_admissible
from .classify import classify_shift
from .config import Settings, load_settings
from .density import approximate_sft
from .dynamics import critical_point, detect_kneading_period, expand, kneading
from .errors import (
    AlreadyPeriodic,
    BetaShiftError,
    CallbackExhausted,
    ConfigError,
    DomainError,
    EscalationFailed,
    InvariantViolation,
    NoProgress,
    PrecisionExhausted,
    ReductionFailed,
)
from .numeric import with_precision
from .scan import grid_cells, run_scan, write_scan_csv, write_scan_svg
from .words import parse_word

logger = logging.getLogger(__name__)

EXIT_CODES = [
    (PrecisionExhausted, 2),
    ((InvariantViolation, EscalationFailed), 3),
    ((DomainError, ConfigError, NoProgress, AlreadyPeriodic, CallbackExhausted, ReductionFailed), 1),
]


def exit_code(error: BaseException) -> int:
    for kinds, code in EXIT_CODES:
        if isinstance(error, kinds):
            return code
    return 1


def _emit(data: Dict[str, Any], as_json: bool) -> None:
    if as_json:
        print(json.dumps(data, indent=2, ensure_ascii=False))
        return
    for key, value in data.items():
        if isinstance(value, list):
            value = " ".join(str(v) for v in value) or "-"
        print(f"{key}: {value}")


def _params(args: argparse.Namespace) -> Params:
    return Params.from_text(args.beta, args.alpha)


def cmd_expand(args: argparse.Namespace, settings: Settings) -> int:
    params = _params(args)
    side = Side(args.side)

    def run(bits: int):
        x = critical_point(params, bits) if args.x.strip().lower() == "p" else args.x
        return expand(params, x, args.n, side, bits)

    digits = with_precision(run, settings.bits, settings.precision_cap)
    if args.json:
        _emit({"digits": str(digits)}, True)
    else:
        print(digits)
    return 0


def cmd_kneading(args: argparse.Namespace, settings: Settings) -> int:
    params = _params(args)
    pair = with_precision(lambda bits: kneading(params, args.n, bits), settings.bits, settings.precision_cap)
    data = pair.model_dump(mode="json")
    if args.detect:
        found = detect_kneading_period(params, settings.max_len, settings.bits, settings.precision_cap)
        data["invariants"] = [str(w) for w in found] if found else None
    _emit(data, args.json)
    return 0


def cmd_check(args: argparse.Namespace, settings: Settings) -> int:
    report = is_admissible(parse_word(args.lower), parse_word(args.upper), settings.bits)
    print(report.model_dump_json(indent=2))
    return 0


def _classification_data(result: ShiftClassification) -> Dict[str, Any]:
    """Flat view: certificate fields are lifted to the top level"""
    data = result.model_dump(mode="json", exclude_none=True)
    certificate = data.pop("certificate", None)
    if certificate:
        data.update(forbidden=certificate["forbidden"], memory=certificate["memory"], entropy=certificate["entropy"])
    return data


def cmd_classify(args: argparse.Namespace, settings: Settings) -> int:
    result = classify_shift(_params(args), settings.max_len, settings.bits, settings.precision_cap)
    _emit(_classification_data(result), args.json)
    return 0


def cmd_approx(args: argparse.Namespace, settings: Settings) -> int:
    params = _params(args)
    if not params.is_interior:
        print(f"ℹ️  {params.describe()} lies on the {params.boundary} boundary; classifying by Parry's criterion")
        return cmd_classify(args, settings)
    result = approximate_sft(params, args.epsilon, settings)
    print(result.model_dump_json(indent=2))
    return 0


def cmd_scan(args: argparse.Namespace, settings: Settings) -> int:
    cells = grid_cells(args.beta_min, args.beta_max, args.beta_steps, args.alpha_steps)
    records = run_scan(cells, args.epsilon, settings)
    write_scan_csv(records, args.csv)
    if args.svg:
        write_scan_svg(records, args.svg)
    found = sum(1 for r in records if r.status.value == "finite_type")
    print(f"✅ {len(records)} cells scanned, {found} finite type, written to {args.csv}")
    return 0


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--bits", type=int, help="starting precision in bits (default 128)")
    common.add_argument("--precision-cap", type=int, help="largest precision tried (default 4096)")
    common.add_argument("--max-len", type=int, help="orbit length searched for periodicity (default 512)")
    common.add_argument("--max-cut", type=int, help="largest cut index tried by approx (default 2000)")
    common.add_argument("--workers", type=int, help="processes used by scan (default 1)")
    common.add_argument("--log-level", help="logging level (default WARNING)")
    common.add_argument("--config", help="key = value settings file")
    common.add_argument("--json", action="store_true", help="print JSON")
    return common


def _parameter_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--beta", required=True, help="β as a decimal, p/q or expression with sqrt")
    parser.add_argument("--alpha", required=True, help="α in the same formats")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="betashift", description="Intermediate β-shifts toolkit")
    commands = parser.add_subparsers(dest="command", required=True)
    common = _common_options()

    sub = commands.add_parser("expand", parents=[common], help="digits of τ±(x)")
    _parameter_options(sub)
    sub.add_argument("--x", required=True, help="point in [0, 1], or p for the critical point")
    sub.add_argument("--n", type=int, required=True)
    sub.add_argument("--side", choices=[s.value for s in Side], default=Side.MINUS.value)
    sub.set_defaults(handler=cmd_expand)

    sub = commands.add_parser("kneading", parents=[common], help="kneading invariant prefixes")
    _parameter_options(sub)
    sub.add_argument("--n", type=int, default=32)
    sub.add_argument("--detect", action="store_true", help="also detect eventually periodic invariants")
    sub.set_defaults(handler=cmd_kneading)

    sub = commands.add_parser("check", parents=[common], help="admissibility of a word pair")
    sub.add_argument("lower", help="lower word, e.g. (011)")
    sub.add_argument("upper", help="upper word, e.g. (100)")
    sub.set_defaults(handler=cmd_check)

    sub = commands.add_parser("classify", parents=[common], help="finite type, sofic or undetermined")
    _parameter_options(sub)
    sub.set_defaults(handler=cmd_classify)

    sub = commands.add_parser("approx", parents=[common], help="nearby parameter of finite type")
    _parameter_options(sub)
    sub.add_argument("--epsilon", required=True)
    sub.set_defaults(handler=cmd_approx)

    sub = commands.add_parser("scan", parents=[common], help="approximate every cell of a grid over Δ")
    sub.add_argument("--beta-min", default="1")
    sub.add_argument("--beta-max", default="2")
    sub.add_argument("--beta-steps", type=int, default=10)
    sub.add_argument("--alpha-steps", type=int, default=10)
    sub.add_argument("--epsilon", required=True)
    sub.add_argument("--csv", required=True, help="output CSV path")
    sub.add_argument("--svg", help="optional SVG scatter path")
    sub.set_defaults(handler=cmd_scan)
    return parser


def _settings(args: argparse.Namespace) -> Settings:
    overrides = {
        name: getattr(args, name, None)
        for name in ("bits", "precision_cap", "max_len", "max_cut", "workers", "log_level")
    }
    return load_settings(args.config, overrides)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        settings = _settings(args)
        logging.basicConfig(stream=sys.stderr, level=settings.log_level, format="%(levelname)s %(name)s: %(message)s")
        handler: Callable[[argparse.Namespace, Settings], int] = args.handler
        return handler(args, settings)
    except BetaShiftError as e:
        print(f"❌ {e}", file=sys.stderr)
        return exit_code(e)


if __name__ == "__main__":
    sys.exit(main())
