"""Command-line interface.

Exit codes: 0 for convex / satisfied results, 1 for not-convex verdicts
and violated checks (useful in scripts), 2 for unusable input.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import Optional

from . import fileformat as ff
from .errors import (
    FlowGameError,
    NetworkValidationError,
    NotEfficient,
    ParseError,
    TooManyPlayers,
)
from .generators import BROKEN_KINDS, ConvexGenParams, gen_broken, gen_convex
from .network import FlowNetwork, reduce_network
from .oracle import (
    core_membership,
    dividends,
    gamma,
    is_convex_bruteforce,
    shapley_bruteforce,
    verify_pmas,
)
from .recognition import (
    pmas_construct,
    recognize,
    shapley_fast,
    structural_diagnostics,
)

EXIT_OK = 0
EXIT_VIOLATED = 1
EXIT_INPUT = 2


def _load(path: str) -> FlowNetwork:
    with open(path, "r", encoding="utf-8") as fh:
        return ff.parse_network(fh.read())


def _parse_coalition(network: FlowNetwork, text: str):
    if text == "@all":
        return list(network.arc_labels)
    return [tok for tok in (t.strip() for t in text.split(",")) if tok]


def _parse_allocation(text: str) -> dict:
    alloc = {}
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            raise ValueError(f"allocation entry {item!r} is not label=value")
        label, value = item.split("=", 1)
        alloc[label.strip()] = Fraction(value.strip())
    return alloc


def _emit(args, document: dict, text: str) -> None:
    if args.format == "json":
        sys.stdout.write(ff.to_json(document))
    else:
        sys.stdout.write(text)


# -- subcommand bodies ----------------------------------------------------


def _cmd_check(args) -> int:
    network = _load(args.file)
    verdict = recognize(network)
    report = structural_diagnostics(network) if args.diagnostics else None
    text = ff.verdict_text(verdict)
    if report is not None:
        text += ff.diagnostics_text(report)
    _emit(args, ff.verdict_document(verdict, report), text)
    return EXIT_OK if verdict.convex else EXIT_VIOLATED


def _cmd_reduce(args) -> int:
    network = _load(args.file)
    result = reduce_network(network)
    doc = {
        "removed_dummies": list(result.removed),
        "network": ff.network_document(result.network),
    }
    text = ff.serialize_network(result.network)
    if result.removed:
        text += "# removed: " + ", ".join(result.removed) + "\n"
    _emit(args, doc, text)
    return EXIT_OK


def _cmd_value(args) -> int:
    network = _load(args.file)
    coalition = _parse_coalition(network, args.coalition)
    value = gamma(network, coalition)
    _emit(args, {"value": ff.format_rational(value)}, ff.format_rational(value) + "\n")
    return EXIT_OK


def _cmd_shapley(args) -> int:
    network = _load(args.file)
    if args.exact_bruteforce:
        payoffs = shapley_bruteforce(network, max_players=args.max_players)
    else:
        verdict = recognize(network)
        if verdict.convex:
            payoffs = shapley_fast(verdict.certificate)
        else:
            payoffs = shapley_bruteforce(network, max_players=args.max_players)
    _emit(args, ff.allocation_document(payoffs), ff.allocation_text(payoffs))
    return EXIT_OK


def _cmd_dividends(args) -> int:
    network = _load(args.file)
    table = dividends(network, max_players=args.max_players)
    doc = ff.dividends_document(table)
    lines = [
        f"{key} = {val}" for key, val in sorted(doc["dividends"].items())
    ]
    _emit(args, doc, ("\n".join(lines) + "\n") if lines else "all dividends are zero\n")
    return EXIT_OK


def _cmd_oracle(args) -> int:
    network = _load(args.file)
    violation = is_convex_bruteforce(network, max_players=args.max_players)
    if violation is None:
        _emit(args, {"convex": True}, "convex (exhaustive check)\n")
        return EXIT_OK
    doc = {
        "convex": False,
        "violation": {
            "player": violation.player,
            "smaller": sorted(violation.smaller),
            "larger": sorted(violation.larger),
            "gain_joining_smaller": ff.format_rational(
                violation.value_smaller_with - violation.value_smaller
            ),
            "gain_joining_larger": ff.format_rational(
                violation.value_larger_with - violation.value_larger
            ),
        },
    }
    text = (
        f"not convex: player {violation.player} gains "
        f"{doc['violation']['gain_joining_smaller']} joining "
        f"{{{','.join(doc['violation']['smaller'])}}} but only "
        f"{doc['violation']['gain_joining_larger']} joining the larger "
        f"{{{','.join(doc['violation']['larger'])}}}\n"
    )
    _emit(args, doc, text)
    return EXIT_VIOLATED


def _cmd_core_check(args) -> int:
    network = _load(args.file)
    allocation = _parse_allocation(args.allocation)
    try:
        blocking = core_membership(network, allocation, max_players=args.max_players)
    except NotEfficient as exc:
        _emit(
            args,
            {"in_core": False, "reason": "not_efficient", "detail": str(exc)},
            f"not in core: {exc}\n",
        )
        return EXIT_VIOLATED
    if blocking is None:
        _emit(args, {"in_core": True}, "allocation is in the core\n")
        return EXIT_OK
    _emit(
        args,
        {"in_core": False, "reason": "blocking_coalition", "coalition": sorted(blocking)},
        f"not in core: coalition {{{','.join(sorted(blocking))}}} blocks\n",
    )
    return EXIT_VIOLATED


def _cmd_pmas(args) -> int:
    network = _load(args.file)
    verdict = recognize(network)
    if not verdict.convex:
        _emit(
            args,
            ff.verdict_document(verdict),
            "not convex; no scheme constructed\n" + ff.verdict_text(verdict),
        )
        return EXIT_VIOLATED
    scheme = pmas_construct(verdict.certificate, max_players=args.max_players)
    sanity = verify_pmas(network, scheme, max_players=args.max_players)
    if sanity is not None:  # pragma: no cover - construction guarantees this
        raise AssertionError(f"constructed scheme failed verification: {sanity}")
    doc = ff.pmas_document(scheme)
    lines = []
    for key in sorted(doc["pmas"]):
        alloc = doc["pmas"][key]
        lines.append(f"{{{key}}}: " + ", ".join(f"{l}={v}" for l, v in sorted(alloc.items())))
    _emit(args, doc, "\n".join(lines) + "\n")
    return EXIT_OK


def _cmd_decompose(args) -> int:
    network = _load(args.file)
    verdict = recognize(network)
    _emit(args, ff.verdict_document(verdict), ff.verdict_text(verdict))
    return EXIT_OK if verdict.convex else EXIT_VIOLATED


def _cmd_gen(args) -> int:
    if args.broken is not None:
        network = gen_broken(args.seed, args.broken.replace("-", "_"))
    else:
        params = ConvexGenParams(
            path_count=args.paths,
            max_prefix_depth=args.max_depth,
            capacity_low=args.cap_low,
            capacity_high=args.cap_high,
        )
        network = gen_convex(args.seed, params)
    sys.stdout.write(ff.serialize_network(network))
    return EXIT_OK


# -- wiring ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flowgame",
        description="Cooperative flow games: convexity recognition and solution concepts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, bound=False):
        p.add_argument("--format", choices=("text", "json"), default="text")
        if bound:
            p.add_argument(
                "--max-players",
                type=int,
                default=16,
                help="refuse exhaustive work beyond this many arcs",
            )

    p = sub.add_parser("check", help="decide convexity; certificate or witness")
    p.add_argument("file")
    p.add_argument("--diagnostics", action="store_true", help="include structural checks")
    common(p)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("reduce", help="strip dummy arcs")
    p.add_argument("file")
    common(p)
    p.set_defaults(func=_cmd_reduce)

    p = sub.add_parser("value", help="worth of a coalition (max flow)")
    p.add_argument("file")
    p.add_argument("--coalition", default="@all", help="comma-separated labels or @all")
    common(p)
    p.set_defaults(func=_cmd_value)

    p = sub.add_parser("shapley", help="Shapley payoffs (fast path when convex)")
    p.add_argument("file")
    p.add_argument(
        "--exact-bruteforce",
        action="store_true",
        help="force the exhaustive order-average computation",
    )
    common(p, bound=True)
    p.set_defaults(func=_cmd_shapley)

    p = sub.add_parser("dividends", help="nonzero unanimity coordinates")
    p.add_argument("file")
    common(p, bound=True)
    p.set_defaults(func=_cmd_dividends)

    p = sub.add_parser("oracle", help="exhaustive convexity check")
    p.add_argument("file")
    common(p, bound=True)
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("core-check", help="test an allocation for core membership")
    p.add_argument("file")
    p.add_argument(
        "--allocation",
        required=True,
        help="comma-separated label=value pairs, values exact rationals",
    )
    common(p, bound=True)
    p.set_defaults(func=_cmd_core_check)

    p = sub.add_parser("pmas", help="population monotonic allocation scheme")
    p.add_argument("file")
    common(p, bound=True)
    p.set_defaults(func=_cmd_pmas)

    p = sub.add_parser("decompose", help="unanimity decomposition of a convex game")
    p.add_argument("file")
    common(p)
    p.set_defaults(func=_cmd_decompose)

    p = sub.add_parser("gen", help="emit a generated instance")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--paths", type=int, default=4)
    p.add_argument("--max-depth", type=int, default=2)
    p.add_argument("--cap-low", type=int, default=1)
    p.add_argument("--cap-high", type=int, default=9)
    p.add_argument(
        "--broken",
        choices=[k.replace("_", "-") for k in BROKEN_KINDS],
        default=None,
        help="perturb the instance to break one condition",
    )
    p.set_defaults(func=_cmd_gen)

    return parser


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return EXIT_OK if code in (0, None) else EXIT_INPUT
    try:
        return args.func(args)
    except (ParseError, NetworkValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except TooManyPlayers as exc:
        print(f"error: {exc}; raise --max-players to force it", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (FlowGameError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
