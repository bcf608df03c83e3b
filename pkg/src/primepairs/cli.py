"""Command-line interface.

Verbs: sieve (cache admin), verify (identity suite), pairs (pair counts by
all methods), decompose, constants, spectrum, sweep.  Exit codes:
0 success, 1 usage error, 2 identity violation, 3 resource limit.
"""

from __future__ import annotations

import argparse
import sys

from .errors import CacheError, IdentityError, PrimePairsError, ResourceLimitError, UsageError
from .harness import (
    DEFAULT_TOLERANCES,
    ExperimentConfig,
    cache_admin,
    load_config_file,
    pairs_report,
    run,
    validate_config,
)
from .reports import write_csv, write_json

_VERB_MODE = {
    "verify": "identity-suite",
    "decompose": "decompose",
    "constants": "constants",
    "spectrum": "spectrum-export",
    "sweep": "hl-ratio-sweep",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part]
    except ValueError:
        raise UsageError(f"expected a comma-separated integer list, got {text!r}")


def _tolerance_pair(text: str) -> tuple[str, float]:
    key, sep, value = text.partition("=")
    if not sep:
        raise UsageError(f"--tolerance expects KEY=VAL, got {text!r}")
    try:
        return key, float(value)
    except ValueError:
        raise UsageError(f"tolerance value must be a number, got {value!r}")


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON config file; flags override its keys")
    parser.add_argument("--n", action="append", help="extent(s), comma-separated, repeatable")
    parser.add_argument("--two-k", action="append", help="even shift(s) 2k, comma-separated")
    parser.add_argument("--z", action="append", help="primorial bound(s) z, comma-separated")
    parser.add_argument("--cutoff", type=int, help="prime cutoff for constants")
    parser.add_argument("--out", help="output directory (or file for single-file verbs)")
    parser.add_argument("--cache-dir", help="prime-table cache directory")
    parser.add_argument("--format", choices=("csv", "json"), help="tabular output format")
    parser.add_argument(
        "--tolerance",
        action="append",
        default=[],
        metavar="KEY=VAL",
        help=f"override a named tolerance; keys: {', '.join(sorted(DEFAULT_TOLERANCES))}",
    )
    parser.add_argument("--stamp", action="store_true", help="stamp reports with a timestamp")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="primepairs", description=__doc__)
    sub = parser.add_subparsers(dest="verb", required=True)

    sieve = sub.add_parser("sieve", parents=[], help="prime-table cache admin")
    sieve.add_argument("--action", choices=("build", "verify", "purge"), required=True)
    sieve.add_argument("--n", type=int, required=True)
    sieve.add_argument("--cache-dir", default="cache")

    for verb, help_text in (
        ("verify", "run the identity suite"),
        ("pairs", "pair counts by linear sieve, circular sieve, and spectrum"),
        ("decompose", "main-term / error-spectrum decomposition"),
        ("constants", "Hardy-Littlewood constants with truncation bounds"),
        ("spectrum", "export a spectrum as CSV plus JSON sidecar"),
        ("sweep", "pair-count vs prediction ratio sweep"),
    ):
        p = sub.add_parser(verb, help=help_text)
        _add_common(p)
        if verb == "spectrum":
            p.add_argument("--function", choices=("prime", "mangoldt"), default="prime")
    return parser


def _config_from_args(args: argparse.Namespace, mode: str) -> ExperimentConfig:
    raw = load_config_file(args.config) if args.config else {}
    raw["mode"] = mode
    if args.n:
        raw["n_values"] = [v for part in args.n for v in _int_list(part)]
    if args.two_k:
        raw["two_k_values"] = [v for part in args.two_k for v in _int_list(part)]
    if args.z:
        raw["z_schedule"] = [v for part in args.z for v in _int_list(part)]
    if args.cutoff is not None:
        raw["cutoff"] = args.cutoff
    if args.out:
        raw["output_dir"] = args.out
    if args.cache_dir:
        raw["cache_dir"] = args.cache_dir
    if args.format:
        raw["out_format"] = args.format
    if args.stamp:
        raw["stamp"] = True
    if getattr(args, "function", None):
        raw["source_function"] = args.function
    overrides = dict(raw.pop("tolerances", {}))
    for pair in args.tolerance:
        key, value = _tolerance_pair(pair)
        overrides[key] = value
    raw["tolerances"] = overrides
    try:
        config = ExperimentConfig(**raw)
    except TypeError as exc:
        raise UsageError(str(exc))
    problems = validate_config(config)
    if problems:
        raise UsageError("invalid config:\n  " + "\n  ".join(problems))
    return config


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.verb == "sieve":
            print(cache_admin(args.action, args.n, args.cache_dir))
            return 0
        config = _config_from_args(args, _VERB_MODE.get(args.verb, "identity-suite"))
        if args.verb == "pairs":
            rows = pairs_report(config)
            columns = ["n", "two_k", "linear", "circular", "spectral"]
            print(",".join(columns))
            for row in rows:
                print(",".join(str(cell) for cell in row))
            if args.out:
                if config.out_format == "json":
                    write_json(args.out, [dict(zip(columns, row)) for row in rows])
                else:
                    write_csv(args.out, {}, columns, rows, stamp=config.stamp)
                print(f"wrote {args.out}")
            return 0
        result = run(config)
        for line in result.lines:
            print(line)
        for path in result.files:
            print(f"wrote {path}")
        if result.failures:
            print(
                "identity violations: " + ", ".join(result.failures),
                file=sys.stderr,
            )
        return result.exit_code
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except IdentityError as exc:
        print(f"identity violation: {exc}", file=sys.stderr)
        return 2
    except CacheError as exc:
        print(f"cache error: {exc}", file=sys.stderr)
        return 2
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return 3
    except PrimePairsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
