"""Command-line front end.

Subcommands: ``exact``, ``rle-est``, ``colors-est``, ``lz-est``,
``lz-distinguish``, ``gen``, ``campaign run``, ``campaign audit``. Inputs are
raw byte files; the alphabet size defaults to the number of distinct bytes
unless ``--alphabet-size`` overrides it. All stochastic subcommands take
``--seed`` (default from $COMPEST_SEED, else 0) and print deterministic JSON:
replaying with the same seed reproduces the output byte for byte.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .accessor import QueryCountedString
from .campaign import CampaignConfig, audit_queries, run_campaign, write_result
from .colors import colors_estimate, colors_estimate_amplified
from .generators import GeneratorSpec
from .lz import distinguish_compressible, lz_estimate
from .oracles import exact_color_count, exact_distinct_substrings, exact_lz_cost, exact_rle_cost
from .rle import (
    rle_additive_estimate,
    rle_bucketed_estimate,
    rle_multiplicative_search,
    rle_refined_search,
)


def _emit(obj: dict) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True, indent=2) + "\n")


def _default_seed() -> int:
    return int(os.environ.get("COMPEST_SEED", "0"))


def _load(path: str, alphabet_size: int | None) -> QueryCountedString:
    return QueryCountedString.from_file(path, alphabet_size)


def _cmd_exact(args) -> int:
    acc = _load(args.file, args.alphabet_size)
    data = acc.materialize()
    if args.scheme == "rle":
        _emit(exact_rle_cost(data, acc.alphabet_size).to_json_dict())
    elif args.scheme == "lz":
        _emit(exact_lz_cost(data).to_json_dict())
    elif args.scheme == "distinct":
        if args.ell is None:
            raise SystemExit("--ell is required with --scheme distinct")
        _emit({"ell": args.ell, "count": exact_distinct_substrings(data, args.ell)})
    else:
        _emit({"colors": exact_color_count(data)})
    return 0


def _cmd_rle_est(args) -> int:
    acc = _load(args.file, args.alphabet_size)
    if args.mode == "additive":
        report = rle_additive_estimate(acc, args.epsilon, args.seed)
    elif args.mode == "bucketed":
        report = rle_bucketed_estimate(acc, args.epsilon, args.delta, args.seed)
    elif args.mode == "search":
        report = rle_multiplicative_search(acc, args.seed)
    else:
        report = rle_refined_search(acc, args.gamma, args.seed)
    _emit(report.to_json_dict())
    return 0


def _cmd_colors_est(args) -> int:
    acc = _load(args.file, args.alphabet_size)
    if args.delta is None:
        report = colors_estimate(acc, getattr(args, "lambda"), args.seed)
    else:
        report = colors_estimate_amplified(acc, getattr(args, "lambda"), args.delta, args.seed)
    _emit(report.to_json_dict())
    return 0


def _cmd_lz_est(args) -> int:
    acc = _load(args.file, args.alphabet_size)
    report = lz_estimate(acc, args.A, args.epsilon, args.seed)
    _emit(report.to_json_dict())
    return 0


def _cmd_lz_distinguish(args) -> int:
    acc = _load(args.file, args.alphabet_size)
    result = distinguish_compressible(acc, args.lo, args.hi, args.seed)
    _emit(result.to_json_dict())
    return 0


def _token_bytes(arr: np.ndarray) -> tuple[bytes, int]:
    """Fixed-width little-endian token encoding; width 1 when symbols fit a byte."""
    high = int(arr.max())
    width = max(1, (max(high, 1).bit_length() + 7) // 8)
    if width == 1:
        return arr.astype(np.uint8).tobytes(), 1
    return arr.astype(f"<u{width}").tobytes(), width


def _cmd_gen(args) -> int:
    params: dict = {}
    if args.family in ("wk", "coin"):
        params["n"] = args.n
    if args.family == "wk":
        params["k"] = args.k
    if args.family == "coin":
        params["p"] = args.p
    if args.family == "lztight":
        params.update(m=args.m, ell0=args.ell0)
    if args.family == "col2lz":
        params.update(alpha_prime=args.alpha_prime, sigma=args.sigma)
        if args.source:
            with open(args.source, "rb") as fh:
                params["tau"] = np.frombuffer(fh.read(), dtype=np.uint8)
        else:
            params.update(n_prime=args.n_prime, colors=args.colors)
    spec = GeneratorSpec(args.family, params, args.seed)
    built = spec.build()
    arr = built.materialize() if isinstance(built, QueryCountedString) else built
    raw, width = _token_bytes(arr)
    with open(args.out, "wb") as fh:
        fh.write(raw)
    if args.emit_meta:
        alphabet = int(np.unique(arr).size)
        meta = {
            "family": args.family,
            "seed": args.seed,
            "n": int(arr.size),
            "token_width_bytes": width,
            "alphabet_size": max(2, alphabet),
            "exact_rle_cost": exact_rle_cost(arr).total_cost,
            "exact_lz_cost": exact_lz_cost(arr).total_cost,
        }
        with open(args.out + ".meta.json", "w", encoding="utf-8") as fh:
            json.dump(meta, fh, sort_keys=True, indent=2)
            fh.write("\n")
    return 0


def _cmd_campaign(args) -> int:
    if args.action == "run":
        config = CampaignConfig.from_json_file(args.config)
        result = run_campaign(config)
        if config.output:
            write_result(result, config.output)
        print(
            f"campaign: {config.estimator} trials={config.trials} "
            f"success_rate={result.success_rate:.3f} mean_queries={result.mean_queries:.1f} "
            f"wall={result.wall_time_s:.2f}s",
            file=sys.stderr,
        )
        _emit(result.to_json_dict())
        return 0 if result.passed else 1
    with open(args.reports, "r", encoding="utf-8") as fh:
        entries = json.load(fh)
    rows = audit_queries(entries)
    _emit(
        {
            "rows": [
                {
                    "label": r.label,
                    "queries_used": r.queries_used,
                    "ceiling": r.ceiling,
                    "within": r.within,
                }
                for r in rows
            ],
            "all_within": all(r.within for r in rows),
        }
    )
    return 0 if all(r.within for r in rows) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="compest",
        description="Estimate RLE/LZ77 compressibility in sublinear time, "
        "with exact oracles and adversarial generators.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, needs_seed=True):
        p.add_argument("file", help="input file (raw bytes)")
        p.add_argument("--alphabet-size", type=int, default=None,
                       help="override the alphabet size (default: distinct bytes)")
        if needs_seed:
            p.add_argument("--seed", type=int, default=_default_seed(),
                           help="RNG seed (default: $COMPEST_SEED or 0)")

    p = sub.add_parser("exact", help="exact compression cost via the linear-time oracles")
    p.add_argument("--scheme", choices=["rle", "lz", "distinct", "colors"], default="rle")
    p.add_argument("--ell", type=int, default=None, help="substring length for --scheme distinct")
    add_common(p, needs_seed=False)
    p.set_defaults(func=_cmd_exact)

    p = sub.add_parser("rle-est", help="sublinear RLE cost estimators")
    p.add_argument("--mode", choices=["additive", "bucketed", "search", "refined"],
                   default="additive")
    p.add_argument("--epsilon", type=float, default=0.05, help="additive error fraction")
    p.add_argument("--delta", type=float, default=1 / 3, help="failure probability (bucketed)")
    p.add_argument("--gamma", type=float, default=0.5, help="multiplicative slack (refined)")
    add_common(p)
    p.set_defaults(func=_cmd_rle_est)

    p = sub.add_parser("colors-est", help="distinct-symbol (colors) estimator")
    p.add_argument("--lambda", type=float, required=True, dest="lambda",
                   help="multiplicative factor (> 1)")
    p.add_argument("--delta", type=float, default=None,
                   help="run the median-amplified variant with this failure probability")
    add_common(p)
    p.set_defaults(func=_cmd_colors_est)

    p = sub.add_parser("lz-est", help="sublinear LZ77 cost estimator")
    p.add_argument("--A", type=float, required=True, help="multiplicative factor (> 1)")
    p.add_argument("--epsilon", type=float, required=True, help="additive error fraction")
    add_common(p)
    p.set_defaults(func=_cmd_lz_est)

    p = sub.add_parser("lz-distinguish", help="decide low vs high LZ cost")
    p.add_argument("--lo", type=float, required=True, help="compressible-side threshold")
    p.add_argument("--hi", type=float, required=True, help="incompressible-side threshold")
    add_common(p)
    p.set_defaults(func=_cmd_lz_distinguish)

    p = sub.add_parser("gen", help="generate adversarial instances")
    p.add_argument("--family", choices=["wk", "coin", "lztight", "col2lz"], required=True)
    p.add_argument("--n", type=int, default=1024, help="length (wk, coin)")
    p.add_argument("--k", type=int, default=16, help="block count (wk)")
    p.add_argument("--p", type=float, default=0.5, help="heads bias (coin)")
    p.add_argument("--m", type=int, default=64, help="alphabet size (lztight)")
    p.add_argument("--ell0", type=int, default=16, help="phase count (lztight)")
    p.add_argument("--alpha-prime", type=float, default=0.1, help="color density (col2lz)")
    p.add_argument("--sigma", type=int, default=2, help="output alphabet size (col2lz)")
    p.add_argument("--source", default=None, help="colors-instance file (col2lz)")
    p.add_argument("--n-prime", type=int, default=500, help="colors length if no --source")
    p.add_argument("--colors", type=int, default=50, help="distinct colors if no --source")
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--out", required=True, help="output file (raw bytes)")
    p.add_argument("--emit-meta", action="store_true",
                   help="also write OUT.meta.json with exact oracle costs")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("campaign", help="batch experiments and query audits")
    p.add_argument("action", choices=["run", "audit"])
    p.add_argument("config", nargs="?", help="campaign config JSON (run)")
    p.add_argument("--reports", default=None, help="report-entry JSON file (audit)")
    p.set_defaults(func=_cmd_campaign)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "campaign":
        if args.action == "run" and not args.config:
            raise SystemExit("campaign run needs a config file")
        if args.action == "audit" and not args.reports:
            raise SystemExit("campaign audit needs --reports FILE")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
