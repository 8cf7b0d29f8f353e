"""Command line interface for the match simulator.

    simgen generate --seed 7 --duration 1200 --inject P03:afk:t0=200,t1=400
    simgen corpus --base-seed 1 --per-archetype 10 --baseline 20 --out corpus/
"""

from __future__ import annotations

import argparse
import sys

from ..errors import GrieferLensError
from .generate import Injection, Scenario, generate_corpus, generate_match


def _parse_injection(spec: str) -> Injection:
    parts = spec.split(":")
    if len(parts) < 2:
        raise argparse.ArgumentTypeError(
            f"bad injection {spec!r}; expected player:type[:k=v,k=v]"
        )
    player_id, griefer_type = parts[0], parts[1]
    params: dict = {}
    if len(parts) > 2 and parts[2]:
        for pair in parts[2].split(","):
            if "=" not in pair:
                raise argparse.ArgumentTypeError(f"bad injection parameter {pair!r}")
            key, value = pair.split("=", 1)
            try:
                params[key] = float(value)
            except ValueError:
                params[key] = value
    return Injection(player_id=player_id, griefer_type=griefer_type, params=params)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="simgen", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="generate one match")
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--duration", type=float, default=1200.0)
    gen.add_argument(
        "--inject",
        action="append",
        default=[],
        type=_parse_injection,
        metavar="PLAYER:TYPE[:K=V,...]",
    )
    gen.add_argument("--out", default="-", help="telemetry output file ('-' = stdout)")
    gen.add_argument("--truth-out", default=None, help="ground truth output file")

    corpus = sub.add_parser("corpus", help="generate a labeled corpus directory")
    corpus.add_argument("--base-seed", type=int, required=True)
    corpus.add_argument("--per-archetype", type=int, required=True)
    corpus.add_argument("--baseline", type=int, required=True)
    corpus.add_argument("--out", required=True)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "generate":
            scenario = Scenario(
                seed=args.seed,
                duration_s=args.duration,
                injections=tuple(args.inject),
            )
            telemetry, truth = generate_match(scenario)
            if args.out == "-":
                sys.stdout.write(telemetry + "\n")
            else:
                with open(args.out, "w", encoding="utf-8") as fh:
                    fh.write(telemetry)
                print(f"wrote {args.out} (match_id={truth.match_id})")
            if args.truth_out:
                with open(args.truth_out, "w", encoding="utf-8") as fh:
                    fh.write(truth.to_json())
        else:
            manifest = generate_corpus(
                args.base_seed, args.per_archetype, args.baseline, args.out
            )
            print(f"wrote {len(manifest['entries'])} matches to {args.out}")
    except GrieferLensError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
