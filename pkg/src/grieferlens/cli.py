"""Workbench command line interface.

    grieferlens serve --data DIR --port 8800 [--config FILE] [--layout FILE]
    grieferlens ingest --data DIR FILE [FILE ...]
    grieferlens report --data DIR MATCH_ID
"""

from __future__ import annotations

import argparse
import sys

from .config import load_config
from .errors import GrieferLensError
from .service.app import create_app
from .service.store import MatchStore
from .spatial import load_layout


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="grieferlens", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--data", required=True, help="data directory")
    serve.add_argument("--port", type=int, default=8800)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--config", default=None, help="analysis-config JSON file")
    serve.add_argument("--layout", default=None, help="zone layout JSON file")
    serve.add_argument("--frontend", default=None, help="static frontend directory")

    ingest = sub.add_parser("ingest", help="ingest telemetry files")
    ingest.add_argument("--data", required=True)
    ingest.add_argument("--config", default=None)
    ingest.add_argument("files", nargs="+")

    report = sub.add_parser("report", help="print player summaries for a match")
    report.add_argument("--data", required=True)
    report.add_argument("--config", default=None)
    report.add_argument("match_id")
    return parser


def _store(args) -> MatchStore:
    config = load_config(args.config) if args.config else None
    layout = load_layout(args.layout) if getattr(args, "layout", None) else None
    return MatchStore(args.data, config=config, layout=layout)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "serve":
            import uvicorn

            app = create_app(_store(args), frontend_dir=args.frontend)
            uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
        elif args.command == "ingest":
            store = _store(args)
            for name in args.files:
                with open(name, "rb") as fh:
                    match_id, created = store.ingest(fh.read())
                print(f"{'ingested' if created else 'already stored'} {match_id}")
        else:
            store = _store(args)
            doc = store.summaries_doc(args.match_id)
            print(f"match {doc['match_id']}  (config {doc['config_hash']})")
            for player in doc["players"]:
                flags = ", ".join(
                    f"{f['griefer_type']}={f['severity']:.2f}" for f in player["findings"]
                )
                print(
                    f"\n{player['player_id']}  {player['hero_type']}"
                    f"  {player['assigned_position']}"
                    f"  reports={player['report_count']}"
                    + (f"  [{flags}]" if flags else "")
                )
                print(f"  {player['suspicion_paragraph']}")
    except GrieferLensError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
