"""Command line entry points.

Default mode opens a terminal session (interactive or scripted) or
serves the HTTP gateway. Two subcommands support the surrounding
workflow: `fixtures` exports the built-in synthetic worlds as JSON,
and `report` renders a journey map and CSV from a recorded event log.

Environment overrides: SRAI_FIXTURE replaces --fixture and
SRAI_LOG_DIR replaces --log wherever both are given.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .config import NavConfig
from .errors import StreetNavError
from .fixtures import BUILTIN_FIXTURES
from .gateway import Gateway, create_app
from .session import parse_log
from .world import World, load_fixture_path, save_fixture

ENV_FIXTURE = "SRAI_FIXTURE"
ENV_LOG_DIR = "SRAI_LOG_DIR"


def resolve_world(ref: str) -> World:
    """A fixture reference is a built-in name or a JSON file path."""
    if ref in BUILTIN_FIXTURES:
        return BUILTIN_FIXTURES[ref]()
    path = Path(ref)
    if path.exists():
        return load_fixture_path(path)
    raise SystemExit(
        f"unknown fixture {ref!r}; built-ins: {', '.join(sorted(BUILTIN_FIXTURES))}")


def load_config(path: str | None) -> NavConfig:
    if path is None:
        return NavConfig()
    try:
        overrides = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise SystemExit(f"could not read config {path}: {exc}")
    if not isinstance(overrides, dict):
        raise SystemExit(f"config file {path} must hold a JSON object")
    try:
        return NavConfig.from_overrides(overrides)
    except (TypeError, ValueError) as exc:
        raise SystemExit(f"invalid config overrides: {exc}")


def _run_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="streetnav",
        description="Accessible street-level panorama navigator.")
    parser.add_argument("--fixture", default="teleport-pair",
                        help="built-in fixture name or fixture JSON path")
    parser.add_argument("--serve", metavar="ADDR",
                        help="serve the HTTP gateway on HOST:PORT instead of a terminal")
    parser.add_argument("--speech", choices=("off", "provider"), default="off",
                        help="voice messages through the speech provider hook")
    parser.add_argument("--speech-rate", type=float, default=1.0)
    parser.add_argument("--config", metavar="PATH",
                        help="JSON file of navigation config overrides")
    parser.add_argument("--log", metavar="PATH",
                        help="directory for session event logs")
    parser.add_argument("--script", metavar="PATH",
                        help="key-token script to replay instead of stdin")
    parser.add_argument("--start-pano", metavar="ID")
    parser.add_argument("--heading", type=float, default=0.0)
    parser.add_argument("--profile", metavar="TEXT",
                        help="free-text user profile forwarded to the AI prompts")
    return parser


def _apply_env(args: argparse.Namespace) -> None:
    if os.environ.get(ENV_FIXTURE):
        args.fixture = os.environ[ENV_FIXTURE]
    if os.environ.get(ENV_LOG_DIR):
        args.log = os.environ[ENV_LOG_DIR]


def cmd_run(argv: list[str], out=None) -> int:
    from .terminal import LogSpeech, NullSpeech, TerminalClient

    args = _run_parser().parse_args(argv)
    _apply_env(args)
    out = out if out is not None else sys.stdout
    world = resolve_world(args.fixture)
    cfg = load_config(args.config)
    gateway = Gateway(default_world=world, cfg=cfg, log_dir=args.log)
    if args.serve:
        import uvicorn

        host, _, port = args.serve.rpartition(":")
        app = create_app(gateway)
        uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8000))
        return 0
    speech = LogSpeech(out) if args.speech == "provider" else NullSpeech()
    try:
        client = TerminalClient(gateway, start_pano=args.start_pano,
                                heading=args.heading, profile=args.profile,
                                out=out, speech=speech,
                                speech_rate=args.speech_rate)
    except StreetNavError as exc:
        raise SystemExit(str(exc))
    try:
        if args.script:
            try:
                tokens = Path(args.script).read_text().splitlines()
            except OSError as exc:
                raise SystemExit(f"could not read script {args.script}: {exc}")
            client.run_script(tokens)
        else:
            client.run_interactive()
    finally:
        gateway.close_session(client.session_id)
    return 0


def cmd_fixtures(argv: list[str], out=None) -> int:
    parser = argparse.ArgumentParser(
        prog="streetnav fixtures",
        description="Export or list the built-in synthetic worlds.")
    parser.add_argument("--list", action="store_true", help="list fixture names")
    parser.add_argument("--name", help="fixture to export")
    parser.add_argument("--out", metavar="PATH", help="file to write JSON to")
    args = parser.parse_args(argv)
    out = out if out is not None else sys.stdout
    if args.list or not args.name:
        for name in sorted(BUILTIN_FIXTURES):
            out.write(name + "\n")
        return 0
    if args.name not in BUILTIN_FIXTURES:
        raise SystemExit(f"unknown fixture {args.name!r}")
    world = BUILTIN_FIXTURES[args.name]()
    target = Path(args.out) if args.out else Path(f"{args.name}.json")
    save_fixture(world, target)
    out.write(f"wrote {target}\n")
    return 0


def cmd_report(argv: list[str], out=None) -> int:
    from .report import journey_report

    parser = argparse.ArgumentParser(
        prog="streetnav report",
        description="Render a journey map and CSV from an event log.")
    parser.add_argument("--log", required=True, metavar="PATH",
                        help="newline-delimited event log file")
    parser.add_argument("--fixture", default="teleport-pair",
                        help="world the log was recorded in")
    parser.add_argument("--out-dir", default=".", metavar="DIR")
    parser.add_argument("--name", default=None,
                        help="basename for the output files (default: log stem)")
    parser.add_argument("--start-pano", metavar="ID")
    parser.add_argument("--heading", type=float, default=0.0)
    args = parser.parse_args(argv)
    if os.environ.get(ENV_FIXTURE):
        args.fixture = os.environ[ENV_FIXTURE]
    out = out if out is not None else sys.stdout
    world = resolve_world(args.fixture)
    log_path = Path(args.log)
    try:
        records = parse_log(log_path.read_text())
    except OSError as exc:
        raise SystemExit(f"could not read log {args.log}: {exc}")
    except ValueError as exc:
        raise SystemExit(f"malformed log {args.log}: {exc}")
    name = args.name or log_path.stem
    report = journey_report(records, world, args.out_dir, name=name,
                            start_pano_id=args.start_pano,
                            start_heading=args.heading)
    out.write(f"wrote {report.png_path}\n")
    out.write(f"wrote {report.csv_path}\n")
    return 0


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv[:1] == ["fixtures"]:
        return cmd_fixtures(argv[1:])
    if argv[:1] == ["report"]:
        return cmd_report(argv[1:])
    return cmd_run(argv)


if __name__ == "__main__":
    sys.exit(main())
