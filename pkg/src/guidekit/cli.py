"""Command line entry points.

    guidekit run <config_dir> [--port N] [--host H] [--guidance-interval S]
                 [--inference-interval S] [--log FILE]
    guidekit validate <config_dir>
    guidekit replay <config_dir> <timeline_file> [--trace OUT]
                 [--guidance-interval S] [--inference-interval S]

Exit codes: 0 ok, 2 validation/input error, 1 runtime failure. ``run`` and
``replay`` drive the identical engine code path; only the clock and the
suggestion-id prefix differ.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .engine.replay import TimelineError, load_timeline, run_replay
from .script.errors import ScriptError
from .specs import FormatError, load_bundle, validate_bundle


def _load_and_validate(config_dir: str):
    """Returns (bundle, report) or raises SystemExit(2) with the problem on stderr."""
    try:
        bundle = load_bundle(config_dir)
    except (IOError, FormatError, ScriptError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        raise SystemExit(2) from None
    report = validate_bundle(bundle)
    return bundle, report


def cmd_validate(args) -> int:
    _, report = _load_and_validate(args.config_dir)
    print(report.render(), file=sys.stderr if not report.ok else sys.stdout)
    return 0 if report.ok else 2


def cmd_replay(args) -> int:
    bundle, report = _load_and_validate(args.config_dir)
    if not report.ok:
        print(report.render(), file=sys.stderr)
        return 2
    try:
        timeline = load_timeline(args.timeline_file)
    except (IOError, TimelineError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    config = bundle.config.with_overrides(
        guidance_interval_s=args.guidance_interval,
        inference_interval_s=args.inference_interval,
    )
    try:
        result = run_replay(bundle, timeline, config=config)
    except Exception as err:  # an engine crash, not a contained callback error
        print(f"error: replay failed: {err}", file=sys.stderr)
        return 1
    text = result.trace_text()
    if args.trace:
        Path(args.trace).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_run(args) -> int:
    bundle, report = _load_and_validate(args.config_dir)
    if not report.ok:
        print(report.render(), file=sys.stderr)
        return 2
    if report.warnings:
        print(report.render(), file=sys.stderr)

    import uvicorn

    from .api import create_app
    from .service import EngineService

    config = bundle.config.with_overrides(
        guidance_interval_s=args.guidance_interval,
        inference_interval_s=args.inference_interval,
    )
    if args.log:
        log_file = open(args.log, "a", encoding="utf-8", buffering=1)
        sink = lambda line: print(line, file=log_file)  # noqa: E731
    else:
        sink = print
    service = EngineService(bundle, config=config, log_sink=sink)
    app = create_app(service)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="guidekit")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="serve a bundle over REST + websocket")
    run.add_argument("config_dir")
    run.add_argument("--port", type=int, default=8000)
    run.add_argument("--host", default="127.0.0.1")
    run.add_argument("--guidance-interval", type=float, default=None)
    run.add_argument("--inference-interval", type=float, default=None)
    run.add_argument("--log", default=None, help="append the event log to this file")
    run.set_defaults(fn=cmd_run)

    validate = sub.add_parser("validate", help="check a bundle without running it")
    validate.add_argument("config_dir")
    validate.set_defaults(fn=cmd_validate)

    replay = sub.add_parser("replay", help="replay a timeline on a virtual clock")
    replay.add_argument("config_dir")
    replay.add_argument("timeline_file")
    replay.add_argument("--trace", default=None, help="write the trace here instead of stdout")
    replay.add_argument("--guidance-interval", type=float, default=None)
    replay.add_argument("--inference-interval", type=float, default=None)
    replay.set_defaults(fn=cmd_replay)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except SystemExit as exc:
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
