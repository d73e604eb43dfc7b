"""Command-line front door.

``storyloom play package.zip --responses Forest,Town`` prints the
deterministic playback event trace as NDJSON, which is also the format
golden-trace tests pin.  All failures exit nonzero with the error code
on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .assets import AssetStore
from .errors import StoryError
from .model import new_story
from .persistence import PackageStore, export_package, load_story
from .playback import Phase, run_story, trace_lines
from .providers.mock import MockTextProvider
from .screenplay import compile_screenplay
from .serialize import to_plain


def _cmd_run(args) -> int:
    import uvicorn

    from .service.app import create_app
    from .service.config import load_config

    config = load_config(args.config)
    app = create_app(config)
    try:
        uvicorn.run(app, host=config.host, port=config.port, log_level="info")
    except OSError as exc:
        print(f"BindError: {exc}", file=sys.stderr)
        return 2
    return 0


def _cmd_new_story(args) -> int:
    store = PackageStore(args.store)
    story = new_story(title=args.title, story_id=args.id)
    package_id = store.save(story, AssetStore())
    print(package_id)
    return 0


def _cmd_compile(args) -> int:
    storyline = Path(args.storyline).read_text(encoding="utf-8")
    if args.reply:
        provider = MockTextProvider(replies=[Path(args.reply).read_text(encoding="utf-8")])
    else:
        provider = MockTextProvider()
    report = compile_screenplay(storyline, provider)
    out = {
        "scenes": [to_plain(s) for s in report.scenes],
        "repairs": list(report.repairs),
        "rejected": report.rejected,
    }
    print(json.dumps(out, indent=2, ensure_ascii=False))
    return 1 if report.rejected else 0


def _cmd_play(args) -> int:
    responses = [r for r in (args.responses or "").split(",") if r]
    story = load_story(args.package, AssetStore())
    state, events = run_story(
        story, responses, dt=args.dt, max_seconds=args.max_seconds
    )
    for line in trace_lines(events):
        print(line)
    if state.phase is Phase.AWAITING_INPUT:
        print("stalled: awaiting a response; pass more via --responses", file=sys.stderr)
        return 3
    if state.phase is not Phase.FINISHED:
        print(f"stalled after {args.max_seconds} seconds of story time", file=sys.stderr)
        return 3
    return 0


def _cmd_export(args) -> int:
    store = PackageStore(args.store)
    assets = AssetStore()
    story = store.load(args.story_id, assets)
    path = export_package(story, assets, args.dest)
    print(path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="storyloom")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="serve the authoring API")
    run.add_argument("--config", default=None, help="path to a JSON config file")
    run.set_defaults(fn=_cmd_run)

    new = sub.add_parser("new-story", help="create an empty story package")
    new.add_argument("--store", required=True, help="package store directory")
    new.add_argument("--title", default="", help="story title")
    new.add_argument("--id", default=None, help="explicit story id")
    new.set_defaults(fn=_cmd_new_story)

    comp = sub.add_parser("compile", help="compile a storyline file into a screenplay")
    comp.add_argument("storyline", help="file with the storyline text")
    comp.add_argument(
        "--reply", default=None, help="file with a canned screenwriter reply to parse"
    )
    comp.set_defaults(fn=_cmd_compile)

    play = sub.add_parser("play", help="print a package's playback trace as NDJSON")
    play.add_argument("package", help="package directory or zip archive")
    play.add_argument("--responses", default="", help="comma-separated response labels")
    play.add_argument("--dt", type=float, default=0.25, help="tick size in seconds")
    play.add_argument("--max-seconds", type=float, default=600.0, help="story-time cap")
    play.set_defaults(fn=_cmd_play)

    exp = sub.add_parser("export", help="export a stored story as a zip archive")
    exp.add_argument("--store", required=True, help="package store directory")
    exp.add_argument("story_id", help="story to export")
    exp.add_argument("dest", help="zip file to write")
    exp.set_defaults(fn=_cmd_export)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except StoryError as exc:
        print(f"{exc.code}: {exc.message}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"IOError: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
