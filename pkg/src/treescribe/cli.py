"""Command line entry points: render, navigate, serve, simulate."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import asset_path
from .chart import load_data, parse_spec, validate
from .customization import (
    PRESET_LEVELS,
    SettingsState,
    default_settings,
    load_settings_file,
    resolve_preset,
)
from .errors import ScriptParseError, TreescribeError
from .hierarchy import build_hierarchy
from .render import render_tree
from .service import SessionService, make_server
from .session import NavKey, apply_command, navigate, new_session, parse_script_line, run_script

BUNDLED_CHARTS = {
    "penguins": "penguins_chart.json",
    "stocks": "stocks_chart.json",
    "temps": "temps_chart.json",
}


def _load_chart(spec_arg: str, data_arg: str | None):
    bundled = spec_arg in BUNDLED_CHARTS
    if bundled:
        spec_text = asset_path(BUNDLED_CHARTS[spec_arg]).read_text(encoding="utf-8")
    else:
        spec_path = Path(spec_arg)
        if not spec_path.exists():
            raise TreescribeError(f"spec file not found: {spec_arg}")
        spec_text = spec_path.read_text(encoding="utf-8")
    spec = parse_spec(spec_text)

    if data_arg is not None:
        data_path = Path(data_arg)
        if not data_path.exists():
            raise TreescribeError(f"data file not found: {data_arg}")
        data = load_data(data_path.read_text(encoding="utf-8"))
    elif isinstance(spec.data_ref, str):
        if bundled:
            data = load_data(asset_path(spec.data_ref).read_text(encoding="utf-8"))
        else:
            data_path = Path(spec.data_ref)
            if not data_path.is_absolute():
                data_path = Path(spec_arg).parent / data_path
            if not data_path.exists():
                raise TreescribeError(f"data file not found: {data_path}")
            data = load_data(data_path.read_text(encoding="utf-8"))
    else:
        data = load_data(list(spec.data_ref))
    return validate(spec, data)


def _load_settings(args) -> SettingsState:
    settings = (load_settings_file(args.settings)
                if getattr(args, "settings", None) else default_settings())
    preset = getattr(args, "preset", None)
    if preset:
        for level in PRESET_LEVELS:
            resolve_preset(settings, level, preset)  # unknown name -> error
            settings.active[level] = preset
    return settings


def cmd_render(args) -> int:
    chart = _load_chart(args.spec, args.data)
    settings = _load_settings(args)
    text = render_tree(build_hierarchy(chart), settings)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)
    return 0


def cmd_navigate(args) -> int:
    chart = _load_chart(args.spec, args.data)
    session = new_session(build_hierarchy(chart), _load_settings(args))
    if sys.stdin.isatty():
        print("keys: up/down/left/right/x/y; commands: speak/focus/clear/preset; quit to exit")
    for line in sys.stdin:
        stripped = line.strip()
        if stripped in ("quit", "exit"):
            return 0
        try:
            action = parse_script_line(stripped)
        except ScriptParseError:
            print(f"unknown input: {stripped!r}", file=sys.stderr)
            continue
        if action is None:
            continue
        if isinstance(action, NavKey):
            announcement = navigate(session, action)
        else:
            announcement = apply_command(session, action)
        if announcement is not None and announcement.text:
            print(announcement.text)
            sys.stdout.flush()
    return 0


def cmd_simulate(args) -> int:
    chart = _load_chart(args.spec, args.data)
    session = new_session(build_hierarchy(chart), _load_settings(args))
    script_path = Path(args.script)
    if not script_path.exists():
        raise TreescribeError(f"script file not found: {args.script}")
    lines = script_path.read_text(encoding="utf-8").splitlines()
    transcript = run_script(session, lines)

    rows = "".join(
        f"{inp}\t{text.replace(chr(9), ' ')}\n" for inp, text in transcript)
    if args.out:
        Path(args.out).write_text(rows, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(rows)

    counts = {"presence": 0, "ordering": 0, "brevity": 0}
    for entry in session.action_log:
        if entry.category in counts:
            counts[entry.category] += 1
    total = sum(counts.values())
    sys.stdout.write("\ncategory\tcount\tpercent\n")
    for category, count in counts.items():
        percent = 100.0 * count / total if total else 0.0
        text = f"{percent:.2f}".rstrip("0").rstrip(".")
        sys.stdout.write(f"{category}\t{count}\t{text}\n")
    return 0


def cmd_serve(args) -> int:
    chart = _load_chart(args.spec, args.data)
    service = SessionService(build_hierarchy(chart), _load_settings(args))
    try:
        server = make_server(service, args.port)
    except OSError as e:
        print(f"cannot bind port {args.port}: {e}", file=sys.stderr)
        return 1
    print(f"listening on 127.0.0.1:{server.server_address[1]}", file=sys.stderr)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="treescribe",
        description="Navigable, customizable text hierarchies for charts.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, script=False, port=False):
        p.add_argument("--spec", required=True,
                       help="chart spec JSON path, or a bundled name "
                            f"({', '.join(sorted(BUNDLED_CHARTS))})")
        p.add_argument("--data", help="override the spec's data path (CSV)")
        p.add_argument("--settings", help="settings JSON to start from")
        p.add_argument("--preset", help="apply one preset name to every level")
        if script:
            p.add_argument("--script", required=True, help="key/command script, one per line")
        if port:
            p.add_argument("--port", type=int, required=True)
        p.add_argument("--out", help="write primary output to a file")

    common(sub.add_parser("render", help="print the whole tree as text"))
    common(sub.add_parser("navigate", help="interactive key/command loop on stdin"))
    common(sub.add_parser("simulate", help="run a script, emit transcript and action summary"),
           script=True)
    common(sub.add_parser("serve", help="run the session service"), port=True)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"render": cmd_render, "navigate": cmd_navigate,
               "simulate": cmd_simulate, "serve": cmd_serve}[args.command]
    try:
        return handler(args)
    except TreescribeError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
