"""Session service: one-JSON-message-per-request protocol over HTTP POST.

Each session is an isolated cursor + focus list + settings; requests within
a session are serialized, and responses carry a per-session sequence number.
The web client speaks exactly this protocol.
"""

from __future__ import annotations

import itertools
import json
import threading
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from .customization import (
    PRESET_LEVELS,
    SettingsState,
    TokenSetting,
    create_preset,
    preset_names,
    resolve_preset,
    save_settings,
)
from .errors import ScriptParseError, SettingsError, TreescribeError
from .hierarchy import HierarchyTree
from .render import describe
from .session import (
    ApplyPreset,
    NavKey,
    SessionState,
    apply_command,
    navigate,
    new_session,
    parse_script_line,
)
from .tokens import available_tokens

PROTOCOL_VERSION = 1

LEVEL_NAMES = [level.value.capitalize() for level in PRESET_LEVELS]

_SETTING_NAMES = {"off", "short", "long"}


@dataclass
class _Slot:
    session: SessionState
    lock: threading.Lock = field(default_factory=threading.Lock)
    seq: int = 0


class SessionService:
    """Holds the chart and hands out isolated sessions."""

    def __init__(self, tree: HierarchyTree, settings: SettingsState | None = None):
        self.tree = tree
        self.base_settings = settings
        self._slots: dict[str, _Slot] = {}
        self._ids = itertools.count(1)
        self._register_lock = threading.Lock()

    def handle(self, request: dict) -> dict:
        """Process one protocol message and build its response."""
        if not isinstance(request, dict) or "op" not in request:
            return {"ok": False, "seq": 0,
                    "error": {"code": "BadRequest", "message": "request needs an op"}}
        op = request["op"]
        if op == "init":
            return self._init()
        slot = self._slots.get(request.get("session", ""))
        if slot is None:
            return {"ok": False, "seq": 0,
                    "error": {"code": "UnknownSession",
                              "message": f"unknown session {request.get('session')!r}"}}
        with slot.lock:
            slot.seq += 1
            try:
                return self._dispatch(op, request, slot)
            except TreescribeError as e:
                return self._fail(slot, type(e).__name__, str(e))
            except Exception as e:  # defensive: a bug must not kill the session
                return self._fail(slot, "InternalError", str(e))

    def _init(self) -> dict:
        with self._register_lock:
            session_id = f"s{next(self._ids)}"
            settings = self.base_settings.copy() if self.base_settings else None
            slot = _Slot(session=new_session(self.tree, settings))
            self._slots[session_id] = slot
        with slot.lock:
            slot.seq += 1
            session = slot.session
            return {
                "ok": True,
                "session": session_id,
                "seq": slot.seq,
                "protocol": PROTOCOL_VERSION,
                "levels": LEVEL_NAMES,
                "cursor": session.cursor,
                "announcement": {
                    "text": describe(session.cursor_node, self.tree.chart,
                                     session.settings, session.focus_list),
                    "source": "navigation",
                },
            }

    def _fail(self, slot: _Slot, code: str, message: str) -> dict:
        return {"ok": False, "seq": slot.seq,
                "error": {"code": code, "message": message}}

    def _dispatch(self, op: str, request: dict, slot: _Slot) -> dict:
        session = slot.session
        if op == "navigate":
            key = request.get("key")
            if key not in NavKey._value2member_map_:
                return self._fail(slot, "BadRequest", f"unknown key {key!r}")
            announcement = navigate(session, NavKey(key))
            return {"ok": True, "seq": slot.seq, "cursor": session.cursor,
                    "announcement": {"text": announcement.text,
                                     "source": announcement.source.value}}
        if op == "command":
            line = request.get("command", "")
            try:
                action = parse_script_line(str(line))
            except ScriptParseError as e:
                return self._fail(slot, "ParseError", str(e))
            if action is None or isinstance(action, NavKey):
                return self._fail(slot, "BadRequest",
                                  f"not a command: {line!r}")
            announcement = apply_command(session, action)
            payload = {"ok": True, "seq": slot.seq, "cursor": session.cursor}
            if announcement is not None:
                payload["announcement"] = {"text": announcement.text,
                                           "source": announcement.source.value}
            return payload
        if op == "get_tree":
            return {"ok": True, "seq": slot.seq, "cursor": session.cursor,
                    "tree": self._serialize_tree(session)}
        if op == "get_settings":
            active_entries = {}
            for level in PRESET_LEVELS:
                preset = resolve_preset(session.settings, level,
                                        session.settings.active[level])
                active_entries[level.value] = [
                    {"kind": e.kind.value, "setting": e.setting.value}
                    for e in preset.entries]
            return {"ok": True, "seq": slot.seq,
                    "settings": json.loads(save_settings(session.settings)),
                    "active_entries": active_entries,
                    "presets": {level.value: preset_names(session.settings, level)
                                for level in PRESET_LEVELS},
                    "tokens": {level.value: [k.value for k in available_tokens(level)]
                               for level in PRESET_LEVELS}}
        if op == "set_preset":
            announcement = apply_command(
                session, _parse_apply_preset(request))
            return {"ok": True, "seq": slot.seq,
                    "announcement": {"text": announcement.text,
                                     "source": announcement.source.value}}
        if op == "create_preset":
            name, level, entries = _parse_new_preset(request)
            create_preset(session.settings, name, level, entries)
            return {"ok": True, "seq": slot.seq,
                    "announcement": {"text": f"saved {name} for the {level.value} level",
                                     "source": "menu"}}
        return self._fail(slot, "BadRequest", f"unknown op {op!r}")

    def _serialize_tree(self, session: SessionState) -> list[dict]:
        nodes = []
        for node in session.tree.iter_nodes():
            nodes.append({
                "id": node.id,
                "level": node.level.value,
                "depth": node.depth,
                "label": describe(node, self.tree.chart, session.settings,
                                  session.focus_list),
                "parent": node.parent.id if node.parent else None,
                "children": [c.id for c in node.children],
            })
        return nodes


def _parse_apply_preset(request: dict) -> ApplyPreset:
    level_name = request.get("level", "")
    levels = {lv.value: lv for lv in PRESET_LEVELS}
    if level_name not in levels:
        raise SettingsError(f"unknown level {level_name!r}")
    return ApplyPreset(levels[level_name], str(request.get("name", "")))


def _parse_new_preset(request: dict) -> tuple[str, object, list[TokenSetting]]:
    from .customization import Setting
    from .tokens import TokenKind

    levels = {lv.value: lv for lv in PRESET_LEVELS}
    level = levels.get(request.get("level", ""))
    if level is None:
        raise SettingsError(f"unknown level {request.get('level')!r}")
    kinds = {k.value: k for k in TokenKind}
    entries = []
    for raw in request.get("entries", []):
        kind = kinds.get(raw.get("kind", ""))
        setting_name = raw.get("setting", "")
        if kind is None or setting_name not in _SETTING_NAMES:
            raise SettingsError(f"malformed entry {raw!r}")
        entries.append(TokenSetting(kind, Setting(setting_name)))
    return str(request.get("name", "")), level, entries


class _Handler(BaseHTTPRequestHandler):
    service: SessionService
    protocol_version = "HTTP/1.1"

    def log_message(self, fmt, *args):  # quiet by default
        pass

    def _send_json(self, payload: dict, status: int = 200) -> None:
        body = (json.dumps(payload) + "\n").encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Access-Control-Allow-Methods", "POST, OPTIONS")
        self.end_headers()
        self.wfile.write(body)

    def do_OPTIONS(self):
        self._send_json({"ok": True})

    def do_POST(self):
        try:
            length = int(self.headers.get("Content-Length", "0"))
            request = json.loads(self.rfile.read(length).decode("utf-8"))
        except (ValueError, json.JSONDecodeError):
            self._send_json({"ok": False, "seq": 0,
                             "error": {"code": "BadRequest",
                                       "message": "body must be one JSON object"}})
            return
        self._send_json(self.service.handle(request))


def make_server(service: SessionService, port: int, host: str = "127.0.0.1") -> ThreadingHTTPServer:
    handler = type("BoundHandler", (_Handler,), {"service": service})
    return ThreadingHTTPServer((host, port), handler)


def serve_forever(service: SessionService, port: int) -> None:
    server = make_server(service, port)
    try:
        server.serve_forever()
    finally:
        server.server_close()
