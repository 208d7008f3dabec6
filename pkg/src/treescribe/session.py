"""The cursor state machine: arrow-key navigation plus command handling."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum

from .customization import (
    ApplyPreset,
    Clear,
    Command,
    Focus,
    Setting,
    SettingsState,
    Speak,
    categorize_action,
    default_settings,
    preset_setting,
    resolve_preset,
)
from .errors import InapplicableToken, ScriptParseError, SettingsError
from .hierarchy import Axis, HierarchyNode, HierarchyTree, Level
from .render import Announcement, Source, describe, no_description
from .tokens import Brevity, TokenKind, available_tokens, render_token


class NavKey(Enum):
    UP = "up"
    DOWN = "down"
    LEFT = "left"
    RIGHT = "right"
    X = "x"
    Y = "y"


_BOUNDARY_TEXT = {
    NavKey.UP: "top of the chart",
    NavKey.DOWN: "no more detail",
    NavKey.LEFT: "no previous item",
    NavKey.RIGHT: "no next item",
}

# Spoken aliases for token kinds, matching the command box vocabulary.
KIND_ALIASES = {
    "name": TokenKind.NODE_NAME,
    "index": TokenKind.INDEX,
    "values": TokenKind.DATA_VALUES,
    "type": TokenKind.OBJECT_TYPE,
    "children": TokenKind.CHILD_NAMES,
    "size": TokenKind.CHILD_SIZE,
    "aggregate": TokenKind.AGGREGATE,
    "parent": TokenKind.PARENT_NAME,
    "depth": TokenKind.DEPTH,
    "quantile": TokenKind.CONTEXT_QUANTILE,
}
_KINDS_BY_NAME = {k.value: k for k in TokenKind}
_LEVELS_BY_NAME = {lv.value: lv for lv in Level if lv != Level.ROOT}


@dataclass
class LogEntry:
    timestamp: float
    category: str  # "navigation" or an ActionCategory value
    detail: str


@dataclass
class SessionState:
    tree: HierarchyTree
    cursor: str
    settings: SettingsState
    focus_list: list[TokenKind] = field(default_factory=list)  # most recent first
    action_log: list[LogEntry] = field(default_factory=list)

    @property
    def cursor_node(self) -> HierarchyNode:
        return self.tree.nodes_by_id[self.cursor]


def new_session(tree: HierarchyTree, settings: SettingsState | None = None) -> SessionState:
    return SessionState(tree=tree, cursor=tree.root.id,
                        settings=settings or default_settings())


def _log(session: SessionState, category: str, detail: str) -> None:
    session.action_log.append(LogEntry(time.time(), category, detail))


def _describe_cursor(session: SessionState) -> str:
    return describe(session.cursor_node, session.tree.chart,
                    session.settings, session.focus_list)


def _axis_target(session: SessionState, key: NavKey) -> HierarchyNode | None:
    """The x/y axis of the nearest enclosing facet, or of the chart itself."""
    channel = key.value
    node = session.cursor_node
    while node.parent is not None and node.level != Level.FACET:
        node = node.parent
    if node.level != Level.FACET and node.children and \
            node.children[0].level == Level.FACET:
        node = node.children[0]
    for child in node.children:
        if isinstance(child.payload, Axis) and child.payload.channel.value == channel:
            return child
    return None


def navigate(session: SessionState, key: NavKey) -> Announcement:
    """Move the cursor; boundary bumps announce without moving."""
    node = session.cursor_node
    target: HierarchyNode | None
    if key == NavKey.DOWN:
        target = node.children[0] if node.children else None
    elif key == NavKey.UP:
        target = node.parent
    elif key in (NavKey.LEFT, NavKey.RIGHT):
        if node.parent is None:
            target = None
        else:
            siblings = node.parent.children
            i = siblings.index(node) + (1 if key == NavKey.RIGHT else -1)
            target = siblings[i] if 0 <= i < len(siblings) else None
    else:
        target = _axis_target(session, key)

    _log(session, "navigation", key.value)
    if target is None:
        return Announcement(_BOUNDARY_TEXT.get(key, "no matching axis"), Source.BOUNDARY)
    session.cursor = target.id
    return Announcement(_describe_cursor(session), Source.NAVIGATION)


def apply_command(session: SessionState, cmd: Command) -> Announcement | None:
    """Execute a command box action against the cursor node.

    Speak never changes state; focus/clear touch only the ephemeral focus
    list; preset shortcuts change the persistent settings. Errors announce
    and leave everything unchanged.
    """
    category = categorize_action(cmd).value

    if isinstance(cmd, (Speak, Focus)):
        node = session.cursor_node
        _log(session, category, f"{'speak' if isinstance(cmd, Speak) else 'focus'} {cmd.kind.value}")
        if cmd.kind not in available_tokens(node.level):
            problem = InapplicableToken(
                f"{cmd.kind.value} is not available at the {node.level.value} level")
            return Announcement(str(problem), Source.SPEAK)
        if isinstance(cmd, Speak):
            setting = preset_setting(session.settings, node.level, cmd.kind)
            brevity = Brevity.SHORT if setting == Setting.SHORT else Brevity.LONG
            text = render_token(cmd.kind, brevity, node, session.tree.chart)
            return Announcement(text or no_description(), Source.SPEAK)
        if cmd.kind in session.focus_list:
            session.focus_list.remove(cmd.kind)
        session.focus_list.insert(0, cmd.kind)
        return None

    if isinstance(cmd, Clear):
        _log(session, category, "clear")
        session.focus_list.clear()
        return None

    _log(session, category, f"preset {cmd.level.value} {cmd.name}")
    try:
        resolve_preset(session.settings, cmd.level, cmd.name)
    except SettingsError as e:
        return Announcement(str(e), Source.MENU)
    session.settings.active[cmd.level] = cmd.name
    return Announcement(f"{cmd.level.value} preset set to {cmd.name}", Source.MENU)


def parse_kind(word: str) -> TokenKind | None:
    return _KINDS_BY_NAME.get(word) or KIND_ALIASES.get(word)


def parse_script_line(line: str) -> NavKey | Command | None:
    """One script token per line; None for blanks and comments."""
    stripped = line.strip()
    if not stripped or stripped.startswith("#"):
        return None
    words = stripped.split()
    if len(words) == 1 and words[0] in NavKey._value2member_map_:
        return NavKey(words[0])
    if len(words) == 1 and words[0] == "clear":
        return Clear()
    if len(words) == 2 and words[0] in ("speak", "focus"):
        kind = parse_kind(words[1])
        if kind is not None:
            return Speak(kind) if words[0] == "speak" else Focus(kind)
    if len(words) == 3 and words[0] == "preset":
        level = _LEVELS_BY_NAME.get(words[1])
        if level is not None:
            return ApplyPreset(level, words[2])
    raise ScriptParseError(0, stripped)


def run_script(session: SessionState, lines: list[str]) -> list[tuple[str, str]]:
    """Execute script lines, threading the session through.

    Returns (input, announcement-text) per executed line; announcement-less
    commands (focus, clear) contribute an empty string.
    """
    transcript = []
    for line_no, line in enumerate(lines, start=1):
        try:
            action = parse_script_line(line)
        except ScriptParseError:
            raise ScriptParseError(line_no, line.strip()) from None
        if action is None:
            continue
        if isinstance(action, NavKey):
            announcement = navigate(session, action)
        else:
            announcement = apply_command(session, action)
        transcript.append((line.strip(), announcement.text if announcement else ""))
    return transcript
