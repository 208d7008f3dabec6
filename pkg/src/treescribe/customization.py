"""Persistent presets and ephemeral commands over the token vocabulary.

A preset fixes, for one hierarchy level, which tokens are present, their
brevity, and their narration order. Focus commands layer an ephemeral
move-to-front reordering on top; speak commands voice a token once without
touching any state.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from enum import Enum
from typing import Union

from .errors import (
    DuplicateName,
    EmptyName,
    MalformedDocument,
    UnknownPreset,
    UnknownToken,
    VersionMismatch,
)
from .hierarchy import HierarchyNode, Level
from .tokens import Brevity, TokenKind, available_tokens

SETTINGS_VERSION = 1

# Levels that take presets; the root's summary line is fixed.
PRESET_LEVELS = [Level.FACET, Level.AXIS, Level.SECTION, Level.DATAPOINT]

# The wayfinding core included by the medium/low builtins.
_MEDIUM_KINDS = {TokenKind.NODE_NAME, TokenKind.INDEX,
                 TokenKind.CHILD_NAMES, TokenKind.CHILD_SIZE}


class Setting(Enum):
    OFF = "off"
    SHORT = "short"
    LONG = "long"


@dataclass(frozen=True)
class TokenSetting:
    kind: TokenKind
    setting: Setting


@dataclass(frozen=True)
class Preset:
    name: str
    level: Level
    entries: tuple[TokenSetting, ...]  # order is narration order


@dataclass
class SettingsState:
    active: dict[Level, str]
    custom: list[Preset] = field(default_factory=list)

    def copy(self) -> "SettingsState":
        return SettingsState(active=dict(self.active), custom=list(self.custom))


def default_settings() -> SettingsState:
    return SettingsState(active={level: "medium" for level in PRESET_LEVELS})


def builtin_presets(level: Level) -> dict[str, Preset]:
    """The fixed high/medium/low presets for one level.

    high turns every available token on at long brevity; medium keeps the
    wayfinding subset (plus data values at the datapoint level) at long;
    low is the same subset at short.
    """
    kinds = available_tokens(level)
    subset = set(_MEDIUM_KINDS)
    if level == Level.DATAPOINT:
        subset.add(TokenKind.DATA_VALUES)

    def entries(on_setting: Setting, on: set[TokenKind]) -> tuple[TokenSetting, ...]:
        return tuple(
            TokenSetting(kind, on_setting if kind in on else Setting.OFF)
            for kind in kinds
        )

    return {
        "high": Preset("high", level, entries(Setting.LONG, set(kinds))),
        "medium": Preset("medium", level, entries(Setting.LONG, subset)),
        "low": Preset("low", level, entries(Setting.SHORT, subset)),
    }


def preset_names(settings: SettingsState, level: Level) -> list[str]:
    names = ["high", "medium", "low"]
    names.extend(p.name for p in settings.custom if p.level == level)
    return names


def resolve_preset(settings: SettingsState, level: Level, name: str) -> Preset:
    builtins = builtin_presets(level)
    if name in builtins:
        return builtins[name]
    for preset in settings.custom:
        if preset.level == level and preset.name == name:
            return preset
    raise UnknownPreset(f"no preset named {name!r} for the {level.value} level")


def create_preset(settings: SettingsState, name: str, level: Level,
                  entries: list[TokenSetting]) -> Preset:
    """Save a custom preset; it is immediately selectable like a builtin.

    Entries may cover a subset of the level's tokens; the rest are appended
    as off, in default order, so every preset is total over its level.
    """
    if not name or not name.strip():
        raise EmptyName("preset name must not be empty")
    if name in builtin_presets(level) or any(
            p.level == level and p.name == name for p in settings.custom):
        raise DuplicateName(f"preset {name!r} already exists for the {level.value} level")
    kinds = available_tokens(level)
    seen: set[TokenKind] = set()
    for entry in entries:
        if entry.kind not in kinds:
            raise UnknownToken(
                f"token {entry.kind.value!r} does not exist at the {level.value} level")
        if entry.kind in seen:
            raise UnknownToken(f"token {entry.kind.value!r} listed twice")
        seen.add(entry.kind)
    full = tuple(entries) + tuple(
        TokenSetting(kind, Setting.OFF) for kind in kinds if kind not in seen)
    preset = Preset(name=name, level=level, entries=full)
    settings.custom.append(preset)
    return preset


# --- commands ---

@dataclass(frozen=True)
class Speak:
    kind: TokenKind


@dataclass(frozen=True)
class Focus:
    kind: TokenKind


@dataclass(frozen=True)
class Clear:
    pass


@dataclass(frozen=True)
class ApplyPreset:
    level: Level
    name: str


Command = Union[Speak, Focus, Clear, ApplyPreset]


class ActionCategory(Enum):
    PRESENCE = "presence"
    ORDERING = "ordering"
    BREVITY = "brevity"


def categorize_action(cmd: Command) -> ActionCategory:
    """Bucket a command for the session action log.

    Speaking a token is a presence action (content included once); focusing
    and clearing reorder; preset shortcuts are brevity actions.
    """
    if isinstance(cmd, Speak):
        return ActionCategory.PRESENCE
    if isinstance(cmd, (Focus, Clear)):
        return ActionCategory.ORDERING
    return ActionCategory.BREVITY


def effective_tokens(node: HierarchyNode, settings: SettingsState,
                     focus_list: list[TokenKind]) -> list[tuple[TokenKind, Brevity]]:
    """The ordered (kind, brevity) list narrated for a non-root node.

    Starts from the level's active preset with off entries dropped, then
    applies focuses oldest-first as move-to-front operations, so the most
    recent focus ends up first. A focused token the preset turned off joins
    at long brevity; focused kinds that don't exist at this level are
    skipped.
    """
    preset = resolve_preset(settings, node.level, settings.active[node.level])
    pairs = [
        (e.kind, Brevity.SHORT if e.setting == Setting.SHORT else Brevity.LONG)
        for e in preset.entries
        if e.setting != Setting.OFF
    ]
    applicable = set(available_tokens(node.level))
    for kind in reversed(focus_list):
        if kind not in applicable:
            continue
        existing = next((p for p in pairs if p[0] == kind), None)
        if existing is not None:
            pairs.remove(existing)
            pairs.insert(0, existing)
        else:
            pairs.insert(0, (kind, Brevity.LONG))
    return pairs


def preset_setting(settings: SettingsState, level: Level, kind: TokenKind) -> Setting:
    if level == Level.ROOT:
        return Setting.LONG
    preset = resolve_preset(settings, level, settings.active[level])
    for entry in preset.entries:
        if entry.kind == kind:
            return entry.setting
    return Setting.OFF


# --- persistence ---

_LEVELS_BY_NAME = {lv.value: lv for lv in PRESET_LEVELS}
_KINDS_BY_NAME = {k.value: k for k in TokenKind}
_SETTINGS_BY_NAME = {s.value: s for s in Setting}


def save_settings(state: SettingsState) -> str:
    """Serialize to the versioned settings document (JSON, LF, stable order)."""
    doc = {
        "version": SETTINGS_VERSION,
        "active": {level.value: state.active[level] for level in PRESET_LEVELS},
        "custom": [
            {
                "name": p.name,
                "level": p.level.value,
                "entries": [{"kind": e.kind.value, "setting": e.setting.value}
                            for e in p.entries],
            }
            for p in state.custom
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def load_settings(document: str) -> SettingsState:
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as e:
        raise MalformedDocument(f"settings document is not valid JSON: {e}") from e
    if not isinstance(doc, dict):
        raise MalformedDocument("settings document must be a JSON object")
    unknown = set(doc) - {"version", "active", "custom"}
    if unknown:
        raise MalformedDocument(f"unknown settings keys: {sorted(unknown)}")
    if doc.get("version") != SETTINGS_VERSION:
        raise VersionMismatch(
            f"settings version {doc.get('version')!r}, expected {SETTINGS_VERSION}")

    state = default_settings()
    active = doc.get("active", {})
    if not isinstance(active, dict):
        raise MalformedDocument("active must be an object")
    for name, preset_name in active.items():
        if name not in _LEVELS_BY_NAME:
            raise MalformedDocument(f"unknown level {name!r}")
        if not isinstance(preset_name, str):
            raise MalformedDocument(f"active preset for {name!r} must be a string")
        state.active[_LEVELS_BY_NAME[name]] = preset_name

    for raw in doc.get("custom", []):
        if not isinstance(raw, dict) or {"name", "level", "entries"} - set(raw):
            raise MalformedDocument(f"malformed custom preset: {raw!r}")
        level = _LEVELS_BY_NAME.get(raw["level"])
        if level is None:
            raise MalformedDocument(f"unknown level {raw['level']!r}")
        entries = []
        for e in raw["entries"]:
            kind = _KINDS_BY_NAME.get(e.get("kind"))
            setting = _SETTINGS_BY_NAME.get(e.get("setting"))
            if kind is None or setting is None:
                raise MalformedDocument(f"malformed entry: {e!r}")
            entries.append(TokenSetting(kind, setting))
        state.custom.append(Preset(name=raw["name"], level=level, entries=tuple(entries)))

    # Every active name must resolve against builtins + loaded customs.
    for level, name in state.active.items():
        resolve_preset(state, level, name)
    return state


def save_settings_file(state: SettingsState, path: str) -> None:
    """Atomic write: the file never holds a half-written document."""
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8", newline="\n") as f:
        f.write(save_settings(state))
    os.replace(tmp, path)


def load_settings_file(path: str) -> SettingsState:
    with open(path, encoding="utf-8") as f:
        return load_settings(f.read())
