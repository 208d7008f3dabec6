"""Chart specifications and tabular datasets: parsing, loading, validation.

The input model is deliberately small: point/line/bar marks, x/y/color/facet
channels, and datasets held as complete typed rows. Stacked bars and small
multiples are expressed through the facet channel rather than extra marks.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Any, Iterable

from .errors import (
    DataError,
    DuplicateChannel,
    EmptyCell,
    EmptySource,
    FieldNotFound,
    KindMismatch,
    MalformedSpec,
    MissingChannel,
    MixedTypes,
    RaggedRows,
    UnknownChannel,
)

DEFAULT_BIN_TARGET = 10


class FieldKind(Enum):
    QUANTITATIVE = "quantitative"
    TEMPORAL = "temporal"
    NOMINAL = "nominal"


class Mark(Enum):
    POINT = "point"
    LINE = "line"
    BAR = "bar"


class Channel(Enum):
    X = "x"
    Y = "y"
    COLOR = "color"
    FACET = "facet"


@dataclass(frozen=True)
class FieldDef:
    """A typed dataset column. `unit` is display-only (e.g. "millimeters")."""

    name: str
    kind: FieldKind
    unit: str | None = None


@dataclass(frozen=True)
class EncodingDef:
    channel: Channel
    field: str
    bin_target_count: int = DEFAULT_BIN_TARGET


@dataclass(frozen=True)
class ChartSpec:
    mark: Mark
    encodings: tuple[EncodingDef, ...]
    data_ref: str | tuple[dict, ...]  # file path, or inline records
    title: str | None = None

    def encoding(self, channel: Channel) -> EncodingDef | None:
        for enc in self.encodings:
            if enc.channel == channel:
                return enc
        return None


@dataclass(frozen=True)
class Dataset:
    fields: tuple[FieldDef, ...]
    rows: tuple[dict[str, Any], ...]

    def field_def(self, name: str) -> FieldDef | None:
        for f in self.fields:
            if f.name == name:
                return f
        return None

    def values(self, name: str) -> list[Any]:
        return [row[name] for row in self.rows]


@dataclass(frozen=True)
class ValidatedChart:
    """A spec whose encodings all resolve against the dataset."""

    spec: ChartSpec
    data: Dataset
    resolved: dict[Channel, FieldDef] = field(default_factory=dict)

    def field_for(self, channel: Channel) -> FieldDef | None:
        return self.resolved.get(channel)


def parse_iso_datetime(text: str) -> datetime:
    """Parse an ISO-8601 date or datetime to a naive UTC datetime."""
    s = text.strip()
    if s.endswith(("Z", "z")):
        s = s[:-1] + "+00:00"
    dt = datetime.fromisoformat(s)
    if dt.tzinfo is not None:
        dt = dt.astimezone(timezone.utc).replace(tzinfo=None)
    return dt


def _as_number(value: Any) -> float | None:
    if isinstance(value, bool):
        return None
    if isinstance(value, (int, float)):
        return float(value) if math.isfinite(value) else None
    if isinstance(value, str):
        try:
            n = float(value)
        except ValueError:
            return None
        return n if math.isfinite(n) else None
    return None


def _as_datetime(value: Any) -> datetime | None:
    if isinstance(value, datetime):
        return value
    if isinstance(value, str):
        try:
            return parse_iso_datetime(value)
        except ValueError:
            return None
    return None


def _infer_column(name: str, raw: list[Any]) -> tuple[FieldKind, list[Any]]:
    """Infer a column kind and coerce its values.

    quantitative if every value parses as a finite number; temporal if every
    value parses as an ISO-8601 date; nominal only when no value does either.
    A column mixing parseable and plain-text values is an error, not nominal.
    """
    if not raw:
        return FieldKind.NOMINAL, []
    numbers = [_as_number(v) for v in raw]
    if all(n is not None for n in numbers):
        return FieldKind.QUANTITATIVE, numbers
    stamps = [_as_datetime(v) for v in raw]
    if all(t is not None for t in stamps):
        return FieldKind.TEMPORAL, stamps
    parseable = sum(1 for n, t in zip(numbers, stamps) if n is not None or t is not None)
    if parseable:
        raise MixedTypes(name)
    if not all(isinstance(v, str) for v in raw):
        raise MixedTypes(name)
    return FieldKind.NOMINAL, list(raw)


def load_data(source: str | Iterable[dict]) -> Dataset:
    """Load a dataset from CSV text or an inline list of records.

    Row order is preserved. Field kinds are inferred per `_infer_column`;
    empty cells are rejected rather than imputed.
    """
    if isinstance(source, str):
        names, columns, n_rows = _read_csv(source)
    else:
        names, columns, n_rows = _read_records(list(source))

    fields = []
    coerced: dict[str, list[Any]] = {}
    for name in names:
        kind, values = _infer_column(name, columns[name])
        fields.append(FieldDef(name=name, kind=kind))
        coerced[name] = values
    rows = tuple({name: coerced[name][i] for name in names} for i in range(n_rows))
    return Dataset(fields=tuple(fields), rows=rows)


def _read_csv(text: str) -> tuple[list[str], dict[str, list[Any]], int]:
    reader = csv.reader(io.StringIO(text))
    table = [row for row in reader if row]
    if not table:
        raise EmptySource("CSV source is empty")
    header, *body = table
    if any(not h for h in header):
        raise DataError("CSV header has an unnamed column")
    if len(set(header)) != len(header):
        raise DataError("duplicate column name in CSV header")
    for i, row in enumerate(body):
        if len(row) != len(header):
            raise RaggedRows(f"row {i + 1} has {len(row)} cells, expected {len(header)}")
        for name, cell in zip(header, row):
            if cell == "":
                raise EmptyCell(f"row {i + 1} has an empty {name!r} cell")
    columns = {name: [row[j] for row in body] for j, name in enumerate(header)}
    return header, columns, len(body)


def _read_records(records: list[dict]) -> tuple[list[str], dict[str, list[Any]], int]:
    if not records:
        raise EmptySource("inline record list is empty")
    names = list(records[0].keys())
    for i, rec in enumerate(records):
        if list(rec.keys()) != names and set(rec.keys()) != set(names):
            raise RaggedRows(f"record {i} does not share the first record's keys")
        for name in names:
            if rec.get(name) is None or rec.get(name) == "":
                raise EmptyCell(f"record {i} has an empty {name!r} value")
    columns = {name: [rec[name] for rec in records] for name in names}
    return names, columns, len(records)


_CHANNELS = {c.value: c for c in Channel}
_MARKS = {m.value: m for m in Mark}


def parse_spec(text: str) -> ChartSpec:
    """Parse a chart spec document (UTF-8 JSON) into a ChartSpec.

    Fills defaults (binTargetCount=10) and enforces the channel invariants:
    at most one encoding per channel, x and y required.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedSpec(f"not valid JSON: {e}") from e
    if not isinstance(doc, dict):
        raise MalformedSpec("spec document must be a JSON object")

    unknown = set(doc) - {"title", "mark", "encodings", "data"}
    if unknown:
        raise MalformedSpec(f"unknown spec keys: {sorted(unknown)}")
    mark_name = doc.get("mark")
    if mark_name not in _MARKS:
        raise MalformedSpec(f"mark must be one of {sorted(_MARKS)}, got {mark_name!r}")

    raw_encodings = doc.get("encodings")
    if not isinstance(raw_encodings, list) or not raw_encodings:
        raise MalformedSpec("encodings must be a non-empty list")
    encodings = []
    seen: set[Channel] = set()
    for raw in raw_encodings:
        if not isinstance(raw, dict) or "channel" not in raw or "field" not in raw:
            raise MalformedSpec(f"encoding entries need channel and field: {raw!r}")
        name = raw["channel"]
        if name not in _CHANNELS:
            raise UnknownChannel(f"unknown channel {name!r}")
        channel = _CHANNELS[name]
        if channel in seen:
            raise DuplicateChannel(f"channel {name!r} appears twice")
        seen.add(channel)
        bins = raw.get("binTargetCount", DEFAULT_BIN_TARGET)
        if not isinstance(bins, int) or isinstance(bins, bool) or bins < 1:
            raise MalformedSpec(f"binTargetCount must be a positive integer, got {bins!r}")
        encodings.append(EncodingDef(channel=channel, field=str(raw["field"]), bin_target_count=bins))
    for required in (Channel.X, Channel.Y):
        if required not in seen:
            raise MissingChannel(f"spec has no {required.value} channel")

    data = doc.get("data")
    if isinstance(data, dict) and isinstance(data.get("path"), str):
        data_ref: str | tuple = data["path"]
    elif isinstance(data, dict) and isinstance(data.get("values"), list):
        data_ref = tuple(data["values"])
    else:
        raise MalformedSpec('data must be {"path": ...} or {"values": [...]}')

    title = doc.get("title")
    if title is not None and not isinstance(title, str):
        raise MalformedSpec("title must be a string")
    return ChartSpec(mark=_MARKS[mark_name], encodings=tuple(encodings), data_ref=data_ref, title=title)


def serialize_spec(spec: ChartSpec) -> str:
    """Inverse of parse_spec: parse_spec(serialize_spec(s)) == s."""
    doc: dict[str, Any] = {}
    if spec.title is not None:
        doc["title"] = spec.title
    doc["mark"] = spec.mark.value
    doc["encodings"] = [
        {"channel": e.channel.value, "field": e.field, "binTargetCount": e.bin_target_count}
        for e in spec.encodings
    ]
    if isinstance(spec.data_ref, str):
        doc["data"] = {"path": spec.data_ref}
    else:
        doc["data"] = {"values": list(spec.data_ref)}
    return json.dumps(doc, indent=2)


def load_spec_data(spec: ChartSpec, base_dir: str | Path | None = None) -> Dataset:
    """Resolve the spec's data reference and load it."""
    if isinstance(spec.data_ref, str):
        path = Path(spec.data_ref)
        if base_dir is not None and not path.is_absolute():
            path = Path(base_dir) / path
        return load_data(path.read_text(encoding="utf-8"))
    return load_data(list(spec.data_ref))


def validate(spec: ChartSpec, data: Dataset) -> ValidatedChart:
    """Check spec-dataset consistency and resolve encodings to field defs.

    facet/color fields must be nominal; x/y must be quantitative or temporal,
    except that bar marks also accept nominal x/y.
    """
    resolved: dict[Channel, FieldDef] = {}
    for enc in spec.encodings:
        fdef = data.field_def(enc.field)
        if fdef is None:
            raise FieldNotFound(enc.field)
        if enc.channel in (Channel.COLOR, Channel.FACET):
            if fdef.kind != FieldKind.NOMINAL:
                raise KindMismatch(
                    f"{enc.channel.value} channel needs a nominal field, "
                    f"{enc.field!r} is {fdef.kind.value}"
                )
        else:
            if fdef.kind == FieldKind.NOMINAL and spec.mark != Mark.BAR:
                raise KindMismatch(
                    f"{enc.channel.value} channel on a {spec.mark.value} mark needs a "
                    f"quantitative or temporal field, {enc.field!r} is nominal"
                )
        resolved[enc.channel] = fdef
    return ValidatedChart(spec=spec, data=data, resolved=resolved)


def with_units(chart: ValidatedChart, units: dict[str, str]) -> ValidatedChart:
    """Return a copy with display units attached to named fields."""
    fields = tuple(
        replace(f, unit=units[f.name]) if f.name in units else f for f in chart.data.fields
    )
    data = Dataset(fields=fields, rows=chart.data.rows)
    resolved = {ch: data.field_def(f.name) for ch, f in chart.resolved.items()}
    return ValidatedChart(spec=chart.spec, data=data, resolved=resolved)
