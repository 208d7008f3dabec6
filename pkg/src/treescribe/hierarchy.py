"""Build the navigable tree: summary, facets, axes/legends, sections, datapoints.

Every node carries a Selection (a conjunction of field predicates) plus the
row indices it matched, so description tokens can be computed without
re-walking the dataset.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from datetime import datetime, timedelta
from enum import Enum
from typing import Any, Iterator, Union

from .chart import Channel, Dataset, FieldDef, FieldKind, Mark, ValidatedChart
from .formatting import id_label


class Level(Enum):
    ROOT = "root"
    FACET = "facet"
    AXIS = "axis"
    SECTION = "section"
    DATAPOINT = "datapoint"


# --- selections ---

@dataclass(frozen=True)
class Equals:
    field: str
    value: Any

    def matches(self, row: dict) -> bool:
        return row[self.field] == self.value


@dataclass(frozen=True)
class InRange:
    """Half-open [lo, hi) unless hi_inclusive, then closed [lo, hi]."""

    field: str
    lo: Any
    hi: Any
    hi_inclusive: bool = False

    def matches(self, row: dict) -> bool:
        v = row[self.field]
        if v < self.lo:
            return False
        return v <= self.hi if self.hi_inclusive else v < self.hi


Predicate = Union[Equals, InRange]


@dataclass(frozen=True)
class Selection:
    predicates: tuple[Predicate, ...] = ()

    def matches(self, row: dict) -> bool:
        return all(p.matches(row) for p in self.predicates)

    def extended(self, predicate: Predicate) -> "Selection":
        return Selection(self.predicates + (predicate,))


def select(selection: Selection, data: Dataset) -> list[int]:
    """Indices of rows satisfying every predicate, in dataset order."""
    return [i for i, row in enumerate(data.rows) if selection.matches(row)]


# --- node payloads ---

@dataclass(frozen=True)
class Summary:
    pass


@dataclass(frozen=True)
class FacetValue:
    value: Any


@dataclass(frozen=True)
class Axis:
    channel: Channel
    field: str


@dataclass(frozen=True)
class Legend:
    field: str


@dataclass(frozen=True)
class Interval:
    lo: Any
    hi: Any
    granularity: str | None = None  # time unit of the bin step, for labels


@dataclass(frozen=True)
class Category:
    value: Any


@dataclass(frozen=True)
class Row:
    row_index: int


Payload = Union[Summary, FacetValue, Axis, Legend, Interval, Category, Row]


@dataclass
class HierarchyNode:
    id: str
    level: Level
    selection: Selection
    payload: Payload
    row_indices: tuple[int, ...]
    children: list["HierarchyNode"] = field(default_factory=list, repr=False)
    parent: "HierarchyNode | None" = field(default=None, repr=False)

    @property
    def depth(self) -> int:
        """1-based depth; the root is level 1."""
        node, d = self, 1
        while node.parent is not None:
            node, d = node.parent, d + 1
        return d

    def sibling_position(self) -> tuple[int, int]:
        """(1-based index among siblings, sibling count)."""
        if self.parent is None:
            return 1, 1
        return self.parent.children.index(self) + 1, len(self.parent.children)


@dataclass
class HierarchyTree:
    root: HierarchyNode
    chart: ValidatedChart
    level_index: dict[Level, list[HierarchyNode]]
    nodes_by_id: dict[str, HierarchyNode]

    def iter_nodes(self) -> Iterator[HierarchyNode]:
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    @property
    def has_facets(self) -> bool:
        return bool(self.level_index[Level.FACET])


# --- numeric binning ---

def nice_intervals(lo: float, hi: float, target_count: int) -> list[tuple[float, float]]:
    """Bins at a step of 1, 2 or 5 times a power of ten.

    Edges are multiples of the step, the first edge is <= lo and the last
    >= hi, and the bin count is as close to target_count as possible (ties
    resolved toward the larger step, i.e. fewer bins). Bins are half-open
    except the last, which is closed. A degenerate extent yields one
    closed bin.
    """
    if lo > hi:
        raise ValueError("interval extent is reversed")
    if target_count < 1:
        raise ValueError("target_count must be positive")
    if lo == hi:
        return [(lo, hi)]

    span = hi - lo
    k_min = math.floor(math.log10(span / target_count)) - 2
    k_max = math.floor(math.log10(span)) + 2
    best: tuple[int, int, int] | None = None  # (mantissa, exponent, i_lo)
    best_dist = None
    for k in range(k_min, k_max + 1):
        for m in (1, 2, 5):
            step = m * 10.0 ** k
            i_lo = math.floor(lo / step)
            i_hi = math.ceil(hi / step)
            count = i_hi - i_lo
            dist = abs(count - target_count)
            if best_dist is None or dist <= best_dist:
                best, best_dist = (m, k, i_lo), dist
    assert best is not None
    m, k, i_lo = best
    step = m * 10.0 ** k
    count = math.ceil(hi / step) - i_lo
    edges = [_edge_value(i_lo + i, m, k) for i in range(count + 1)]
    return list(zip(edges, edges[1:]))


def _edge_value(i: int, m: int, k: int) -> float:
    if k >= 0:
        return float(i * m * 10 ** k)
    return (i * m) / (10 ** -k)


# --- temporal binning ---

_TIME_STEPS: list[tuple[str, int]] = [
    ("second", 1), ("minute", 1), ("hour", 1), ("day", 1),
    ("month", 1), ("year", 1), ("year", 2), ("year", 5), ("year", 10),
]

_FIXED = {"second": timedelta(seconds=1), "minute": timedelta(minutes=1),
          "hour": timedelta(hours=1), "day": timedelta(days=1)}


def _floor_time(t: datetime, unit: str, k: int) -> datetime:
    if unit == "second":
        return t.replace(microsecond=0)
    if unit == "minute":
        return t.replace(second=0, microsecond=0)
    if unit == "hour":
        return t.replace(minute=0, second=0, microsecond=0)
    if unit == "day":
        return t.replace(hour=0, minute=0, second=0, microsecond=0)
    if unit == "month":
        return t.replace(day=1, hour=0, minute=0, second=0, microsecond=0)
    year = (t.year // k) * k
    return t.replace(year=year, month=1, day=1, hour=0, minute=0, second=0, microsecond=0)


def _time_edge(first: datetime, i: int, unit: str, k: int) -> datetime:
    if unit in _FIXED:
        return first + i * _FIXED[unit]
    if unit == "month":
        months = first.year * 12 + (first.month - 1) + i
        return first.replace(year=months // 12, month=months % 12 + 1)
    return first.replace(year=first.year + i * k)


def _count_bins(lo: datetime, hi: datetime, unit: str, k: int) -> int:
    first = _floor_time(lo, unit, k)
    if unit in _FIXED:
        n = math.ceil((hi - first) / _FIXED[unit])
    elif unit == "month":
        n = (hi.year * 12 + hi.month - 1) - (first.year * 12 + first.month - 1)
        if hi != _floor_time(hi, "month", 1):
            n += 1
    else:
        n = (hi.year - first.year) // k
        if _time_edge(first, n, unit, k) < hi:
            n += 1
    return max(n, 1)


def choose_time_step(lo: datetime, hi: datetime, target_count: int) -> tuple[str, int]:
    """Calendar-aligned step whose bin count is closest to target_count."""
    best, best_dist = _TIME_STEPS[0], None
    for unit, k in _TIME_STEPS:
        dist = abs(_count_bins(lo, hi, unit, k) - target_count)
        if best_dist is None or dist <= best_dist:
            best, best_dist = (unit, k), dist
    return best


def temporal_intervals(lo: datetime, hi: datetime,
                       target_count: int) -> list[tuple[datetime, datetime]]:
    """Calendar-aligned time bins; same edge and closedness rules as
    nice_intervals."""
    if lo > hi:
        raise ValueError("time extent is reversed")
    if lo == hi:
        return [(lo, hi)]
    unit, k = choose_time_step(lo, hi, target_count)
    first = _floor_time(lo, unit, k)
    count = _count_bins(lo, hi, unit, k)
    edges = [_time_edge(first, i, unit, k) for i in range(count + 1)]
    return list(zip(edges, edges[1:]))


def categories(fdef: FieldDef, data: Dataset) -> list[Any]:
    """Distinct values of a nominal field, sorted ascending."""
    return sorted(set(data.values(fdef.name)))


# --- tree construction ---

def build_hierarchy(chart: ValidatedChart) -> HierarchyTree:
    """Assemble the full navigable tree for a validated chart.

    The facet level exists iff the spec has a facet channel, or a line mark
    with a color channel (each series becomes a facet). Interval sections use
    bin edges computed from the whole dataset's extent, so matching sections
    line up across facets.
    """
    builder = _Builder(chart)
    return builder.build()


class _Builder:
    def __init__(self, chart: ValidatedChart):
        self.chart = chart
        self.data = chart.data
        self.level_index: dict[Level, list[HierarchyNode]] = {lv: [] for lv in Level}
        self.nodes_by_id: dict[str, HierarchyNode] = {}

        facet_field = chart.field_for(Channel.FACET)
        color_field = chart.field_for(Channel.COLOR)
        if facet_field is None and color_field is not None and chart.spec.mark == Mark.LINE:
            facet_field = color_field
        self.facet_field = facet_field
        self.legend_field = (
            color_field
            if color_field is not None
            and (facet_field is None or color_field.name != facet_field.name)
            else None
        )
        # Global bin edges per positional channel, shared by all facets.
        self.bins: dict[Channel, list[tuple[Any, Any]]] = {}
        self.granularity: dict[Channel, str | None] = {}
        for channel in (Channel.X, Channel.Y):
            fdef = chart.field_for(channel)
            if fdef.kind == FieldKind.NOMINAL:
                continue
            values = self.data.values(fdef.name)
            if not values:
                self.bins[channel] = []
                self.granularity[channel] = None
                continue
            enc = chart.spec.encoding(channel)
            if fdef.kind == FieldKind.TEMPORAL:
                lo, hi = min(values), max(values)
                unit = None if lo == hi else choose_time_step(lo, hi, enc.bin_target_count)[0]
                self.bins[channel] = temporal_intervals(lo, hi, enc.bin_target_count)
                self.granularity[channel] = unit
            else:
                self.bins[channel] = nice_intervals(min(values), max(values), enc.bin_target_count)
                self.granularity[channel] = None

    def build(self) -> HierarchyTree:
        all_rows = tuple(range(len(self.data.rows)))
        root = self._node("root", Level.ROOT, Selection(), Summary(), all_rows, None)
        if self.facet_field is not None:
            for value in categories(self.facet_field, self.data):
                selection = Selection((Equals(self.facet_field.name, value),))
                facet = self._node(f"{root.id}/facet:{id_label(value)}", Level.FACET,
                                   selection, FacetValue(value), self._rows(selection), root)
                self._add_encoding_nodes(facet)
        else:
            self._add_encoding_nodes(root)
        return HierarchyTree(root=root, chart=self.chart,
                             level_index=self.level_index, nodes_by_id=self.nodes_by_id)

    def _rows(self, selection: Selection) -> tuple[int, ...]:
        return tuple(select(selection, self.data))

    def _node(self, node_id: str, level: Level, selection: Selection, payload: Payload,
              rows: tuple[int, ...], parent: HierarchyNode | None) -> HierarchyNode:
        node = HierarchyNode(id=node_id, level=level, selection=selection,
                             payload=payload, row_indices=rows, parent=parent)
        if parent is not None:
            parent.children.append(node)
        self.level_index[level].append(node)
        assert node_id not in self.nodes_by_id, f"duplicate node id {node_id}"
        self.nodes_by_id[node_id] = node
        return node

    def _add_encoding_nodes(self, parent: HierarchyNode) -> None:
        for channel in (Channel.X, Channel.Y):
            fdef = self.chart.field_for(channel)
            axis = self._node(f"{parent.id}/axis:{channel.value}", Level.AXIS,
                              parent.selection, Axis(channel, fdef.name),
                              parent.row_indices, parent)
            if fdef.kind == FieldKind.NOMINAL:
                self._add_category_sections(axis, fdef)
            else:
                self._add_interval_sections(axis, channel, fdef)
        if self.legend_field is not None:
            legend = self._node(f"{parent.id}/legend:{self.legend_field.name}", Level.AXIS,
                                parent.selection, Legend(self.legend_field.name),
                                parent.row_indices, parent)
            self._add_category_sections(legend, self.legend_field)

    def _add_interval_sections(self, axis: HierarchyNode, channel: Channel,
                               fdef: FieldDef) -> None:
        bins = self.bins[channel]
        granularity = self.granularity[channel]
        for i, (lo, hi) in enumerate(bins):
            last = i == len(bins) - 1
            selection = axis.selection.extended(InRange(fdef.name, lo, hi, hi_inclusive=last))
            section = self._node(f"{axis.id}/section:{id_label(lo)}-{id_label(hi)}",
                                 Level.SECTION, selection, Interval(lo, hi, granularity),
                                 self._rows(selection), axis)
            self._add_datapoints(section)

    def _add_category_sections(self, parent: HierarchyNode, fdef: FieldDef) -> None:
        # Global category list (not per-facet) so sibling facets stay comparable.
        for value in categories(fdef, self.data):
            selection = parent.selection.extended(Equals(fdef.name, value))
            section = self._node(f"{parent.id}/section:{id_label(value)}", Level.SECTION,
                                 selection, Category(value), self._rows(selection), parent)
            self._add_datapoints(section)

    def _add_datapoints(self, section: HierarchyNode) -> None:
        for row_index in section.row_indices:
            self._node(f"{section.id}/row:{row_index}", Level.DATAPOINT,
                       section.selection, Row(row_index), (row_index,), section)
