"""Content tokens: the unit pieces a node description is assembled from.

Each token kind pairs an affordance (wayfinding via location or surroundings,
or consuming) with a direction (upwards, in-place, downwards), and renders at
short or long brevity from the template table in templates.json.
"""

from __future__ import annotations

import json
import statistics
from dataclasses import dataclass
from datetime import datetime, timedelta
from enum import Enum
from functools import lru_cache
from importlib import resources
from typing import Any

from .chart import Channel, Dataset, FieldDef, FieldKind, Mark, ValidatedChart
from .formatting import format_value
from .hierarchy import (
    Axis,
    Category,
    FacetValue,
    HierarchyNode,
    Interval,
    Legend,
    Level,
    Row,
    Selection,
    Summary,
    select,
)


class Affordance(Enum):
    LOCATION = "location"          # wayfinding: where am I?
    SURROUNDINGS = "surroundings"  # wayfinding: where can I go, what will I find?
    CONSUMING = "consuming"


class Direction(Enum):
    UPWARDS = "upwards"
    IN_PLACE = "in_place"
    DOWNWARDS = "downwards"


class TokenKind(Enum):
    """The ten content tokens, covering every affordance x direction cell."""

    PARENT_NAME = ("parent_name", Affordance.LOCATION, Direction.UPWARDS)
    DEPTH = ("depth", Affordance.SURROUNDINGS, Direction.UPWARDS)
    CONTEXT_QUANTILE = ("context_quantile", Affordance.CONSUMING, Direction.UPWARDS)
    NODE_NAME = ("node_name", Affordance.LOCATION, Direction.IN_PLACE)
    INDEX = ("index", Affordance.SURROUNDINGS, Direction.IN_PLACE)
    DATA_VALUES = ("data_values", Affordance.CONSUMING, Direction.IN_PLACE)
    OBJECT_TYPE = ("object_type", Affordance.CONSUMING, Direction.IN_PLACE)
    CHILD_NAMES = ("child_names", Affordance.LOCATION, Direction.DOWNWARDS)
    CHILD_SIZE = ("child_size", Affordance.SURROUNDINGS, Direction.DOWNWARDS)
    AGGREGATE = ("aggregate", Affordance.CONSUMING, Direction.DOWNWARDS)

    def __new__(cls, value: str, affordance: Affordance, direction: Direction):
        obj = object.__new__(cls)
        obj._value_ = value
        obj.affordance = affordance
        obj.direction = direction
        return obj


class Brevity(Enum):
    SHORT = "short"
    LONG = "long"


@dataclass(frozen=True)
class TokenInstance:
    """A token rendered for a particular node."""

    kind: TokenKind
    brevity: Brevity
    text: str


# Narration default: identifying tokens first, context last.
DEFAULT_ORDER = [
    TokenKind.NODE_NAME,
    TokenKind.INDEX,
    TokenKind.OBJECT_TYPE,
    TokenKind.DATA_VALUES,
    TokenKind.AGGREGATE,
    TokenKind.CHILD_NAMES,
    TokenKind.CHILD_SIZE,
    TokenKind.PARENT_NAME,
    TokenKind.DEPTH,
    TokenKind.CONTEXT_QUANTILE,
]

CHART_TYPE = {Mark.POINT: "scatterplot", Mark.LINE: "line chart", Mark.BAR: "bar chart"}
_ORDINALS = {1: "1st", 2: "2nd", 3: "3rd", 4: "4th"}
_NAME_LIST_LIMIT = 6


@lru_cache(maxsize=1)
def template_table() -> dict:
    text = resources.files(__package__).joinpath("templates.json").read_text(encoding="utf-8")
    return json.loads(text)


def template(kind: TokenKind, brevity: Brevity, context: str = "default") -> str:
    return template_table()["tokens"][kind.value][brevity.value][context]


def available_tokens(level: Level) -> list[TokenKind]:
    """Token kinds applicable at a hierarchy level, in default order.

    The root has nothing above it, so upwards tokens are excluded there;
    datapoints have nothing below, so downwards tokens are excluded there.
    """
    kinds = list(DEFAULT_ORDER)
    if level == Level.ROOT:
        kinds = [k for k in kinds if k.direction != Direction.UPWARDS]
    if level == Level.DATAPOINT:
        kinds = [k for k in kinds if k.direction != Direction.DOWNWARDS]
    return kinds


def measure_field(chart: ValidatedChart) -> FieldDef | None:
    """The field summary statistics describe: y when measurable, else x."""
    for channel in (Channel.Y, Channel.X):
        fdef = chart.field_for(channel)
        if fdef is not None and fdef.kind != FieldKind.NOMINAL:
            return fdef
    return None


def aggregate(selection: Selection, fdef: FieldDef, data: Dataset) -> dict[str, Any] | None:
    """Mean, min and max of the selected values; None when nothing selected."""
    rows = select(selection, data)
    return _aggregate_rows(rows, fdef, data)


def _aggregate_rows(rows, fdef: FieldDef, data: Dataset) -> dict[str, Any] | None:
    if not rows:
        return None
    values = [data.rows[i][fdef.name] for i in rows]
    return {"avg": _mean(values), "min": min(values), "max": max(values)}


def _mean(values: list[Any]):
    if isinstance(values[0], datetime):
        epoch = datetime(1970, 1, 1)
        seconds = [(v - epoch).total_seconds() for v in values]
        return epoch + timedelta(seconds=statistics.fmean(seconds))
    return statistics.fmean(values)


def context_quantile(node: HierarchyNode, chart: ValidatedChart) -> str | None:
    """Quartile of the node's mean measure value within its parent's values.

    Uses linear-interpolation quartiles and half-open upper bounds: a mean
    equal to the median sits in the 2nd quartile. None when the node has no
    parent, no measurable field, or an empty selection.
    """
    fdef = measure_field(chart)
    if node.parent is None or fdef is None or fdef.kind == FieldKind.TEMPORAL:
        return None
    own = [chart.data.rows[i][fdef.name] for i in node.row_indices]
    parent_values = [chart.data.rows[i][fdef.name] for i in node.parent.row_indices]
    if not own or not parent_values:
        return None
    mean = statistics.fmean(own)
    if len(parent_values) == 1:
        q1 = q2 = q3 = parent_values[0]
    else:
        q1, q2, q3 = statistics.quantiles(parent_values, n=4, method="inclusive")
    if mean <= q1:
        q = 1
    elif mean <= q2:
        q = 2
    elif mean <= q3:
        q = 3
    else:
        q = 4
    return _ORDINALS[q]


def render_token(kind: TokenKind, brevity: Brevity, node: HierarchyNode,
                 chart: ValidatedChart) -> str:
    """Deterministic text for one token at one node; "" means the token has
    nothing to say there (e.g. aggregates over an empty selection) and is
    omitted from descriptions."""
    renderer = _RENDERERS[kind]
    return renderer(brevity, node, chart)


def _short_name(node: HierarchyNode, chart: ValidatedChart) -> str:
    return _render_node_name(Brevity.SHORT, node, chart)


def _join_names(names: list[str], joiner: str = ", ") -> str:
    if len(names) > _NAME_LIST_LIMIT:
        head = names[:_NAME_LIST_LIMIT - 1]
        return joiner.join(head) + f" and {len(names) - len(head)} more"
    return joiner.join(names)


def _render_parent_name(brevity: Brevity, node: HierarchyNode, chart: ValidatedChart) -> str:
    if node.parent is None:
        return ""
    parent = _short_name(node.parent, chart)
    return template(TokenKind.PARENT_NAME, brevity).format(parent=parent)


def _render_depth(brevity: Brevity, node: HierarchyNode, chart: ValidatedChart) -> str:
    return template(TokenKind.DEPTH, brevity).format(depth=node.depth)


def _render_context_quantile(brevity: Brevity, node: HierarchyNode,
                             chart: ValidatedChart) -> str:
    ordinal = context_quantile(node, chart)
    if ordinal is None:
        return ""
    return template(TokenKind.CONTEXT_QUANTILE, brevity).format(
        ordinal=ordinal, q=ordinal[0])


def _render_node_name(brevity: Brevity, node: HierarchyNode, chart: ValidatedChart) -> str:
    payload = node.payload
    if isinstance(payload, Summary):
        name = chart.spec.title or CHART_TYPE[chart.spec.mark]
        return template(TokenKind.NODE_NAME, brevity, "root").format(name=name)
    if isinstance(payload, FacetValue):
        facet_field = _facet_field(chart)
        return template(TokenKind.NODE_NAME, brevity, "facet").format(
            value=format_value(payload.value), field=facet_field.name)
    if isinstance(payload, Axis):
        fdef = chart.data.field_def(payload.field)
        axis = "X-axis" if payload.channel == Channel.X else "Y-axis"
        if brevity == Brevity.LONG and fdef.unit:
            return template(TokenKind.NODE_NAME, brevity, "axis_unit").format(
                axis=axis, field=payload.field, unit=fdef.unit)
        return template(TokenKind.NODE_NAME, brevity, "axis").format(
            axis=axis, field=payload.field)
    if isinstance(payload, Legend):
        return template(TokenKind.NODE_NAME, brevity, "legend").format(field=payload.field)
    if isinstance(payload, Interval):
        lo = format_value(payload.lo, payload.granularity)
        hi = format_value(payload.hi, payload.granularity)
        return template(TokenKind.NODE_NAME, brevity, "interval").format(lo=lo, hi=hi)
    if isinstance(payload, Category):
        field = _section_field(node)
        return template(TokenKind.NODE_NAME, brevity, "category").format(
            value=format_value(payload.value), field=field)
    if isinstance(payload, Row):
        position, _ = node.sibling_position()
        return template(TokenKind.NODE_NAME, brevity, "datapoint").format(row=position)
    raise AssertionError(f"unhandled payload {payload!r}")


def _facet_field(chart: ValidatedChart) -> FieldDef:
    fdef = chart.field_for(Channel.FACET)
    if fdef is None:
        fdef = chart.field_for(Channel.COLOR)
    return fdef


def _section_field(node: HierarchyNode) -> str:
    parent = node.parent
    if parent is not None and isinstance(parent.payload, (Axis, Legend)):
        return parent.payload.field
    return ""


def _render_index(brevity: Brevity, node: HierarchyNode, chart: ValidatedChart) -> str:
    i, n = node.sibling_position()
    return template(TokenKind.INDEX, brevity).format(i=i, n=n)


def _subject_fields(node: HierarchyNode, chart: ValidatedChart) -> list[FieldDef]:
    payload = node.payload
    if isinstance(payload, Summary):
        return [chart.field_for(Channel.X), chart.field_for(Channel.Y)]
    if isinstance(payload, FacetValue):
        return [_facet_field(chart)]
    if isinstance(payload, Axis):
        return [chart.data.field_def(payload.field)]
    if isinstance(payload, Legend):
        return [chart.data.field_def(payload.field)]
    if isinstance(payload, (Interval, Category)):
        name = _section_field(node)
        fdef = chart.data.field_def(name)
        return [fdef] if fdef is not None else []
    return []


def _render_data_values(brevity: Brevity, node: HierarchyNode, chart: ValidatedChart) -> str:
    if isinstance(node.payload, Row):
        row = chart.data.rows[node.payload.row_index]
        pairs = []
        for enc in chart.spec.encodings:
            pairs.append(template(TokenKind.DATA_VALUES, brevity, "pair").format(
                field=enc.field, value=format_value(row[enc.field])))
        return template(TokenKind.DATA_VALUES, brevity, "pair_join").join(pairs)

    rows = node.row_indices
    if not rows:
        return ""
    at_root = isinstance(node.payload, Summary)
    parts = []
    for fdef in _subject_fields(node, chart):
        values = [chart.data.rows[i][fdef.name] for i in rows]
        if fdef.kind == FieldKind.NOMINAL:
            distinct = _join_names([format_value(v) for v in sorted(set(values))])
            context = "field_values" if at_root else "values"
            parts.append(template(TokenKind.DATA_VALUES, brevity, context).format(
                field=fdef.name, values=distinct))
        else:
            lo, hi = format_value(min(values)), format_value(max(values))
            context = "field_range" if at_root else "range"
            parts.append(template(TokenKind.DATA_VALUES, brevity, context).format(
                field=fdef.name, lo=lo, hi=hi))
    return template(TokenKind.DATA_VALUES, brevity, "multi_join").join(parts)


_SCALE_NAME = {FieldKind.QUANTITATIVE: "linear", FieldKind.TEMPORAL: "temporal",
               FieldKind.NOMINAL: "categorical"}


def _render_object_type(brevity: Brevity, node: HierarchyNode, chart: ValidatedChart) -> str:
    payload = node.payload
    if isinstance(payload, Summary):
        return template(TokenKind.OBJECT_TYPE, brevity, "root").format(
            chart_type=CHART_TYPE[chart.spec.mark])
    if isinstance(payload, FacetValue):
        return template(TokenKind.OBJECT_TYPE, brevity, "facet")
    if isinstance(payload, Axis):
        kind = chart.data.field_def(payload.field).kind
        return template(TokenKind.OBJECT_TYPE, brevity, "axis").format(
            scale=_SCALE_NAME[kind])
    if isinstance(payload, Legend):
        return template(TokenKind.OBJECT_TYPE, brevity, "legend").format(scale="categorical")
    if isinstance(payload, Interval):
        return template(TokenKind.OBJECT_TYPE, brevity, "interval")
    if isinstance(payload, Category):
        return template(TokenKind.OBJECT_TYPE, brevity, "category")
    return template(TokenKind.OBJECT_TYPE, brevity, "datapoint")


def _child_group(node: HierarchyNode) -> str:
    """What kind of children this node carries (even when it has none)."""
    if node.children:
        first = node.children[0].payload
        if isinstance(first, FacetValue):
            return "facets"
        if isinstance(first, (Axis, Legend)):
            return "encodings"
        if isinstance(first, Interval):
            return "intervals"
        if isinstance(first, Category):
            return "categories"
        return "datapoints"
    if node.level == Level.SECTION:
        return "datapoints"
    if node.level == Level.AXIS:
        if isinstance(node.payload, Legend):
            return "categories"
        return "intervals"
    return "encodings"


def _render_child_names(brevity: Brevity, node: HierarchyNode, chart: ValidatedChart) -> str:
    if not node.children:
        return ""
    group = _child_group(node)
    if group == "encodings":
        axes = [c.payload.field for c in node.children if isinstance(c.payload, Axis)]
        legends = [c.payload.field for c in node.children if isinstance(c.payload, Legend)]
        if brevity == Brevity.SHORT:
            return template(TokenKind.CHILD_NAMES, brevity, "encodings").format(
                fields=", ".join(axes + legends))
        if legends:
            return template(TokenKind.CHILD_NAMES, brevity, "encodings_legend").format(
                axes=" and ".join(axes), legend=", ".join(legends))
        return template(TokenKind.CHILD_NAMES, brevity, "encodings").format(
            axes=" and ".join(axes))
    if group == "datapoints":
        n = len(node.children)
        context = "datapoint_single" if n == 1 else "datapoints"
        return template(TokenKind.CHILD_NAMES, brevity, context).format(n=n)
    names = _join_names([_short_name(c, chart) for c in node.children])
    return template(TokenKind.CHILD_NAMES, brevity, group).format(names=names)


_GROUP_NOUNS = {"facets": ("facet", "facets"), "intervals": ("interval", "intervals"),
                "categories": ("category", "categories"), "datapoints": ("value", "values")}


def _render_child_size(brevity: Brevity, node: HierarchyNode, chart: ValidatedChart) -> str:
    group = _child_group(node)
    if group == "encodings":
        axes = sum(1 for c in node.children if isinstance(c.payload, Axis))
        legends = sum(1 for c in node.children if isinstance(c.payload, Legend))
        context = "encodings_legend" if legends else "encodings"
        return template(TokenKind.CHILD_SIZE, brevity, context).format(
            axes=axes, legends=legends)
    n = len(node.children)
    singular, plural = _GROUP_NOUNS[group]
    return template(TokenKind.CHILD_SIZE, brevity, "counted").format(
        n=n, noun=singular if n == 1 else plural)


def _render_aggregate(brevity: Brevity, node: HierarchyNode, chart: ValidatedChart) -> str:
    fdef = measure_field(chart)
    if fdef is None:
        return ""
    stats = _aggregate_rows(node.row_indices, fdef, chart.data)
    if stats is None:
        return ""
    return template(TokenKind.AGGREGATE, brevity).format(
        avg=format_value(stats["avg"]), min=format_value(stats["min"]),
        max=format_value(stats["max"]))


_RENDERERS = {
    TokenKind.PARENT_NAME: _render_parent_name,
    TokenKind.DEPTH: _render_depth,
    TokenKind.CONTEXT_QUANTILE: _render_context_quantile,
    TokenKind.NODE_NAME: _render_node_name,
    TokenKind.INDEX: _render_index,
    TokenKind.DATA_VALUES: _render_data_values,
    TokenKind.OBJECT_TYPE: _render_object_type,
    TokenKind.CHILD_NAMES: _render_child_names,
    TokenKind.CHILD_SIZE: _render_child_size,
    TokenKind.AGGREGATE: _render_aggregate,
}
