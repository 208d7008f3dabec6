"""Turn effective token lists into node descriptions and whole-tree dumps."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .chart import Channel, ValidatedChart
from .customization import SettingsState, effective_tokens
from .hierarchy import FacetValue, HierarchyNode, HierarchyTree, Level
from .tokens import CHART_TYPE, TokenKind, render_token, template_table


class Source(Enum):
    NAVIGATION = "navigation"
    SPEAK = "speak"
    BOUNDARY = "boundary"
    MENU = "menu"


@dataclass(frozen=True)
class Announcement:
    """What the screen reader should voice next."""

    text: str
    source: Source


def joiner() -> str:
    return template_table()["joiner"]


def no_description() -> str:
    return template_table()["no_description"]


def root_summary(root: HierarchyNode, chart: ValidatedChart) -> str:
    """The fixed overview line for the top of the hierarchy."""
    parts = []
    chart_type = CHART_TYPE[chart.spec.mark]
    if chart.spec.title:
        parts.append(chart.spec.title)
    parts.append(chart_type[0].upper() + chart_type[1:])
    facets = [c for c in root.children if isinstance(c.payload, FacetValue)]
    if facets:
        facet_field = chart.field_for(Channel.FACET) or chart.field_for(Channel.COLOR)
        parts.append(f"{len(facets)} facets by {facet_field.name}")
    x = chart.field_for(Channel.X).name
    y = chart.field_for(Channel.Y).name
    axes = f"X-axis {x}, y-axis {y}"
    legend = chart.field_for(Channel.COLOR)
    if legend is not None and (not facets or legend.name != facets[0].selection.predicates[0].field):
        axes += f", legend {legend.name}"
    parts.append(axes)
    parts.append(f"{len(chart.data.rows)} data points")
    return joiner().join(parts)


def describe(node: HierarchyNode, chart: ValidatedChart, settings: SettingsState,
             focus_list: list[TokenKind] | None = None) -> str:
    """Render the node's effective tokens in order, joined for narration.

    Tokens with nothing to say (empty selections and the like) are skipped;
    a node whose every token is off or empty reads "(no description)" so
    navigation never lands on silence.
    """
    if node.level == Level.ROOT:
        return root_summary(node, chart)
    pairs = effective_tokens(node, settings, focus_list or [])
    texts = [render_token(kind, brevity, node, chart) for kind, brevity in pairs]
    texts = [t for t in texts if t]
    if not texts:
        return no_description()
    return joiner().join(texts)


def render_tree(tree: HierarchyTree, settings: SettingsState) -> str:
    """Depth-first text dump, two-space indent per depth, LF line endings."""
    lines = []

    def walk(node: HierarchyNode, depth: int) -> None:
        lines.append("  " * depth + describe(node, tree.chart, settings))
        for child in node.children:
            walk(child, depth + 1)

    walk(tree.root, 0)
    return "\n".join(lines) + "\n"
