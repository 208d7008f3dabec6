"""Token vocabulary coverage, template anchors, aggregation oracles."""

import json
import statistics

import pytest

from treescribe.chart import load_data, parse_spec, validate
from treescribe.hierarchy import InRange, Level, Selection, build_hierarchy
from treescribe.tokens import (
    Affordance,
    Brevity,
    Direction,
    TokenKind,
    aggregate,
    available_tokens,
    context_quantile,
    render_token,
)

TABLE = {
    TokenKind.PARENT_NAME: (Affordance.LOCATION, Direction.UPWARDS),
    TokenKind.DEPTH: (Affordance.SURROUNDINGS, Direction.UPWARDS),
    TokenKind.CONTEXT_QUANTILE: (Affordance.CONSUMING, Direction.UPWARDS),
    TokenKind.NODE_NAME: (Affordance.LOCATION, Direction.IN_PLACE),
    TokenKind.INDEX: (Affordance.SURROUNDINGS, Direction.IN_PLACE),
    TokenKind.DATA_VALUES: (Affordance.CONSUMING, Direction.IN_PLACE),
    TokenKind.OBJECT_TYPE: (Affordance.CONSUMING, Direction.IN_PLACE),
    TokenKind.CHILD_NAMES: (Affordance.LOCATION, Direction.DOWNWARDS),
    TokenKind.CHILD_SIZE: (Affordance.SURROUNDINGS, Direction.DOWNWARDS),
    TokenKind.AGGREGATE: (Affordance.CONSUMING, Direction.DOWNWARDS),
}


def test_affordance_direction_assignment_matches_table():
    for kind, (affordance, direction) in TABLE.items():
        assert kind.affordance == affordance
        assert kind.direction == direction


def test_every_cell_is_covered():
    cells = {(k.affordance, k.direction) for k in TokenKind}
    assert cells == {(a, d) for a in Affordance for d in Direction}


def test_available_tokens_root_excludes_upwards():
    kinds = set(available_tokens(Level.ROOT))
    assert kinds == {k for k in TokenKind if k.direction != Direction.UPWARDS}
    assert TokenKind.NODE_NAME in kinds and TokenKind.AGGREGATE in kinds


def test_available_tokens_datapoint_excludes_downwards():
    kinds = set(available_tokens(Level.DATAPOINT))
    assert kinds == {k for k in TokenKind if k.direction != Direction.DOWNWARDS}
    assert TokenKind.PARENT_NAME in kinds and TokenKind.DATA_VALUES in kinds


@pytest.mark.parametrize("level", [Level.FACET, Level.AXIS, Level.SECTION])
def test_available_tokens_mid_levels_have_all_ten(level):
    assert set(available_tokens(level)) == set(TokenKind)
    assert len(available_tokens(level)) == 10


def test_index_short_matches_table_example(stocks_tree, stocks_chart):
    first_facet = stocks_tree.root.children[0]  # 1st of 5 facets
    assert render_token(TokenKind.INDEX, Brevity.SHORT, first_facet, stocks_chart) == "1 of 5"


def test_data_values_templates_on_single_point():
    spec = parse_spec(json.dumps({
        "mark": "point",
        "encodings": [{"channel": "x", "field": "x"}, {"channel": "y", "field": "y"}],
        "data": {"values": []},
    }))
    chart = validate(spec, load_data([{"x": 5, "y": 7}]))
    tree = build_hierarchy(chart)
    dp = tree.level_index[Level.DATAPOINT][0]
    long = render_token(TokenKind.DATA_VALUES, Brevity.LONG, dp, chart)
    short = render_token(TokenKind.DATA_VALUES, Brevity.SHORT, dp, chart)
    assert long.startswith("the value for the 'x' field is 5")
    assert short.startswith("x: 5")


def test_child_size_long_matches_table_example(penguins_tree, penguins_chart):
    text = render_token(TokenKind.CHILD_SIZE, Brevity.LONG,
                        penguins_tree.root, penguins_chart)
    assert text == "2 axes and 1 legend"


def test_depth_long_matches_table_example(penguins_tree, penguins_chart):
    section = penguins_tree.nodes_by_id["root/axis:x"].children[0]
    assert render_token(TokenKind.DEPTH, Brevity.LONG, section, penguins_chart) == "Level 3"


def test_parent_name_inside_msft_facet(stocks_tree, stocks_chart):
    axis = stocks_tree.nodes_by_id["root/facet:MSFT/axis:x"]
    assert render_token(TokenKind.PARENT_NAME, Brevity.SHORT, axis, stocks_chart) == "MSFT"


def test_interval_name_uses_year_granularity(stocks_tree, stocks_chart):
    section = stocks_tree.nodes_by_id["root/facet:MSFT/axis:x"].children[0]
    assert render_token(TokenKind.NODE_NAME, Brevity.LONG,
                        section, stocks_chart) == "2000 to 2002"


def test_section_child_size_counts_values(penguins_tree, penguins_chart):
    second = penguins_tree.nodes_by_id["root/axis:x"].children[1]
    assert render_token(TokenKind.CHILD_SIZE, Brevity.LONG,
                        second, penguins_chart) == "69 values"


@pytest.mark.parametrize("fixture,chart_fixture", [
    ("penguins_tree", "penguins_chart"), ("stocks_tree", "stocks_chart")])
def test_brevity_monotonic_everywhere(fixture, chart_fixture, request):
    tree = request.getfixturevalue(fixture)
    chart = request.getfixturevalue(chart_fixture)
    for node in tree.iter_nodes():
        for kind in available_tokens(node.level):
            short = render_token(kind, Brevity.SHORT, node, chart)
            long = render_token(kind, Brevity.LONG, node, chart)
            assert len(short) <= len(long), (node.id, kind)


def test_render_is_pure(penguins_tree, penguins_chart):
    node = penguins_tree.root.children[0]
    for kind in available_tokens(node.level):
        a = render_token(kind, Brevity.LONG, node, penguins_chart)
        b = render_token(kind, Brevity.LONG, node, penguins_chart)
        assert a == b


def test_aggregate_simple_values():
    chart_data = load_data([{"v": 2, "w": 1}, {"v": 4, "w": 1}, {"v": 6, "w": 1}])
    stats = aggregate(Selection(), chart_data.field_def("v"), chart_data)
    assert stats == {"avg": 4, "min": 2, "max": 6}


def test_aggregate_singleton():
    data = load_data([{"price": 65, "d": 1}])
    stats = aggregate(Selection(), data.field_def("price"), data)
    assert stats["avg"] == stats["min"] == stats["max"] == 65


def test_aggregate_empty_selection_is_none():
    data = load_data([{"v": 1, "s": "a"}])
    stats = aggregate(Selection((InRange("v", 100, 200),)), data.field_def("v"), data)
    assert stats is None


def test_aggregate_penguins_section_against_oracle(penguins_chart):
    # frozen from a brute-force pass over the raw CSV
    expected_avg, expected_min, expected_max = 3491.304347826087, 2850.0, 4650.0
    sel = Selection((InRange("flipper_length_mm", 180, 190),))
    stats = aggregate(sel, penguins_chart.data.field_def("body_mass_g"),
                      penguins_chart.data)
    assert stats["avg"] == pytest.approx(expected_avg, rel=1e-9)
    assert stats["min"] == expected_min
    assert stats["max"] == expected_max
    # independent recomputation
    values = [r["body_mass_g"] for r in penguins_chart.data.rows
              if 180 <= r["flipper_length_mm"] < 190]
    assert len(values) == 69
    assert stats["avg"] == pytest.approx(sum(values) / len(values), rel=1e-9)


def _quartile_oracle(parent_values, mean):
    """Independent quartiles: sorted-list linear interpolation."""
    xs = sorted(parent_values)
    n = len(xs)

    def pct(p):
        if n == 1:
            return xs[0]
        idx = p * (n - 1)
        lo = int(idx)
        frac = idx - lo
        return xs[lo] if lo + 1 >= n else xs[lo] * (1 - frac) + xs[lo + 1] * frac

    q1, q2, q3 = pct(0.25), pct(0.5), pct(0.75)
    if mean <= q1:
        return "1st"
    if mean <= q2:
        return "2nd"
    if mean <= q3:
        return "3rd"
    return "4th"


def test_context_quantile_boundary_at_median():
    # node mean equal to parent's median lands in the 2nd quartile
    records = [{"x": i, "y": v} for i, v in enumerate([1, 2, 3, 4, 5])]
    spec = parse_spec(json.dumps({
        "mark": "point",
        "encodings": [{"channel": "x", "field": "x", "binTargetCount": 5},
                      {"channel": "y", "field": "y"}],
        "data": {"values": []},
    }))
    chart = validate(spec, load_data(records))
    tree = build_hierarchy(chart)
    y_axis = tree.nodes_by_id["root/axis:y"]
    median_section = next(s for s in y_axis.children
                          if [chart.data.rows[i]["y"] for i in s.row_indices] == [3])
    assert context_quantile(median_section, chart) == "2nd"


def test_context_quantile_above_q3_is_4th():
    records = [{"x": i, "y": v} for i, v in enumerate([1, 1, 1, 1, 100])]
    spec = parse_spec(json.dumps({
        "mark": "point",
        "encodings": [{"channel": "x", "field": "x"}, {"channel": "y", "field": "y"}],
        "data": {"values": []},
    }))
    chart = validate(spec, load_data(records))
    tree = build_hierarchy(chart)
    y_axis = tree.nodes_by_id["root/axis:y"]
    top = next(s for s in y_axis.children if 100 in
               [chart.data.rows[i]["y"] for i in s.row_indices])
    assert context_quantile(top, chart) == "4th"


def test_context_quantile_msft_section_frozen(stocks_tree, stocks_chart):
    # frozen via the sorted-values oracle: mean 23.26 vs quartiles
    # (21.76, 24.11, 27.295) of the whole MSFT series -> 2nd quartile
    section = stocks_tree.nodes_by_id["root/facet:MSFT/axis:x"].children[2]  # 2004-2006
    assert context_quantile(section, stocks_chart) == "2nd"
    text = render_token(TokenKind.CONTEXT_QUANTILE, Brevity.LONG, section, stocks_chart)
    assert text == "2nd quartile"


@pytest.mark.parametrize("fixture,chart_fixture", [
    ("penguins_tree", "penguins_chart"), ("stocks_tree", "stocks_chart")])
def test_quantile_oracle_equivalence_on_sections(fixture, chart_fixture, request):
    tree = request.getfixturevalue(fixture)
    chart = request.getfixturevalue(chart_fixture)
    from treescribe.tokens import measure_field
    measure = measure_field(chart)
    for section in tree.level_index[Level.SECTION]:
        own = [chart.data.rows[i][measure.name] for i in section.row_indices]
        parent_values = [chart.data.rows[i][measure.name]
                         for i in section.parent.row_indices]
        got = context_quantile(section, chart)
        if not own or not parent_values:
            assert got is None
            continue
        assert got == _quartile_oracle(parent_values, statistics.fmean(own))


def test_axis_name_includes_unit_when_present():
    from treescribe.chart import with_units
    spec = parse_spec(json.dumps({
        "mark": "point",
        "encodings": [{"channel": "x", "field": "len"}, {"channel": "y", "field": "mass"}],
        "data": {"values": []},
    }))
    chart = with_units(validate(spec, load_data([{"len": 1, "mass": 2}])),
                       {"len": "millimeters"})
    tree = build_hierarchy(chart)
    x = tree.nodes_by_id["root/axis:x"]
    assert render_token(TokenKind.NODE_NAME, Brevity.LONG, x, chart) == \
        "X-axis, len in millimeters"
    assert render_token(TokenKind.NODE_NAME, Brevity.SHORT, x, chart) == "X-axis"
