"""Cursor navigation, command handling, duration laws, scripts."""

import pathlib
import random

import pytest

from treescribe.customization import (
    ApplyPreset,
    Clear,
    Focus,
    Speak,
    load_settings,
    save_settings,
)
from treescribe.errors import ScriptParseError
from treescribe.hierarchy import Level
from treescribe.render import Source
from treescribe.session import (
    NavKey,
    apply_command,
    navigate,
    new_session,
    run_script,
)
from treescribe.tokens import TokenKind

SCRIPTS = pathlib.Path(__file__).parent.parent / "scripts"
GOLDEN = pathlib.Path(__file__).parent / "golden"


def test_walkthrough_down_down_right_down(penguins_tree):
    s = new_session(penguins_tree)
    a1 = navigate(s, NavKey.DOWN)
    assert s.cursor == "root/axis:x" and a1.source == Source.NAVIGATION
    a2 = navigate(s, NavKey.DOWN)
    assert s.cursor == "root/axis:x/section:170-180"
    assert "8 values" in a2.text
    a3 = navigate(s, NavKey.RIGHT)
    assert s.cursor == "root/axis:x/section:180-190"
    assert "69 values" in a3.text
    navigate(s, NavKey.DOWN)
    assert s.cursor_node.level == Level.DATAPOINT


def test_walkthrough_golden_transcript(penguins_tree):
    s = new_session(penguins_tree)
    lines = (SCRIPTS / "walkthrough.keys").read_text().splitlines()
    transcript = run_script(s, lines)
    rendered = "".join(f"{inp}\t{text}\n" for inp, text in transcript)
    golden = (GOLDEN / "walkthrough_transcript.tsv").read_text(encoding="utf-8")
    assert rendered == golden


def test_up_at_root_is_boundary(penguins_tree):
    s = new_session(penguins_tree)
    a = navigate(s, NavKey.UP)
    assert a.source == Source.BOUNDARY
    assert s.cursor == penguins_tree.root.id


def test_right_at_last_sibling_is_boundary(penguins_tree):
    s = new_session(penguins_tree)
    navigate(s, NavKey.DOWN)
    navigate(s, NavKey.RIGHT)
    navigate(s, NavKey.RIGHT)  # legend, last of 3
    a = navigate(s, NavKey.RIGHT)
    assert a.source == Source.BOUNDARY
    assert s.cursor == "root/legend:species"


def test_down_at_datapoint_is_boundary(penguins_tree):
    s = new_session(penguins_tree)
    for key in (NavKey.DOWN, NavKey.DOWN, NavKey.DOWN):
        navigate(s, key)
    assert s.cursor_node.level == Level.DATAPOINT
    a = navigate(s, NavKey.DOWN)
    assert a.source == Source.BOUNDARY


def test_y_jump_from_x_section(penguins_tree):
    s = new_session(penguins_tree)
    navigate(s, NavKey.DOWN)
    navigate(s, NavKey.DOWN)
    a = navigate(s, NavKey.Y)
    assert s.cursor == "root/axis:y"
    assert a.source == Source.NAVIGATION


def test_xy_resolve_within_enclosing_facet(stocks_tree):
    s = new_session(stocks_tree)
    navigate(s, NavKey.DOWN)   # facet AAPL
    navigate(s, NavKey.RIGHT)  # facet AMZN
    navigate(s, NavKey.DOWN)   # x axis of AMZN
    navigate(s, NavKey.DOWN)   # first section
    navigate(s, NavKey.Y)
    assert s.cursor == "root/facet:AMZN/axis:y"


def test_xy_at_root_of_faceted_chart_uses_first_facet(stocks_tree):
    s = new_session(stocks_tree)
    navigate(s, NavKey.X)
    assert s.cursor == "root/facet:AAPL/axis:x"


def test_down_up_and_left_right_are_inverses(penguins_tree):
    rng = random.Random(7)
    s = new_session(penguins_tree)
    for _ in range(300):
        key = rng.choice(list(NavKey))
        before = s.cursor
        a = navigate(s, key)
        if a.source == Source.BOUNDARY:
            assert s.cursor == before
            continue
        if key == NavKey.DOWN:
            back = navigate(s, NavKey.UP)
            assert back.source == Source.NAVIGATION and s.cursor == before
        elif key == NavKey.LEFT:
            back = navigate(s, NavKey.RIGHT)
            assert back.source == Source.NAVIGATION and s.cursor == before


def test_random_walk_never_invalidates_cursor(stocks_tree):
    rng = random.Random(99)
    s = new_session(stocks_tree)
    keys = list(NavKey)
    for _ in range(1000):
        navigate(s, rng.choice(keys))
        assert s.cursor in stocks_tree.nodes_by_id


def test_speak_leaves_state_fixed(penguins_tree):
    s = new_session(penguins_tree)
    navigate(s, NavKey.DOWN)
    apply_command(s, Focus(TokenKind.CHILD_SIZE))
    before = (s.cursor, list(s.focus_list), save_settings(s.settings))
    a = apply_command(s, Speak(TokenKind.AGGREGATE))
    assert a is not None and a.source == Source.SPEAK
    assert "average" in a.text
    assert (s.cursor, list(s.focus_list), save_settings(s.settings)) == before


def test_speak_inapplicable_token_announces_and_preserves_state(penguins_tree):
    s = new_session(penguins_tree)  # cursor at root: no upwards tokens
    before = (s.cursor, list(s.focus_list), save_settings(s.settings))
    a = apply_command(s, Speak(TokenKind.PARENT_NAME))
    assert "not available" in a.text
    assert (s.cursor, list(s.focus_list), save_settings(s.settings)) == before


def test_focus_survives_navigation_but_not_save_load(penguins_tree):
    s = new_session(penguins_tree)
    navigate(s, NavKey.DOWN)
    apply_command(s, Focus(TokenKind.AGGREGATE))
    navigate(s, NavKey.DOWN)
    assert s.focus_list == [TokenKind.AGGREGATE]
    # the persisted document has no focus information at all
    doc = save_settings(s.settings)
    assert "aggregate" not in doc
    restored = load_settings(doc)
    fresh = new_session(penguins_tree, restored)
    assert fresh.focus_list == []


def test_apply_preset_survives_save_load(penguins_tree):
    s = new_session(penguins_tree)
    a = apply_command(s, ApplyPreset(Level.AXIS, "low"))
    assert a.source == Source.MENU
    restored = load_settings(save_settings(s.settings))
    assert restored.active[Level.AXIS] == "low"


def test_apply_unknown_preset_announces_and_leaves_state(penguins_tree):
    s = new_session(penguins_tree)
    before = save_settings(s.settings)
    a = apply_command(s, ApplyPreset(Level.AXIS, "nope"))
    assert "nope" in a.text
    assert save_settings(s.settings) == before


def test_clear_empties_focus_list(penguins_tree):
    s = new_session(penguins_tree)
    navigate(s, NavKey.DOWN)
    apply_command(s, Focus(TokenKind.AGGREGATE))
    apply_command(s, Focus(TokenKind.DEPTH))
    apply_command(s, Clear())
    assert s.focus_list == []


def test_every_action_appends_one_log_entry(penguins_tree):
    s = new_session(penguins_tree)
    navigate(s, NavKey.DOWN)
    apply_command(s, Speak(TokenKind.INDEX))
    apply_command(s, Focus(TokenKind.CHILD_SIZE))
    apply_command(s, Clear())
    apply_command(s, ApplyPreset(Level.AXIS, "high"))
    categories = [e.category for e in s.action_log]
    assert categories == ["navigation", "presence", "ordering", "ordering", "brevity"]


def test_run_script_three_keys_ends_at_second_section(penguins_tree):
    s = new_session(penguins_tree)
    transcript = run_script(s, ["down", "down", "right"])
    assert len(transcript) == 3
    assert s.cursor == "root/axis:x/section:180-190"
    assert "69 values" in transcript[-1][1]


def test_run_script_empty(penguins_tree):
    s = new_session(penguins_tree)
    assert run_script(s, []) == []


def test_run_script_focus_then_down_starts_with_aggregate(penguins_tree):
    s = new_session(penguins_tree)
    transcript = run_script(s, ["focus aggregate", "down"])
    assert transcript[0] == ("focus aggregate", "")
    assert transcript[1][1].startswith("average")


def test_run_script_parse_error_carries_line_number(penguins_tree):
    s = new_session(penguins_tree)
    with pytest.raises(ScriptParseError) as err:
        run_script(s, ["down", "flip left"])
    assert err.value.line_no == 2


def test_run_script_skips_blanks_and_comments(penguins_tree):
    s = new_session(penguins_tree)
    transcript = run_script(s, ["", "# a comment", "down"])
    assert len(transcript) == 1
