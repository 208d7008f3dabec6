"""Command line behavior: render, navigate, simulate."""

import csv
import io
import pathlib
import subprocess
import sys

import pytest

from treescribe import asset_path
from treescribe.cli import main

SCRIPTS = pathlib.Path(__file__).parent.parent / "scripts"


def run_cli(argv, stdin_text=""):
    stdin, stdout, stderr = sys.stdin, sys.stdout, sys.stderr
    sys.stdin = io.StringIO(stdin_text)
    sys.stdout, sys.stderr = io.StringIO(), io.StringIO()
    try:
        code = main(argv)
        return code, sys.stdout.getvalue(), sys.stderr.getvalue()
    finally:
        sys.stdin, sys.stdout, sys.stderr = stdin, stdout, stderr


def test_render_low_brief_dump():
    code, out, _ = run_cli(["render", "--spec", "stocks", "--preset", "low"])
    assert code == 0
    assert out.splitlines()[1] == "  AAPL. 1 of 5. date, price. 2 axes"


def test_render_high_longer_than_low():
    _, low, _ = run_cli(["render", "--spec", "stocks", "--preset", "low"])
    _, high, _ = run_cli(["render", "--spec", "stocks", "--preset", "high"])
    assert len(high.encode()) > len(low.encode())


def test_render_missing_file_names_path():
    code, _, err = run_cli(["render", "--spec", "/no/such/spec.json"])
    assert code == 1
    assert "/no/such/spec.json" in err


def test_render_deterministic_bytes():
    _, a, _ = run_cli(["render", "--spec", "penguins"])
    _, b, _ = run_cli(["render", "--spec", "penguins"])
    assert a.encode("utf-8") == b.encode("utf-8")


def test_render_unknown_preset_fails():
    code, _, err = run_cli(["render", "--spec", "penguins", "--preset", "nope"])
    assert code == 1 and "nope" in err


def test_render_out_file(tmp_path):
    out_path = tmp_path / "dump.txt"
    code, out, _ = run_cli(["render", "--spec", "temps", "--out", str(out_path)])
    assert code == 0 and out == ""
    assert out_path.read_text(encoding="utf-8").startswith("Seattle daily high")


def test_navigate_piped_two_downs():
    code, out, err = run_cli(["navigate", "--spec", "penguins"],
                             stdin_text="down\ndown\nquit\n")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 2
    assert lines[0].startswith("X-axis")
    assert lines[1].startswith("170 to 180")


def test_navigate_focus_aggregate_reorders():
    code, out, _ = run_cli(["navigate", "--spec", "penguins"],
                           stdin_text="focus aggregate\ndown\nquit\n")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 1  # focus itself is silent
    assert lines[0].startswith("average")


def test_navigate_preset_then_x_uses_short_tokens():
    code, out, _ = run_cli(["navigate", "--spec", "penguins"],
                           stdin_text="preset axis low\nx\nquit\n")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "axis preset set to low"
    assert lines[1].startswith("X-axis. 1 of 3.")


def test_navigate_unknown_token_warns_and_continues():
    code, out, err = run_cli(["navigate", "--spec", "penguins"],
                             stdin_text="sideways\ndown\nquit\n")
    assert code == 0
    assert "sideways" in err
    assert out.splitlines()[0].startswith("X-axis")


def test_simulate_category_percentages(tmp_path):
    code, out, _ = run_cli(["simulate", "--spec", "stocks",
                            "--script", str(SCRIPTS / "mixed_commands.keys")])
    assert code == 0
    summary = out.split("\ncategory\tcount\tpercent\n")[1]
    assert summary.splitlines() == ["presence\t7\t70", "ordering\t2\t20",
                                    "brevity\t1\t10"]


def test_simulate_empty_script(tmp_path):
    script = tmp_path / "empty.keys"
    script.write_text("")
    code, out, _ = run_cli(["simulate", "--spec", "stocks", "--script", str(script)])
    assert code == 0
    transcript, summary = out.split("\ncategory\tcount\tpercent\n")
    assert transcript == ""
    assert all(line.split("\t")[1:] == ["0", "0"] for line in summary.splitlines())


def _stocks_extremum_symbol():
    with open(asset_path("stocks.csv")) as f:
        rows = list(csv.DictReader(f))
    return max(rows, key=lambda r: float(r["price"]))["symbol"]


def test_simulate_find_extremum_ends_at_oracle_facet():
    code, out, _ = run_cli(["simulate", "--spec", "stocks",
                            "--script", str(SCRIPTS / "find_extremum.keys")])
    assert code == 0
    transcript = out.split("\ncategory\tcount\tpercent\n")[0]
    last_announcement = transcript.rstrip("\n").splitlines()[-1].split("\t")[1]
    target = _stocks_extremum_symbol()
    assert last_announcement.startswith(f"symbol {target}")


def test_simulate_parse_error_line_number(tmp_path):
    script = tmp_path / "bad.keys"
    script.write_text("down\nwarp 9\n")
    code, _, err = run_cli(["simulate", "--spec", "stocks", "--script", str(script)])
    assert code == 1
    assert "line 2" in err


def test_console_entry_point_subprocess():
    result = subprocess.run(
        [sys.executable, "-m", "treescribe.cli", "render", "--spec", "penguins",
         "--preset", "low"],
        capture_output=True, text=True, timeout=60)
    assert result.returncode == 0
    assert result.stdout.splitlines()[0].startswith("Penguin flipper length")


def test_serve_port_in_use_exits_one():
    import socket
    sock = socket.socket()
    sock.bind(("127.0.0.1", 0))
    port = sock.getsockname()[1]
    try:
        code, _, err = run_cli(["serve", "--spec", "penguins", "--port", str(port)])
        assert code == 1
        assert str(port) in err
    finally:
        sock.close()
