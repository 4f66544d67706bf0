"""Tests for CSV/JSON rendering."""
import json

from share_relay import __version__
from share_relay.output import emit, format_value, header_lines, render_csv, render_json


class TestFormatValue:
    """Cell rendering."""

    def test_missing_is_empty(self):
        assert format_value(None) == ""

    def test_booleans_are_lowercase(self):
        assert format_value(True) == "true"
        assert format_value(False) == "false"

    def test_floats_round_trip(self):
        assert format_value(0.1) == "0.1"
        assert float(format_value(1 / 3)) == 1 / 3
        assert format_value(1.0) == "1.0"

    def test_other_values(self):
        assert format_value(33) == "33"
        assert format_value("dp") == "dp"


def test_header_lines():
    lines = header_lines("simulate", 7, '{"m":2}')
    assert lines == [
        f"# share-relay {__version__}",
        "# command: simulate",
        "# seed: 7",
        '# config: {"m":2}',
    ]


def test_render_csv_keeps_column_order():
    text = render_csv(("b", "a"), [{"a": 1, "b": True}, {"a": None, "b": 0.5}], ["# hi"])
    assert text == "# hi\nb,a\ntrue,1\n0.5,\n"


def test_render_json():
    text = render_json({"reports": []}, "analyze", 3, '{"n":[1]}')
    doc = json.loads(text)
    assert doc["command"] == "analyze"
    assert doc["seed"] == 3
    assert doc["config"] == {"n": [1]}
    assert doc["reports"] == []
    assert text.endswith("\n")


def test_emit_to_file(tmp_path):
    out = tmp_path / "rows.csv"
    emit("a,b\n", out)
    assert out.read_text() == "a,b\n"


def test_emit_to_stdout(capsys):
    emit("x\n", None)
    assert capsys.readouterr().out == "x\n"
