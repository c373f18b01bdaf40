import io
import json

import pytest

from multivision import codec
from multivision.cli import build_parser, format_move_text, parse_move_text, run
from multivision.core import Move, MovePart, PrimeWindow

WINDOW = PrimeWindow((2, 3, 5))


def invoke(argv, stdin="", capsys=None, monkeypatch=None):
    monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    code = run(argv)
    out, err = capsys.readouterr()
    return code, out, err


class TestMoveText:
    def test_single_part_round_trip(self):
        mv = Move(0, (MovePart(0, 1, {1: 1}),))
        text = format_move_text(mv, WINDOW)
        assert text == "pile 1: /2 *3^1"
        assert parse_move_text(text, WINDOW) == mv

    def test_multi_part(self):
        mv = Move(0, (MovePart(0, 2, {2: 4}), MovePart(1, 1)))
        text = format_move_text(mv, WINDOW)
        assert text == "[pile 1: /2^2 *5^4; pile 2: /2]"
        assert parse_move_text(text, WINDOW) == mv

    def test_mismatched_divisors_rejected(self):
        with pytest.raises(Exception, match="same prime"):
            parse_move_text("[pile 1: /2; pile 2: /3]", WINDOW)

    def test_prime_outside_window(self):
        with pytest.raises(Exception, match="outside the window"):
            parse_move_text("pile 1: /7", WINDOW)

    def test_gibberish(self):
        with pytest.raises(Exception, match="cannot parse"):
            parse_move_text("divide the first pile", WINDOW)


class TestClassifyCommand:
    def test_n_position_from_stdin(self, capsys, monkeypatch):
        code, out, _ = invoke(["classify", "-K", "2"], "2^1\n3^1\n", capsys, monkeypatch)
        assert code == 0
        assert out.splitlines() == ["N", "totals: [1, 1]"]

    def test_terminal_is_p(self, capsys, monkeypatch):
        code, out, _ = invoke(["classify"], "1\n", capsys, monkeypatch)
        assert code == 0
        assert out.splitlines()[0] == "P"

    def test_wire_format(self, capsys, monkeypatch):
        code, out, _ = invoke(
            ["classify", "--format", "wire", "--pos", "2^1;3^1"], "", capsys, monkeypatch
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["kind"] == "classification"
        assert doc["payload"] == {"classification": "N", "totals": ["1", "1"]}

    def test_bad_position_is_domain_error(self, capsys, monkeypatch):
        code, _, err = invoke(["classify"], "4^1\n", capsys, monkeypatch)
        assert code == 1
        assert "non-prime base" in err

    def test_usage_error_exit_code(self, capsys, monkeypatch):
        code, _, _ = invoke(["classify", "--format", "nope"], "", capsys, monkeypatch)
        assert code == 2


class TestHintCommand:
    def test_hint_matches_strategy_example(self, capsys, monkeypatch):
        code, out, _ = invoke(["hint", "-K", "2"], "2^1 * 3^1\n", capsys, monkeypatch)
        assert code == 0
        assert out.strip() == "pile 1: /2 *3^1"

    def test_hint_on_p_position(self, capsys, monkeypatch):
        code, out, _ = invoke(["hint"], "2^2\n", capsys, monkeypatch)
        assert code == 0
        assert out.strip() == "none: P-position"

    def test_hint_wire(self, capsys, monkeypatch):
        code, out, _ = invoke(["hint", "--format", "wire"], "2^1 * 3^1\n", capsys, monkeypatch)
        doc = json.loads(out)
        assert doc["kind"] == "hint"
        assert doc["payload"]["classification"] == "N"
        assert doc["payload"]["move"]["prime_index"] == "0"


class TestDelayCommand:
    def test_delay_prints_pump_move(self, capsys, monkeypatch):
        code, out, _ = invoke(["delay", "--r", "100"], "2^1 * 3^2\n", capsys, monkeypatch)
        assert code == 0
        assert out.strip() == "pile 1: /2 *3^100"

    def test_delay_error_when_only_top_mass(self, capsys, monkeypatch):
        code, _, err = invoke(["delay", "--r", "5"], "3^1\n", capsys, monkeypatch)
        assert code == 1
        assert "cannot-delay" in err


class TestSolveCommand:
    def test_single_grid(self, capsys, monkeypatch):
        code, out, _ = invoke(
            ["solve", "--window", "2,3", "--max-piles", "1", "--max-exponent", "1"],
            "",
            capsys,
            monkeypatch,
        )
        assert code == 0
        assert "mismatches: 0" in out

    def test_wire_output(self, capsys, monkeypatch):
        code, out, _ = invoke(
            ["solve", "--window", "2,3", "--max-piles", "1", "--max-exponent", "1",
             "--format", "wire"],
            "",
            capsys,
            monkeypatch,
        )
        assert code == 0
        report = codec.decode_wire(out.strip())
        assert report.mismatches == ()


class TestSimulateCommand:
    def test_random_versus_optimal(self, capsys, monkeypatch):
        code, out, _ = invoke(
            ["simulate", "--pos", "2^1 * 3^1;2^1 * 3^1", "--games", "10",
             "--agent-i", "random_capped", "--agent-ii", "optimal"],
            "",
            capsys,
            monkeypatch,
        )
        assert code == 0
        assert "games: 10" in out
        assert "violations: 0" in out

    def test_wire_summary(self, capsys, monkeypatch):
        code, out, _ = invoke(
            ["simulate", "--pos", "2^2", "--games", "3", "--format", "wire"],
            "",
            capsys,
            monkeypatch,
        )
        assert code == 0
        summary = codec.decode_wire(out.strip())
        assert summary.games == 3
        assert summary.violations == ()


class TestPlayCommand:
    def test_scripted_session(self, capsys, monkeypatch):
        # human plays the winning move from 6; engine must answer from the
        # square and eventually the human wins
        script = "pile 1: /2 *3^1\nhint\npile 1: /3\npile 1: /3\npile 1: /3\n"
        code, out, _ = invoke(
            ["play", "--pos", "2^1 * 3^1"], script, capsys, monkeypatch
        )
        assert code == 0
        assert "you win" in out

    def test_illegal_move_reprompts_with_reason(self, capsys, monkeypatch):
        script = "pile 2: /2\npile 1: /2\nquit\n"
        code, out, _ = invoke(["play", "--pos", "2^1;3^1"], script, capsys, monkeypatch)
        assert code == 0
        assert "insufficient-exponent" in out

    def test_unparseable_move_reprompts(self, capsys, monkeypatch):
        script = "take two\nquit\n"
        code, out, _ = invoke(["play", "--pos", "2^1"], script, capsys, monkeypatch)
        assert code == 0
        assert "cannot read that move" in out

    def test_play_requires_explicit_position(self, capsys, monkeypatch):
        code, _, err = invoke(["play"], "", capsys, monkeypatch)
        assert code == 1
        assert "--pos or --file" in err


def test_parser_covers_all_subcommands():
    import argparse

    parser = build_parser()
    sub = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    assert set(sub.choices) == {"classify", "hint", "delay", "play", "solve", "simulate", "serve"}
