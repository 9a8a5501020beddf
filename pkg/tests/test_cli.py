import io
import json
import subprocess
import sys

import pytest

from headsup.cli import build_parser, main, play_local
from headsup.engine import DeckMode, MatchConfig


def run_cli(*argv):
    return main(list(argv))


def local_config(**overrides):
    base = dict(starting_stack=20, small_blind=1, big_blind=2,
                deck_mode=DeckMode.DIGITAL, rng_seed=3)
    base.update(overrides)
    return MatchConfig(**base)


def run_local(script, config=None, max_hands=1):
    out = io.StringIO()
    rc = play_local(
        config or local_config(),
        max_hands=max_hands,
        in_stream=io.StringIO(script),
        out=out,
    )
    return rc, out.getvalue()


class TestVerificationCommands:
    def test_explore_json_exit_zero(self, capsys):
        rc = run_cli("explore", "--street", "flop", "--json")
        captured = capsys.readouterr()
        assert rc == 0
        report = json.loads(captured.out)
        assert report["violations"] == []
        assert report["street"] == "flop"

    def test_fuzz_deterministic_output(self, capsys):
        rc = run_cli("fuzz", "--hands", "100", "--seed", "1", "--json")
        first = capsys.readouterr().out
        assert rc == 0
        rc = run_cli("fuzz", "--hands", "100", "--seed", "1", "--json")
        second = capsys.readouterr().out
        assert rc == 0
        assert first == second

    def test_simulate_with_faults(self, capsys):
        rc = run_cli(
            "simulate", "--hands", "30", "--dup", "0.3", "--reorder", "4", "--json"
        )
        report = json.loads(capsys.readouterr().out)
        assert rc == 0
        assert report["converged"] is True

    def test_text_summaries(self, capsys):
        assert run_cli("explore", "--street", "preflop", "--stack", "6") == 0
        out = capsys.readouterr().out
        assert "violations" in out

    def test_module_entry_point(self):
        proc = subprocess.run(
            [sys.executable, "-m", "headsup", "fuzz", "--hands", "20", "--json"],
            capture_output=True,
            text=True,
            timeout=120,
        )
        assert proc.returncode == 0
        assert json.loads(proc.stdout)["violations"] == []


class TestPlayLocal:
    def test_fold_at_first_prompt_transfers_blind(self):
        # option 1 on the opening menu is fold
        rc, out = run_local("1\n")
        assert rc == 0
        assert "seat 1 wins" in out
        assert "fold" in out
        assert "stacks: [19, 21]" in out

    def test_illegal_amount_reprompts_with_bounds(self):
        # raise (option 3) to 99 is beyond all-in for a 20 stack; then fold
        rc, out = run_local("3 99\n1\n")
        assert rc == 0
        assert "amount must be in [4..20]" in out

    def test_garbage_input_never_crashes(self):
        rc, out = run_local("banana\n0\n9 9 9\n\n1\n")
        assert rc == 0
        assert "enter a number" in out

    def test_check_down_to_showdown(self):
        # call, check, then check-check on flop/turn/river: 2+2+2+2 = 8 inputs
        script = "2\n1\n" + "1\n1\n" * 3
        rc, out = run_local(script)
        assert rc == 0
        assert "showdown: seat 0 shows" in out
        assert "stacks:" in out

    def test_all_in_run_out(self):
        # dealer raises all-in (option 3, amount 20), opponent calls (option 2)
        rc, out = run_local("3 20\n2\n")
        assert rc == 0
        assert "showdown" in out

    def test_physical_mode_declaration_flow(self):
        config = local_config(deck_mode=DeckMode.PHYSICAL)
        # dealer calls, opponent checks, four streets of check-check, then
        # mismatched declarations (0 vs 1) followed by matching chop/chop
        script = "2\n1\n" + "1\n1\n" * 3 + "0\n1\nchop\nchop\n"
        rc, out = run_local(script, config=config)
        assert rc == 0
        assert "declarations do not match" in out
        assert "chopped pot" in out

    def test_hands_limit_stops_the_loop(self):
        rc, out = run_local("1\n1\n1\n", max_hands=3)
        assert rc == 0
        assert out.count("wins") == 3

    def test_eof_mid_hand_is_clean(self):
        rc, out = run_local("")  # immediate EOF
        assert rc == 0
        assert "input closed" in out


class TestParser:
    def test_requires_subcommand(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args([])

    def test_serve_flag_defaults(self):
        args = build_parser().parse_args(["serve"])
        assert args.listen.count(":") == 1
        assert args.max_sessions == 256

    def test_bad_listen_value(self):
        rc = run_cli("serve", "--listen", "nonsense")
        assert rc == 2
