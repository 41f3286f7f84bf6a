"""Command-line behaviour: exit codes, output streams, file round trips."""

import json
from pathlib import Path

import pytest

from cardauthsim.blocks import GOLDEN_DIGESTS
from cardauthsim.cli import main

DICT_PATH = str(Path(__file__).parent.parent / "data" / "dictionary.txt")


class TestDemo:
    def test_parallel_session_succeeds(self, capsys):
        code = main(["demo", "parallel-session", "--seed", "42"])
        out, err = capsys.readouterr()
        assert code == 0
        assert err.strip().split("\n")[-1] == "attack-succeeded"
        for line in out.strip().split("\n"):
            json.loads(line)

    def test_honest_accepts(self, capsys):
        code = main(["demo", "honest", "--seed", "1"])
        _, err = capsys.readouterr()
        assert code == 0
        assert err.strip().split("\n")[-1] == "accepted"

    def test_attack_failure_maps_to_exit_one(self, capsys):
        # window 1 is too tight for the canned two-tick relay
        code = main(["demo", "parallel-session", "--seed", "1", "--window", "1"])
        _, err = capsys.readouterr()
        assert code == 1
        assert err.strip().split("\n")[-1] == "attack-failed"

    def test_guessing_scenarios_require_dictionary_flag(self, capsys):
        for scenario in ("offline-guess", "outsider-change"):
            assert main(["demo", scenario]) == 2
            capsys.readouterr()

    def test_offline_guess_with_dictionary(self, capsys):
        code = main(["demo", "offline-guess", "--seed", "7", "--dictionary", DICT_PATH])
        _, err = capsys.readouterr()
        assert code == 0
        assert err.strip().split("\n")[-1] == "attack-succeeded"

    def test_unreadable_dictionary_is_io_error(self, capsys):
        code = main(["demo", "offline-guess", "--dictionary", "/no/such/file"])
        _, err = capsys.readouterr()
        assert code == 1
        assert "error" in err

    def test_out_writes_replayable_file(self, tmp_path, capsys):
        out_file = tmp_path / "t.jsonl"
        code = main(["demo", "honest", "--seed", "3", "--out", str(out_file)])
        out, _ = capsys.readouterr()
        assert code == 0
        assert out == ""
        assert main(["replay", str(out_file)]) == 0

    def test_stdout_identical_across_runs(self, capsys):
        main(["demo", "parallel-session", "--seed", "42"])
        first, _ = capsys.readouterr()
        main(["demo", "parallel-session", "--seed", "42"])
        second, _ = capsys.readouterr()
        assert first == second

    def test_human_format(self, capsys):
        code = main(["demo", "honest", "--seed", "3", "--format", "human"])
        out, _ = capsys.readouterr()
        assert code == 0
        assert "verdict" in out
        with pytest.raises(json.JSONDecodeError):
            json.loads(out.split("\n")[0])

    def test_unknown_scenario_is_usage_error(self, capsys):
        assert main(["demo", "replay-everything"]) == 2

    def test_bad_window_is_error(self, capsys):
        code = main(["demo", "honest", "--window", "0"])
        _, err = capsys.readouterr()
        assert code == 1
        assert "window" in err


class TestReplayCommand:
    def test_verifies_unmodified_file(self, tmp_path, capsys):
        out_file = tmp_path / "t.jsonl"
        main(["demo", "parallel-session", "--seed", "42", "--out", str(out_file)])
        capsys.readouterr()
        code = main(["replay", str(out_file)])
        out, _ = capsys.readouterr()
        assert code == 0
        assert out.startswith("verified")

    def test_detects_tampering(self, tmp_path, capsys):
        out_file = tmp_path / "t.jsonl"
        main(["demo", "honest", "--seed", "5", "--out", str(out_file)])
        capsys.readouterr()
        text = out_file.read_text(encoding="utf-8")
        lines = text.split("\n")
        obj = json.loads(lines[3])
        obj["payload"]["message"]["t"] = 999
        lines[3] = json.dumps(obj, sort_keys=True, separators=(",", ":"))
        out_file.write_text("\n".join(lines), encoding="utf-8")
        code = main(["replay", str(out_file)])
        out, _ = capsys.readouterr()
        assert code == 1
        assert out.startswith("mismatch at seq 2")

    def test_missing_file_is_io_error(self, capsys):
        code = main(["replay", "/no/such/transcript.jsonl"])
        _, err = capsys.readouterr()
        assert code == 1
        assert "error" in err

    def test_garbage_file_is_error(self, tmp_path, capsys):
        bad = tmp_path / "bad.jsonl"
        bad.write_text("garbage\n", encoding="utf-8")
        code = main(["replay", str(bad)])
        _, err = capsys.readouterr()
        assert code == 1


class TestVectors:
    def test_prints_pinned_digests(self, capsys):
        code = main(["vectors"])
        out, _ = capsys.readouterr()
        assert code == 0
        for name, hexdigest in GOLDEN_DIGESTS.items():
            assert f"{name} {hexdigest}" in out


class TestUsage:
    def test_no_arguments_is_usage_error(self, capsys):
        assert main([]) == 2

    def test_unknown_command_is_usage_error(self, capsys):
        assert main(["frobnicate"]) == 2

    def test_help_exits_zero(self, capsys):
        assert main(["--help"]) == 0
