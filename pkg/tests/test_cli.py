"""CLI surface tests: exit codes, round trips, deterministic dumps."""

import json
from pathlib import Path

import pytest

from mimopt.cli import main

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture()
def sched_file(tmp_path):
    payload = {
        "kind": "scheduling",
        "jobTypes": [
            {"mult": 2, "weight": 1, "perKind": [{"size": 1, "release": 0, "due": "inf"}]},
            {"mult": 1, "weight": 1, "perKind": [{"size": 2, "release": 0, "due": "inf"}]},
        ],
        "machineKinds": [{"speeds": [{"num": 1, "den": 1, "mult": 2}]}],
    }
    path = tmp_path / "sched.json"
    path.write_text(json.dumps(payload))
    return str(path)


@pytest.fixture()
def infeasible_file(tmp_path):
    payload = {
        "kind": "scheduling",
        "jobTypes": [
            {"mult": 2, "weight": 1, "perKind": [{"size": 3, "release": 0, "due": 3}]}
        ],
        "machineKinds": [{"speeds": [{"num": 1, "den": 1, "mult": 1}]}],
    }
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(payload))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


class TestSolve:
    def test_cmax_report(self, capsys, sched_file):
        code, out = run(capsys, "solve", sched_file, "--objective", "cmax")
        assert code == 0
        report = json.loads(out)
        assert report["status"] == "optimal"
        assert report["value"] == "2/1"
        assert "wallMs" not in report

    def test_missing_file(self, capsys):
        assert main(["solve", "/nonexistent.json"]) == 1

    def test_infeasible_exit_code(self, capsys, infeasible_file):
        code, out = run(capsys, "solve", infeasible_file)
        assert code == 2
        assert json.loads(out)["status"] == "infeasible"

    def test_schema_violation(self, capsys, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text(json.dumps({"kind": "scheduling", "jobTypes": []}))
        assert main(["solve", str(path)]) == 1

    def test_determinism_byte_for_byte(self, capsys, sched_file):
        _, first = run(capsys, "solve", sched_file, "--objective", "sumwc")
        _, second = run(capsys, "solve", sched_file, "--objective", "sumwc")
        assert first == second


class TestValidate:
    def test_round_trip(self, capsys, sched_file, tmp_path):
        code, out = run(capsys, "solve", sched_file, "--objective", "cmax")
        schedule = json.loads(out)["schedule"]
        sol = tmp_path / "sol.json"
        sol.write_text(json.dumps(schedule))
        code, out = run(capsys, "validate", sched_file, str(sol), "--objective", "cmax")
        assert code == 0
        assert json.loads(out)["violations"] == []

    def test_hand_edited_overlap(self, capsys, sched_file, tmp_path):
        payload = {
            "machines": [
                {
                    "kind": 0,
                    "speed": "1/1",
                    "jobs": [
                        {"jobType": 0, "start": "0/1", "end": "1/1"},
                        {"jobType": 0, "start": "0/1", "end": "1/1"},
                        {"jobType": 1, "start": "0/1", "end": "2/1"},
                    ],
                },
                {"kind": 0, "speed": "1/1", "jobs": []},
            ],
            "late": [],
        }
        sol = tmp_path / "sol.json"
        sol.write_text(json.dumps(payload))
        code, out = run(capsys, "validate", sched_file, str(sol), "--objective", "cmax")
        assert code == 1
        kinds = {v["kind"] for v in json.loads(out)["violations"]}
        assert "overlap" in kinds

    def test_wrong_multiplicity_names_type(self, capsys, sched_file, tmp_path):
        payload = {
            "machines": [
                {"kind": 0, "speed": "1/1",
                 "jobs": [{"jobType": 0, "start": "0/1", "end": "1/1"}]},
                {"kind": 0, "speed": "1/1", "jobs": []},
            ],
            "late": [],
        }
        sol = tmp_path / "sol.json"
        sol.write_text(json.dumps(payload))
        code, out = run(capsys, "validate", sched_file, str(sol), "--objective", "cmax")
        assert code == 1
        details = [v["detail"] for v in json.loads(out)["violations"]]
        assert any("job type 0" in d for d in details)
        assert any("job type 1" in d for d in details)


class TestBruteForce:
    def test_matches_solver(self, capsys, sched_file):
        _, solver_out = run(capsys, "solve", sched_file, "--objective", "cmax")
        code, oracle_out = run(capsys, "brute-force", sched_file, "--objective", "cmax")
        assert code == 0
        assert json.loads(oracle_out)["value"] == json.loads(solver_out)["value"]

    def test_guard_exit_code(self, capsys, tmp_path):
        payload = {
            "kind": "scheduling",
            "jobTypes": [
                {"mult": 9, "weight": 1, "perKind": [{"size": 1, "release": 0, "due": "inf"}]}
            ],
            "machineKinds": [{"speeds": [{"num": 1, "den": 1, "mult": 1}]}],
        }
        path = tmp_path / "big.json"
        path.write_text(json.dumps(payload))
        assert main(["brute-force", str(path)]) == 3


class TestModelDump:
    def test_dump_deterministic(self, capsys, sched_file):
        _, first = run(capsys, "model-dump", sched_file, "--probe", "2")
        _, second = run(capsys, "model-dump", sched_file, "--probe", "2")
        assert first == second

    def test_golden_d1(self, capsys, tmp_path):
        payload = {
            "kind": "scheduling",
            "jobTypes": [
                {"mult": 2, "weight": 1, "perKind": [{"size": 2, "release": 0, "due": "inf"}]}
            ],
            "machineKinds": [{"speeds": [{"num": 1, "den": 1, "mult": 2}]}],
        }
        path = tmp_path / "d1.json"
        path.write_text(json.dumps(payload))
        _, out = run(capsys, "model-dump", str(path), "--probe", "4")
        golden = (GOLDEN / "model_dump_d1.txt").read_text()
        assert out == golden


class TestGenCorpus:
    def test_seeded_reproducibility(self, capsys, tmp_path):
        out_a = tmp_path / "a"
        out_b = tmp_path / "b"
        out_a.mkdir()
        out_b.mkdir()
        run(capsys, "gen-corpus", "--seed", "5", "--count", "3", "--out", str(out_a))
        run(capsys, "gen-corpus", "--seed", "5", "--count", "3", "--out", str(out_b))
        for name_a, name_b in zip(sorted(out_a.iterdir()), sorted(out_b.iterdir())):
            assert name_a.read_text() == name_b.read_text()
