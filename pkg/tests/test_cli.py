import json
import subprocess
import sys

import pytest

from agorank.cli import run

P3_JSON = '{"ideas": ["a", "b", "c"], "rankings": {"v1": ["a", "b", "c"], "v2": ["a", "c", "b"], "v3": ["b", "a", "c"]}}'


@pytest.fixture
def p3_file(tmp_path):
    path = tmp_path / "p.json"
    path.write_text(P3_JSON)
    return str(path)


def test_tally_profile(p3_file, capsys):
    assert run(["tally", "--profile", p3_file]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["scores"] == {"a": 5, "b": 3, "c": 1}
    assert [round(v, 4) for v in out["normalized"].values()] == [0.5556, 0.3333, 0.1111]
    assert out["ranking"] == ["a", "b", "c"]
    assert out["condorcet_winner"] == "a"


def test_tally_comparisons_matches_profile(p3_file, tmp_path, capsys):
    log = tmp_path / "c.csv"
    assert run(["expand", "--profile", p3_file, "-o", str(log)]) == 0
    assert run(["tally", "--comparisons", str(log)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["scores"] == {"a": 5, "b": 3, "c": 1}
    assert out["condorcet_winner"] == "a"


def test_extrapolate(capsys):
    assert run(["extrapolate", "--a", "191", "--b", "-517", "--m", "100", "--n", "1000"]) == 0
    assert float(capsys.readouterr().out) == pytest.approx(18.583, abs=1e-3)
    assert run(["extrapolate", "--a", "84", "--b", "-228", "--m", "100", "--n", "1000"]) == 0
    assert float(capsys.readouterr().out) == pytest.approx(8.172, abs=1e-3)


def test_extrapolate_outside_regime(capsys):
    assert run(["extrapolate", "--a", "191", "--b", "-517", "--m", "2", "--n", "1000"]) == 1
    assert "fitted regime" in capsys.readouterr().err


def test_sample_embeds_seed_and_is_repeatable(p3_file, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    argv = ["sample", "--profile", p3_file, "--eps", "0.1", "--delta", "0.1", "--seed", "7"]
    assert run(argv + ["-o", str(a)]) == 0
    assert run(argv + ["-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    doc = json.loads(a.read_text())
    assert doc["seed"] == 7 and doc["trials"][0]["seed"] == 7
    assert doc["samples"] == 1021  # ceil(300 * ln 30)
    assert sum(doc["trials"][0]["counts"].values()) == doc["samples"]


def test_seed_from_environment(p3_file, tmp_path, monkeypatch):
    monkeypatch.setenv("AGORANK_SEED", "31")
    out = tmp_path / "s.json"
    assert run(["sample", "--profile", p3_file, "--samples", "50", "-o", str(out)]) == 0
    assert json.loads(out.read_text())["seed"] == 31
    assert run(["sample", "--profile", p3_file, "--samples", "50", "--seed", "2", "-o", str(out)]) == 0
    assert json.loads(out.read_text())["seed"] == 2


def test_condorcet_search_command(p3_file, capsys):
    assert run(["condorcet-search", "--profile", p3_file, "--seed", "1", "--trials", "5"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["seed"] == 1
    assert [t["winner"] for t in doc["trials"]] == ["a"] * 5


def test_gen_replay_fit(tmp_path, capsys):
    crossings = []
    for m in (3, 5):
        log = tmp_path / f"log{m}.csv"
        assert run(["gen", "--m", str(m), "--n", "60", "--seed", "3", "--format", "comparisons", "-o", str(log)]) == 0
        cross = tmp_path / f"x{m}.json"
        assert run(["replay", "--comparisons", str(log), "--repeats", "20", "--seed", "4",
                    "-o", str(tmp_path / f"t{m}.csv"), "--crossings", str(cross)]) == 0
        doc = json.loads(cross.read_text())
        assert doc["seed"] == 4 and doc["m"] == m
        crossings.append(str(cross))
    fit_path = tmp_path / "fit.json"
    assert run(["fit", *crossings, "--target", "0.1", "-o", str(fit_path)]) == 0
    fit = json.loads(fit_path.read_text())
    assert set(fit) == {"a", "b", "r2", "points", "seed"}
    assert fit["seed"] == 4
    assert {p["m"] for p in fit["points"]} == {3, 5}
    assert (tmp_path / "t3.csv").read_text().startswith("samples,eps_mean,eps_std\n")


def test_bias_and_timing(tmp_path, capsys):
    ratings = tmp_path / "r.csv"
    ratings.write_text("participant_id,sequence_index,stars\nu,0,1\nu,1,1\nu,2,5\nu,3,1\nu,4,5\nu,5,5\n")
    assert run(["bias", "--ratings", str(ratings)]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["probs"]["1"]["5"] == pytest.approx(2 / 3)
    assert doc["probs"]["3"] is None
    timings = tmp_path / "t.csv"
    timings.write_text("participant_id,group_size,elapsed_ms\nu,4,30000\nw,3,6000\nw,3,12000\n")
    assert run(["timing", "--timings", str(timings)]) == 0
    assert json.loads(capsys.readouterr().out) == {"3": 3.0, "4": 5.0}


def test_validate(tmp_path, p3_file, capsys):
    assert run(["validate", "--profile", p3_file]) == 0
    assert capsys.readouterr().out.startswith("ok")
    bad = tmp_path / "bad.json"
    bad.write_text('{"ideas": ["a", "b"], "rankings": {"v": ["a", "z"]}}')
    assert run(["validate", "--profile", str(bad)]) == 1
    err = capsys.readouterr().err
    assert "bad.json:1" in err and "unknown idea" in err


def test_exit_codes(tmp_path, capsys):
    assert run(["frobnicate"]) == 1
    assert "usage" in capsys.readouterr().err
    assert run(["tally", "--bogus"]) == 1
    assert run(["tally", "--profile", str(tmp_path / "missing.json")]) == 2
    assert "I/O error" in capsys.readouterr().err
    bad = tmp_path / "c.csv"
    bad.write_text("topic_id,participant_id,winner,loser,elapsed_ms\nt,v,a,a,\n")
    assert run(["tally", "--comparisons", str(bad)]) == 1
    assert "c.csv:2" in capsys.readouterr().err


def test_entry_point_subprocess(p3_file):
    ok = subprocess.run([sys.executable, "-m", "agorank", "tally", "--profile", p3_file],
                        capture_output=True, text=True)
    assert ok.returncode == 0 and json.loads(ok.stdout)["condorcet_winner"] == "a"
    bad = subprocess.run([sys.executable, "-m", "agorank", "nope"], capture_output=True, text=True)
    assert bad.returncode == 1 and "usage" in bad.stderr
