import json
from pathlib import Path

import pytest

import koszulkit.cli as cli
from koszulkit.cli import main, parse_int_list, parse_q_range

DATA = Path(cli.__file__).parent / "data"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_helpers():
    assert list(parse_q_range("2..4")) == [2, 3, 4]
    assert list(parse_q_range("3")) == [3]
    assert parse_int_list("1, 2,3") == [1, 2, 3]
    with pytest.raises(ValueError):
        parse_q_range("4..2")


def test_wq_and_hilbert(capsys):
    code, out, _ = run(capsys, "wq", DATA / "nonkahler_n4.json", "--q", "1..5")
    assert code == 0
    dims = [int(line.split("\t")[1]) for line in out.splitlines() if not line.startswith("#")]
    assert dims == [4, 6, 8, 10, 12]
    code, out, _ = run(capsys, "hilbert", DATA / "nonkahler_n4.json", "--q", "0..4",
                       "--format", "json", "--verify")
    doc = json.loads(out)
    assert code == 0 and doc["base_locus_length"] == 2


def test_graphic_k4_agrees(capsys):
    code, out, _ = run(capsys, "graphic", DATA / "k4.edges")
    assert code == 0
    assert "chen\t5\tformula=20\tkoszul=20\tAGREE" in out
    assert out.rstrip().endswith("verdict\tAGREE")
    assert out.count("strongly_isotropic=true") == 5
    code, out, _ = run(capsys, "graphic", DATA / "k4.edges", "--format", "json")
    doc = json.loads(out)
    assert [c["koszul"] for c in doc["chen"]] == [20, 25, 30]


def test_graphic_c4_has_no_components(capsys):
    code, out, _ = run(capsys, "graphic", DATA / "c4.edges", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["components"] == [] and doc["verdict"] == "AGREE"
    assert all(c["koszul"] == 0 for c in doc["chen"])


def test_arrangement_with_multinet(capsys):
    code, out, _ = run(capsys, "arrangement", DATA / "braid_a3.json",
                       "--multinet", DATA / "k4_multinet.json", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["verdict"] == "AGREE"
    net = doc["multinets"][0]
    assert net["valid"] and net["equations_agree"] and not net["needs_review"]
    assert all(min(f) >= 0 for f in doc["flats"])


def test_disagreement_exits_4(capsys, monkeypatch):
    monkeypatch.setattr(cli, "chen_ranks_formula", lambda comps, q: -1)
    code, out, _ = run(capsys, "graphic", DATA / "k4.edges")
    assert code == 4 and "verdict\tDISAGREE" in out


def test_resonance_command(capsys):
    code, out, _ = run(capsys, "resonance", DATA / "nonseparable_n6.json",
                       "--component", DATA / "nonseparable_n6_component.json",
                       "--vector", "1,0,0,0,0,0", "--vector", "0,0,0,1,0,0", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    comp = doc["components"][0]
    assert comp["isotropic"] and not comp["separable"] and not comp["strongly_isotropic"]
    assert [v["in_resonance"] for v in doc["vectors"]] == [True, False]


def test_ambient_mismatch_exits_3(capsys):
    code, _, err = run(capsys, "resonance", DATA / "nonseparable_n6.json", "--vector", "1,0")
    assert code == 3 and "error" in err
    code, _, _ = run(capsys, "resonance", DATA / "nonseparable_n6.json",
                     "--component", DATA / "nonkahler_n4_component.json")
    assert code == 3


def test_malformed_inputs_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{oops")
    assert run(capsys, "wq", tmp_path / "missing.json")[0] == 2
    assert run(capsys, "wq", bad)[0] == 2
    assert run(capsys, "wq", DATA / "nonkahler_n4.json", "--q", "x..y")[0] == 2
    assert run(capsys, "no-such-command")[0] == 2
    assert run(capsys, "generic-vanishing", "--n", "6")[0] == 2
    assert run(capsys, "generic-vanishing", "--n", "6", "--witness")[0] == 2


def test_witness(capsys):
    code, out, _ = run(capsys, "generic-vanishing", "--witness")
    assert code == 0 and out.splitlines()[0] == "PASS"


def test_generic_vanishing_records(capsys):
    code, out, _ = run(capsys, "generic-vanishing", "--n", "6", "--seeds", "1,2,3", "--no-timing")
    recs = [json.loads(line) for line in out.splitlines()]
    assert code == 0 and [r["seed"] for r in recs] == [1, 2, 3]
    assert all(r["dim"] == 0 and r["ms"] is None for r in recs)


def test_generic_vanishing_out_resumes(capsys, tmp_path):
    out = tmp_path / "runs.jsonl"
    assert run(capsys, "generic-vanishing", "--n", "6", "--seeds", "1,2", "--no-timing",
               "--out", out)[0] == 0
    first = out.read_text()
    assert run(capsys, "generic-vanishing", "--n", "6", "--seeds", "1,2,3", "--no-timing",
               "--out", out)[0] == 0
    lines = out.read_text().splitlines(keepends=True)
    assert len(lines) == 3 and "".join(lines[:2]) == first
