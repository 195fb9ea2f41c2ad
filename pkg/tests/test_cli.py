import csv
import json

import pytest

from tdlindblad.cli import main


def _run(tmp_path, *argv):
    return main(list(argv) + ["--out", str(tmp_path)])


def test_classify_writes_report(tmp_path, capsys):
    assert _run(tmp_path, "classify", "--model", "zoo:rotating-dephasing") == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert json.loads(lines[0])["model"] == "zoo:rotating-dephasing"
    assert json.loads(lines[-1]) == {"class": "iv", "dim_c_sch": 1, "dim_c_int": 2}
    report = json.loads((tmp_path / "classification.json").read_text())
    assert report["class"] == report["expected"]["class"] == "iv"
    assert (tmp_path / "config.json").exists()


def test_classify_sector_and_overrides(tmp_path):
    assert _run(tmp_path, "classify", "--model", "zoo:hubbard-1freq", "--sector", "2", "--set", "J=0.5") == 0
    report = json.loads((tmp_path / "classification.json").read_text())
    assert (report["dim_c_sch"], report["dim_c_int"]) == (2, 10)
    cfg = json.loads((tmp_path / "config.json").read_text())
    assert cfg["set"] == {"J": 0.5} and cfg["sector"] == 2


def test_refusal_and_usage_exit_codes(tmp_path, capsys):
    assert _run(tmp_path, "classify", "--model", "zoo:decaying-dephasing") == 3
    assert "refused" in capsys.readouterr().err
    assert _run(tmp_path, "classify", "--model", "zoo:nope") == 1
    assert _run(tmp_path, "classify", "--model", "zoo:ex-3.1", "--set", "bogus=1") == 3
    assert _run(tmp_path, "classify", "--model", "somewhere") == 1
    assert main(["classify", "--out", str(tmp_path)]) == 1
    with pytest.raises(SystemExit) as exc:
        main(["classify", "--frobnicate"])
    assert exc.value.code == 1


def test_simulate_outputs_and_replay(tmp_path):
    first = tmp_path / "a"
    args = ["simulate", "--model", "zoo:ex-3.1", "--t-end", "40", "--ensemble", "2", "--seed", "3"]
    assert _run(first, *args) == 0
    summary = json.loads((first / "summary.json").read_text())
    assert summary["empirical_class"] == summary["algebraic_class"] == "i"
    assert summary["agreement"] is True
    with (first / "trajectory_0.csv").open() as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["t", "sx", "sy", "sz", "purity"]
    second = tmp_path / "b"
    assert main(["simulate", "--config", str(first / "config.json"), "--out", str(second)]) == 0
    assert (first / "trajectory_1.csv").read_text() == (second / "trajectory_1.csv").read_text()


def test_simulate_rejects_unknown_observable(tmp_path):
    assert _run(tmp_path, "simulate", "--model", "zoo:ex-3.1", "--observables", "sq", "--t-end", "1") == 1


def test_replay_of_a_different_command_is_a_usage_error(tmp_path):
    assert _run(tmp_path, "floquet", "--model", "zoo:bump") == 0
    assert main(["classify", "--config", str(tmp_path / "config.json")]) == 1


def test_floquet_detects_resonance(tmp_path):
    assert _run(tmp_path, "floquet", "--model", "zoo:bump", "--set", "gT=6.283185307179586") == 0
    data = json.loads((tmp_path / "floquet.json").read_text())
    assert data["mixing"] is False


def test_spectrum_of_rotating_coherence(tmp_path):
    argv = ["spectrum", "--model", "zoo:rotating-dephasing", "--observables", "sx", "--t-end", "60"]
    argv += ["--dt", "0.01", "--center", "40", "--width", "8", "--seed", "1"]
    assert _run(tmp_path, *argv) == 0
    data = json.loads((tmp_path / "spectrum.json").read_text())
    assert data["peaks"]["sx"]["count"] == 1
    assert data["peaks"]["sx"]["frequencies"][0] == pytest.approx(1.0, abs=0.05)


def test_model_from_file(tmp_path):
    spec = {
        "hamiltonian": [{"profile": 1.0, "matrix": "pauli:z"}],
        "jumps": ["pauli:z"],
        "name": "dephased",
    }
    path = tmp_path / "m.json"
    path.write_text(json.dumps(spec))
    assert _run(tmp_path, "classify", "--model", f"file:{path}") == 0
    report = json.loads((tmp_path / "classification.json").read_text())
    assert report["class"] == "ii"
    path.write_text(json.dumps({"hamiltonian": [[1, 0], [0, 2]], "jumps": [[[0, [0, 1]], [0, 0]]]}))
    assert _run(tmp_path, "classify", "--model", f"file:{path}") == 3


def test_zoo_list(capsys):
    assert main(["zoo-list"]) == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert json.loads(out[0]) == {"command": "zoo-list"}
    assert len(out[1:]) == 13 and out[1].startswith("ex-3.1")


def test_tolerance_overrides(tmp_path, capsys):
    from tdlindblad import TOL

    before = TOL.rank_rtol
    argv = ["classify", "--model", "zoo:ex-3.2", "--tol", "rank_rtol=1e-9"]
    assert _run(tmp_path, *argv) == 0
    report = json.loads((tmp_path / "classification.json").read_text())
    assert report["tolerances"]["rank_rtol"] == 1e-9
    assert TOL.rank_rtol == before
    assert json.loads((tmp_path / "config.json").read_text())["tolerances"] == {"rank_rtol": 1e-9}
    assert _run(tmp_path, "classify", "--model", "zoo:ex-3.2", "--tol", "nonsense=1") == 1
    assert _run(tmp_path, "classify", "--model", "zoo:ex-3.2", "--tol", "rank_rtol=-1") == 1


def test_simulate_alias_keeps_memory_of_initial_state(tmp_path):
    argv = ["simulate", "--model", "zoo:ex-4.2", "--t-end", "12", "--ensemble", "1", "--no-classify"]
    assert _run(tmp_path, *argv) == 0
    with (tmp_path / "trajectory.csv").open() as fh:
        rows = list(csv.reader(fh))
    first, last = [float(x) for x in rows[1][1:4]], [float(x) for x in rows[-1][1:4]]
    want = [first[0] / 2.718281828459045, first[1] / 2.718281828459045, first[2] / 2.718281828459045**2]
    assert last == pytest.approx(want, abs=1e-6)
