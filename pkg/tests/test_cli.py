import json

import jsonschema
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pptwitness import io
from pptwitness.cli import main, run
from pptwitness.discrimination import pure_state_pair

from conftest import BELL, random_density, random_pure, random_subspace

SCHEMA = io.report_schema()
seeds = st.integers(0, 2**32 - 1)


def invoke(tmp_path, *argv):
    out = tmp_path / "report.json"
    code, _ = run([*argv, "--report", str(out)])
    report = json.loads(out.read_text()) if out.exists() else None
    if report is not None:
        jsonschema.validate(report, SCHEMA)
    return code, report


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


@given(seeds, st.integers(1, 3), st.integers(1, 3))
@settings(max_examples=20)
def test_operator_round_trip(seed, dA, dB):
    rng = np.random.default_rng(seed)
    N = dA * dB
    r = int(rng.integers(1, N + 1))
    S = random_subspace(rng, dA, dB, r)
    files = [
        io.OperatorFile(dA, dB, "density", random_density(rng, N)),
        io.OperatorFile(dA, dB, "pure", random_pure(rng, N)),
        io.OperatorFile(dA, dB, "projector", S.projector()),
        io.OperatorFile(dA, dB, "subspace", S.basis),
    ]
    for f in files:
        back = io.parse_operator(json.loads(json.dumps(f.to_json())))
        assert back.kind == f.kind and (back.dA, back.dB) == (dA, dB)
        assert np.max(np.abs(back.data - f.data)) < 1e-15


def test_state_set_round_trip():
    S = pure_state_pair(BELL, 2)
    obj = json.loads(json.dumps(io.state_set_json(S, pure_vectors=[BELL, None])))
    back = io.parse_state_set(obj)
    assert back.labels == S.labels
    for a, b in zip(back.states, S.states):
        assert np.max(np.abs(a.matrix - b.matrix)) < 1e-15


@pytest.mark.parametrize(
    "obj,message",
    [
        ({"dA": 2, "dB": 2, "kind": "pure", "data": [[1, 0], [0, 0], [0, 0], [0, 1]]}, "norm"),
        ({"dA": 2, "dB": 2, "kind": "bogus", "data": [[1, 0]]}, "unknown kind"),
        ({"dA": 2, "kind": "pure", "data": [[1, 0]]}, "dA/dB"),
        ({"dA": 1, "dB": 2, "kind": "density", "data": [[[1, 0], [1, 0]], [[0, 0], [0, 0]]]}, "Hermitian"),
        ({"dA": 1, "dB": 2, "kind": "density", "data": [[[2, 0], [0, 0]], [[0, 0], [-1, 0]]]}, "positive"),
        ({"dA": 1, "dB": 2, "kind": "density", "data": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]}, "trace"),
        ({"dA": 1, "dB": 2, "kind": "projector", "data": [[[0.5, 0], [0, 0]], [[0, 0], [0, 0]]]}, "idempotent"),
        ({"dA": 1, "dB": 2, "kind": "subspace", "data": [[[1, 0]], [[1, 0]]]}, "orthonormal"),
        ({"dA": 1, "dB": 2, "kind": "pure", "data": [1, 0]}, "re, im"),
    ],
)
def test_invalid_files_are_rejected(obj, message):
    with pytest.raises(io.FormatError, match=message):
        io.parse_operator(obj)


def test_error_exit_code_and_one_line_message(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"dA": 2,')
    assert main(["tmax", str(bad)]) == 1
    err = capsys.readouterr().err.strip()
    assert err.startswith("error:") and "malformed JSON" in err and "\n" not in err
    assert main(["tmax", str(tmp_path / "missing.json")]) == 1


def test_size_cap_enforced(tmp_path, capsys):
    path = write(tmp_path, "full.json", io.OperatorFile(3, 3, "density", np.eye(9) / 9).to_json())
    assert main(["tmax", path, "--max-dim", "8"]) == 1
    assert "cap" in capsys.readouterr().err


def test_subspace_command(tmp_path):
    code, rep = invoke(tmp_path, "subspace", "2", "2", "--out", str(tmp_path / "s22.json"))
    assert code == 0 and rep["verdict"] == "Witnessed"
    ev = rep["evidence"]
    assert ev["x"] == [1, 2] and ev["rho_pt_lambda_min"] == pytest.approx(1, abs=1e-12)
    assert len(rep["inference_chain"]) == 2
    S = io.load_operator(tmp_path / "s22.json").subspace()
    assert S.dim == 3


def test_examples_then_witness(tmp_path):
    out = str(tmp_path / "pair.json")
    code, rep = invoke(tmp_path, "examples", "theorem2-pair", "--d", "2", "--state", "bell", "--out", out)
    assert code == 0 and rep["verdict"] == "Generated"
    code, rep = invoke(tmp_path, "witness", out)
    assert code == 0 and rep["verdict"] == "IndistinguishableManyCopy"
    assert rep["evidence"]["witness_state"] == "complement"
    assert rep["evidence"]["per_state"][1]["T"] == pytest.approx(0.5, abs=1e-6)


def test_tmax_on_product_span_is_inconclusive(tmp_path):
    path = write(tmp_path, "p00.json", {"dA": 2, "dB": 2, "kind": "pure", "data": [[1, 0], [0, 0], [0, 0], [0, 0]]})
    code, rep = invoke(tmp_path, "tmax", path)
    assert code == 2 and rep["verdict"] == "Inconclusive"
    assert rep["evidence"]["T"] == pytest.approx(0, abs=1e-6)


def test_witness_on_subspace_and_tolerance_flag(tmp_path):
    path = str(tmp_path / "s.json")
    invoke(tmp_path, "examples", "smn", "--m", "2", "--n", "3", "--out", path)
    code, rep = invoke(tmp_path, "witness", path)
    assert code == 0 and rep["verdict"] == "Witnessed"
    code, rep = invoke(tmp_path, "witness", path, "--tol-sdp", "10")
    assert code == 2 and rep["tolerances"]["tol_sdp"] == 10


def test_examples_bell_mixture_and_schmidt(tmp_path):
    path = str(tmp_path / "mix.json")
    code, rep = invoke(tmp_path, "examples", "example1", "--d", "3", "--m", "7", "--k", "3", "--out", path)
    assert code == 0 and rep["evidence"]["measured_pt_lambda_min"] >= rep["evidence"]["bound"] - 1e-9
    assert len(io.load_state_set(path)) == 3
    code, rep = invoke(tmp_path, "examples", "pure-pair", "--state", "schmidt", "--schmidt", "3,1")
    assert rep["evidence"]["lambda1_sq"] == pytest.approx(0.9)
    assert main(["examples", "bell-mixture", "--d", "2", "--m", "2", "--k", "2"]) == 1


def test_discriminate_command(tmp_path):
    classical = {
        "dA": 2,
        "dB": 2,
        "states": [
            {"label": "00", "kind": "pure", "data": [[1, 0], [0, 0], [0, 0], [0, 0]]},
            {"label": "11", "kind": "pure", "data": [[0, 0], [0, 0], [0, 0], [1, 0]]},
        ],
    }
    path = write(tmp_path, "classical.json", classical)
    code, rep = invoke(tmp_path, "discriminate", path)
    assert code == 0 and rep["verdict"] == "UnambiguouslyDistinguishable"
    assert rep["evidence"]["value"] >= 1 - 1e-5
    bell = str(tmp_path / "bell.json")
    invoke(tmp_path, "examples", "pure-pair", "--out", bell)
    code, rep = invoke(tmp_path, "discriminate", bell, "--copies", "2")
    assert rep["verdict"] == "NotUnambiguouslyDistinguishable" and rep["evidence"]["value"] <= 1e-5
    assert rep["evidence"]["copies"] == 2 and rep["evidence"]["numerical_verdict"]


def test_reports_are_deterministic_modulo_timestamp(tmp_path, capsys):
    path = str(tmp_path / "pair.json")
    invoke(tmp_path, "examples", "pure-pair", "--state", "random", "--d", "3", "--seed", "5", "--out", path)
    texts = []
    for _ in range(2):
        assert main(["witness", path]) == 0
        rep = json.loads(capsys.readouterr().out)
        rep.pop("timestamp")
        texts.append(json.dumps(rep, sort_keys=True))
    assert texts[0] == texts[1]
    assert main(["witness", path, "--timestamp", "fixed"]) == 0
    a = capsys.readouterr().out
    assert main(["witness", path, "--timestamp", "fixed"]) == 0
    assert capsys.readouterr().out == a


def test_inputs_digest_tracks_inputs(tmp_path):
    _, a = invoke(tmp_path, "subspace", "2", "3")
    _, b = invoke(tmp_path, "subspace", "2", "3")
    _, c = invoke(tmp_path, "subspace", "2", "3", "--tol-sdp", "1e-5")
    assert a["inputs_digest"] == b["inputs_digest"] != c["inputs_digest"]
