import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alglab import io as aio
from alglab import presets
from alglab.cli import run_cli


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from(presets.RANDOM_KINDS))
def test_roundtrip_random(seed, kind):
    M = presets.random_metrized(seed, 3, kind)
    alg, form, _ = aio.loads(aio.dumps(M))
    assert alg == M.algebra and form == M.form


@pytest.mark.parametrize("name", ["c_epsilon:3/10", "okubo_compact", "herm:3:1"])
def test_roundtrip_presets(name, tmp_path):
    M = presets.build(name)
    path = tmp_path / "alg.json"
    aio.save(path, M)
    L = aio.load_metrized(path)
    assert L.algebra == M.algebra and L.form == M.form


def test_float_roundtrip_bitwise():
    M = presets.herm(2, 0).to_float()
    alg, form, _ = aio.loads(aio.dumps(M))
    assert alg.constants == M.algebra.constants


@pytest.mark.parametrize("doc,path", [
    ({"dim": 2, "constants": [[0, 0, 5, "1"]]}, "constants[0][2]"),
    ({"dim": 2, "constants": [[0, 0, 0, "2/4"]]}, "constants[0][3]"),
    ({"dim": 2, "constants": [[0, 0, 0, 0.5]]}, "constants[0][3]"),
    ({"dim": 0}, "dim"),
    ({"dim": 2, "metric": [[1, 0]]}, "metric"),
    ({"dim": 2, "bogus": 1}, "bogus"),
])
def test_schema_errors_name_field(doc, path):
    with pytest.raises(aio.FormatError) as exc:
        aio.from_document(doc)
    assert exc.value.path == path


def test_json_syntax_error_location():
    with pytest.raises(aio.FormatError) as exc:
        aio.loads('{"dim": 2,\n "constants": [}')
    assert exc.value.path.startswith("line 2")


def test_missing_metric(tmp_path):
    p = tmp_path / "a.json"
    p.write_text(json.dumps({"dim": 1, "constants": [[0, 0, 0, "1"]]}))
    with pytest.raises(aio.FormatError):
        aio.load_metrized(p)


def test_report_formats():
    rep = {"a": Fraction(1, 3), "b": {"c": [1, 2]}}
    assert json.loads(aio.report_json(rep)) == {"a": "1/3", "b": {"c": [1, 2]}}
    assert aio.report_csv(rep).splitlines() == ["key,value", "a,1/3", 'b.c,"[1, 2]"']


def _run(capsys, *argv):
    code = run_cli(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_cli_sect_literals(capsys):
    code, out = _run(capsys, "sect", "herm:3:0", "--x", "diag(1,0,-1)", "--y", "sym(1,3)")
    assert code == 0 and json.loads(out)["sect"] == "3/2"


def test_cli_sect_csv_coordinates(capsys):
    code, out = _run(capsys, "sect", "preset:c_epsilon:0", "--x", "1,0,0", "--y", "0,1,0", "--format", "csv")
    assert code == 0 and "sect,1/4" in out.splitlines()


def test_cli_file_source(tmp_path, capsys):
    p = tmp_path / "c.json"
    aio.save(p, presets.c_epsilon(1))
    code, out = _run(capsys, "constant-sect", str(p))
    assert code == 0 and json.loads(out)["value"] == "-3/4"


def test_cli_seed_env(monkeypatch, capsys):
    monkeypatch.setenv("ALG_LAB_SEED", "42")
    code, out = _run(capsys, "list-presets")
    assert code == 0 and json.loads(out)["seed"] == 42
    monkeypatch.setenv("ALG_LAB_SEED", "abc")
    assert run_cli(["list-presets"]) == 2


@pytest.mark.parametrize("argv", [
    ["info", "nope:1"],
    ["sect", "herm:3:0", "--x", "1,2", "--y", "0,1,0,0,0,0"],
    ["sect", "c_epsilon:0", "--x", "diag(1,2,3)", "--y", "1,0,0"],
    ["sect", "c_epsilon:0", "--x", "1,0,0", "--y", "2,0,0"],
    ["bw", "kosier"],
    ["verify", "nosuchsuite"],
    [],
])
def test_cli_usage_errors(argv, capsys):
    assert run_cli(argv) == 2


def test_cli_info_and_spectrum(capsys):
    code, out = _run(capsys, "info", "kosier")
    assert code == 0 and json.loads(out)["definiteness"] == "indefinite"
    code, out = _run(capsys, "spectrum", "c_epsilon:1", "--e", "1,0,0")
    assert code == 0 and json.loads(out)["exact"] == ["-1/2", "3/2"]


def test_cli_verify_exit_codes(capsys):
    assert run_cli(["verify", "identities"]) == 0
    assert run_cli(["verify", "bianchi", "--count", "3"]) == 0


def test_cli_special(capsys):
    code, out = _run(capsys, "idempotents", "r3_star", "--starts", "32")
    assert code == 0 and len(json.loads(out)["result"]["elements"]) == 4
