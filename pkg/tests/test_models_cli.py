import csv
import io
import json
from fractions import Fraction

import pytest

from toric_mirror import __version__
from toric_mirror.cli import csv_text, encode, main, run
from toric_mirror.errors import GeometryError, SchemaError
from toric_mirror.models import FIXTURES, fixture_text, load_fixture, load_model, parse_model

from conftest import model


@pytest.fixture
def model_path(tmp_path):
    def write(name):
        p = tmp_path / f"{name}.json"
        p.write_bytes(fixture_text(name))
        return str(p)
    return write


def schema_path(doc):
    text = doc if isinstance(doc, (str, bytes)) else json.dumps(doc)
    with pytest.raises(SchemaError) as exc:
        parse_model(text)
    return exc.value.path


class TestParse:
    def test_p2_fixture(self):
        mf = load_fixture("p2")
        assert mf.name == "p2" and mf.source == "git"
        assert mf.git.charges == ((1,), (1,), (1,))
        assert len(mf.fan.max_cones) == 3
        assert mf.defaults == {"bound": 6, "tol": 1e-10}

    def test_round_trip(self, fixture_name, model_path):
        mf = load_model(model_path(fixture_name))
        ref = model(fixture_name)
        assert mf.git == ref.git and mf.fan.rays == ref.fan.rays

    def test_fan_input_matches_git_input(self):
        g = load_fixture("p1xp1")
        doc = {"name": "x", "fan": {"rays": [list(r) for r in g.fan.rays],
                                    "max_cones": [list(c) for c in g.fan.max_cones]}}
        mf = parse_model(json.dumps(doc))
        assert mf.source == "fan"
        assert sorted(mf.git.pairing(d) for d in [(1, 0), (0, 1)]) == sorted(
            g.git.pairing(d) for d in [(1, 0), (0, 1)])

    def test_bytes_and_rationals(self):
        doc = b'{"name": "p1", "git": {"charges": [[1], [1]], "omega": ["1/2"]}}'
        assert parse_model(doc).git.omega == (Fraction(1, 2),)

    def test_wrong_ray_dimension(self):
        doc = {"name": "x", "fan": {"rays": [[1, 0], [0, 1], [-1, -1, 0]],
                                    "max_cones": [[0, 1], [1, 2], [0, 2]]}}
        assert schema_path(doc) == "/fan/rays/2"

    @pytest.mark.parametrize("doc, path", [
        ({"git": {"charges": [[1]], "omega": [1]}}, "/name"),
        ({"name": "x"}, ""),
        ({"name": "x", "git": {"charges": [[1], [1]]}}, "/git/omega"),
        ({"name": "x", "git": {"charges": [[1], [1.5]], "omega": [1]}}, "/git/charges/1/0"),
        ({"name": "x", "git": {"charges": [[1], [1]], "omega": [1, 2]}}, "/git/omega"),
        ({"name": "x", "git": {"charges": [[1], [1]], "omega": ["a"]}}, "/git/omega/0"),
        ({"name": "x", "fan": {"rays": [[1], [-1]], "max_cones": [[0], [5]]}}, "/fan/max_cones/1/0"),
        ({"name": "x", "git": {"charges": [[1], [1]], "omega": [1]}, "defaults": {"bound": -1}},
         "/defaults/bound"),
        ({"name": "x", "git": {"charges": [[1], [1]], "omega": [1]}, "extra": 1}, "/extra"),
    ])
    def test_schema_paths(self, doc, path):
        assert schema_path(doc) == path

    def test_not_json(self):
        assert schema_path("{") == ""
        assert schema_path(b"\xff\xfe") == ""

    def test_zero_omega(self):
        with pytest.raises(GeometryError) as exc:
            parse_model(json.dumps({"name": "x", "git": {"charges": [[1], [1], [1]], "omega": [0]}}))
        assert exc.value.kind == "UnstableCharges"
        assert "(b)" in str(exc.value)
        assert exc.value.path == "/git/omega"

    def test_bad_fan(self):
        with pytest.raises(GeometryError) as exc:
            parse_model(json.dumps({"name": "x", "fan": {"rays": [[1, 0], [1, 2], [-1, -1]],
                                                       "max_cones": [[0, 1], [1, 2], [0, 2]]}}))
        assert exc.value.kind == "NotSmooth" and exc.value.path == "/fan"

    def test_unknown_fixture(self):
        with pytest.raises(KeyError):
            load_fixture("p3")


class TestEncoding:
    def test_values(self):
        assert encode(Fraction(-3, 4)) == "-3/4"
        assert encode(Fraction(2)) == "2"
        assert encode(0.1) == "0.10000000000000001"
        assert encode(1 + 2j) == {"re": "1", "im": "2"}
        assert encode((1, True, None)) == [1, True, None]


def report(argv):
    status, text = run(argv)
    return status, json.loads(text), text


class TestCommands:
    def test_check_p2(self, model_path):
        status, rep, _ = report(["check", "--model", model_path("p2")])
        assert status == 0 and "error" not in rep
        r = rep["result"]
        assert r["weak_fano"] is True and r["fano"] is True
        assert r["rank"] == {"volume": 3, "betti_sum": 3, "equal": True}
        assert rep["model"] == "p2" and rep["version"] == __version__ and rep["command"] == "check"

    def test_echo(self, model_path):
        path = model_path("p1")
        _, rep, _ = report(["mellin", "--model", path, "--q", "0.25", "--terms", "10"])
        assert rep["args"]["model"] == path and rep["args"]["terms"] == 10

    def test_mellin_f2(self, model_path):
        status, rep, _ = report(["mellin", "--model", model_path("f2"), "--q", "0.1"])
        assert status == 1
        assert rep["error"]["kind"] == "NotRankOne"
        assert "result" not in rep

    def test_asymptotics_p1(self, model_path, tmp_path):
        out = tmp_path / "t.csv"
        status, rep, _ = report(["asymptotics", "--model", model_path("p1"), "--z", "1",
                                 "--q-start", "1e-2", "--q-ratio", "0.1", "--steps", "3",
                                 "--csv", str(out)])
        assert status == 0
        rows = rep["result"]["rows"]
        errs = [float(r["abs_err"]) for r in rows]
        assert len(rows) == 3 and errs[0] > errs[1] > errs[2]
        assert rep["result"]["decreasing"] is True
        with open(out, newline="") as fh:
            table = list(csv.DictReader(fh))
        assert len(table) == 3
        for r, c in zip(rows, table):
            assert [c["q"], c["numeric"], c["gamma_value"], c["abs_err"]] == [
                r["q"][0], r["numeric"], r["gamma_value"], r["abs_err"]]

    def test_csv_header_rank_two(self):
        text = csv_text([{"q": [0.1, 0.2], "numeric": 1.0, "gamma_value": 1.5, "abs_err": 0.5}], 2)
        assert next(csv.reader(io.StringIO(text))) == ["q1", "q2", "numeric", "gamma_value", "abs_err"]

    def test_gkz_verify(self, model_path):
        _, rep, _ = report(["gkz-verify", "--model", model_path("f2"), "--bound", "4"])
        assert rep["result"]["all_zero"] is True
        assert {o["residual"] for o in rep["result"]["operators"]} == {"zero"}

    def test_ifunction_rationals(self, model_path):
        _, rep, _ = report(["ifunction", "--model", model_path("p2"), "--bound", "1"])
        t = rep["result"]["terms"][1]
        assert t["d"] == [1]
        assert {"e": -5, "coeffs": ["0", "0", "6"]} in t["z_powers"]

    def test_mirror_map_f2(self, model_path):
        _, rep, _ = report(["mirror-map", "--model", model_path("f2"), "--bound", "2"])
        assert rep["result"]["trivial"] is False

    def test_central_charge(self, model_path):
        _, rep, _ = report(["central-charge", "--model", model_path("p2"), "--q", "0.05"])
        assert abs(float(rep["result"]["value"]["im"])) < 1e-10

    def test_bad_bundle(self, model_path):
        status, rep, _ = report(["central-charge", "--model", model_path("p1xp1"), "--q", "0.1,0.1",
                                 "--bundle", "1:2:3"])
        assert status == 1 and rep["error"]["kind"] == "DomainError"
        _, rep, _ = report(["central-charge", "--model", model_path("p1xp1"), "--q", "0.1,0.1",
                            "--bundle", "1:0,0:1", "--bound", "6"])
        assert rep["result"]["bundle"] == [[1, 0], [0, 1]]

    def test_missing_file(self, tmp_path):
        status, rep, _ = report(["check", "--model", str(tmp_path / "none.json")])
        assert status == 1 and rep["error"]["kind"] == "IOError"

    def test_schema_error_report(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text(json.dumps({"name": "x", "git": {"charges": [[1], [1], [1]], "omega": [0]}}))
        status, rep, _ = report(["check", "--model", str(p)])
        assert status == 1
        assert rep["error"]["kind"] == "UnstableCharges"
        assert rep["error"]["category"] == "GeometryError"
        assert rep["error"]["path"] == "/git/omega"

    def test_main_exit_status(self, model_path, capsys):
        assert main(["gamma", "--model", model_path("p1")]) == 0
        assert json.loads(capsys.readouterr().out)["command"] == "gamma"
        assert main(["mellin", "--model", model_path("f2"), "--q", "0.1"]) == 1


COMMANDS = [
    ["check"], ["ifunction", "--bound", "3"], ["gkz-verify", "--bound", "3"],
    ["mirror-map", "--bound", "3"], ["gamma"],
    ["oscillatory", "--q", "0.1", "--tol", "1e-8"], ["mellin", "--q", "0.1", "--terms", "10"],
]


@pytest.mark.parametrize("cmd", COMMANDS, ids=lambda c: c[0])
def test_deterministic(cmd, fixture_name, model_path):
    path = model_path(fixture_name)
    argv = [cmd[0], "--model", path, *cmd[1:]]
    if cmd[0] == "oscillatory" and model(fixture_name).git.k == 2:
        argv[-3] = "0.1,0.1"
    a, b = run(argv), run(argv)
    assert a == b
    status, text = a
    rep = json.loads(text)
    assert (status == 0) == ("error" not in rep)
    assert text == json.dumps(rep, sort_keys=True, indent=2) + "\n"
