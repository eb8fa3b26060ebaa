import io
import json

import numpy as np
import pytest

from hosmdesign.cli import main
from hosmdesign.scenario import BUNDLED, ScenarioError, load_scenario, parse_scenario
from hosmdesign.systems import PENDULUM_A, PENDULUM_B


def run(argv):
    buf = io.StringIO()
    code = main(argv, out=buf)
    return code, buf.getvalue()


def write(tmp_path, doc, name="sc.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def chain3_doc(**design):
    return {
        "name": "chain",
        "system": {"A": [[0, 1, 0], [0, 0, 1], [0, 0, 0]], "B": [0, 0, 1]},
        "design": design or {"gamma": [1, 1]},
        "simulation": {"t_end": 1.0},
    }


def field(text, key):
    for line in text.splitlines():
        if line.startswith(key):
            return line[len(key):].strip()
    raise KeyError(key)


def parse_vec(s):
    return np.array([float(v) for v in s.strip("[]").split(",")])


class TestScenarioParsing:
    @pytest.mark.parametrize("name", BUNDLED)
    def test_bundled_load(self, name):
        sc = load_scenario(name)
        assert sc.name == name and sc.sweep_grid is not None

    @pytest.mark.parametrize(
        "mutate, path",
        [
            (lambda d: d.pop("system"), "system"),
            (lambda d: d["system"].update(B=[0, 1]), "system.B"),
            (lambda d: d["system"]["A"][1].append(0), "system.A[1]"),
            (lambda d: d["design"].update(zeros=[-1]), "design"),
            (lambda d: d["design"].update(gamma=[1, 2]), "design.gamma"),
            (lambda d: d["design"].update(gamma=[1, 2, 3, 1]), "design"),
            (lambda d: d.update(controller={"law": "bang"}), "controller.law"),
            (lambda d: d.update(controller={"law": "twisting", "k0": 1, "k1": 2}), "controller"),
            (lambda d: d["simulation"].update(tau="fast"), "simulation.tau"),
            (lambda d: d["simulation"].update(tau=0.5), "simulation"),
            (lambda d: d.update(sweep={"grid": [1e-3, 1e-2]}), "sweep.grid"),
            (lambda d: d.update(sweep={"grid": [1e-3, 0, 1e-2]}), "sweep.grid[1]"),
            (lambda d: d.update(sweep={"parameter": "gain"}), "sweep.parameter"),
            (lambda d: d.update(extra=1), "$.extra"),
        ],
    )
    def test_validation_names_field(self, mutate, path):
        doc = chain3_doc()
        mutate(doc)
        with pytest.raises(ScenarioError) as info:
            parse_scenario(doc)
        assert info.value.path == path

    def test_complex_zeros(self):
        sc = parse_scenario(chain3_doc(zeros=[[-1, 2], [-1, -2]]))
        assert sc.gamma.coeffs == (5.0, 2.0, 1.0)

    def test_unpaired_complex_zero(self):
        with pytest.raises(ScenarioError):
            parse_scenario(chain3_doc(zeros=[[-1, 2]]))

    def test_default_controller_and_x0(self):
        sc = parse_scenario(chain3_doc())
        assert sc.controller["law"] == "quasi_continuous" and sc.controller["order"] == 2
        assert sc.simulation.x0 == (1.0, 1.0, 1.0)


class TestDesignVerify:
    @pytest.mark.parametrize("r", [1, 2, 3])
    def test_bundled_pendulum(self, r):
        code, out = run(["verify", f"pendulum_r{r}", "--digits", "17"])
        assert code == 0
        assert field(out, "relative degree:") == str(r)
        assert float(field(out, "mismatch vs gamma:")) < 1e-6
        assert out.rstrip().endswith("\nminimum phase")

    def test_design_output(self):
        code, out = run(["design", "chain3_r1"])
        assert code == 0
        np.testing.assert_allclose(parse_vec(field(out, "C =")), [1, 2, 1], atol=1e-10)
        assert field(out, "relative degree:") == "1"

    def test_digits(self):
        _, out = run(["design", "pendulum_r1", "--digits", "4"])
        assert field(out, "C =") == "[-3.184, -1.911, -4.545, -0.7169]"

    def test_unstable_zero(self, tmp_path):
        path = write(tmp_path, chain3_doc(zeros=[1, -2]))
        code, out = run(["verify", path])
        assert code == 0
        assert "NOT minimum phase" in out

    def test_relative_degree_n_note(self, tmp_path):
        path = write(tmp_path, chain3_doc(gamma=[1]))
        code, out = run(["verify", path])
        assert code == 0
        assert field(out, "relative degree:") == "3"
        assert "note: relative degree equals n" in out

    def test_explicit_c_round_trip(self, tmp_path):
        _, out = run(["design", "pendulum_r2"])
        C = parse_vec(field(out, "C =")).tolist()
        doc = {
            "system": {"A": [list(r) for r in PENDULUM_A], "B": list(PENDULUM_B)},
            "design": {"gamma": [25, 10, 1], "C": C},
        }
        code, out = run(["verify", write(tmp_path, doc)])
        assert code == 0
        assert float(field(out, "mismatch vs gamma:")) < 1e-9

    def test_explicit_c_without_relative_degree(self, tmp_path):
        doc = chain3_doc(gamma=[1, 1], C=[0, 0, 0])
        code, out = run(["verify", write(tmp_path, doc)])
        assert code == 0
        assert field(out, "relative degree:") == "undefined"

    def test_uncontrollable_is_numerical_failure(self, tmp_path):
        doc = chain3_doc()
        doc["system"]["B"] = [1, 0, 0]
        code, _ = run(["design", write(tmp_path, doc)])
        assert code == 2


class TestSimulate:
    def test_writes_artifacts(self, tmp_path):
        code, out = run(["simulate", "pendulum_r1", "--out", str(tmp_path)])
        assert code == 0
        csv = tmp_path / "pendulum_r1_trajectory.csv"
        assert csv.read_text().splitlines()[0] == "t,x1,x2,x3,x4,u,w,sigma0"
        assert (tmp_path / "pendulum_r1_simulate_report.txt").read_text() == out
        assert float(field(out, "|x(t_end)| =")) < 0.1

    def test_zero_state(self, tmp_path):
        doc = chain3_doc()
        doc["simulation"].update(x0=[0, 0, 0], amplitude=0)
        code, _ = run(["simulate", write(tmp_path, doc), "--out", str(tmp_path)])
        assert code == 0
        data = np.loadtxt(tmp_path / "chain_trajectory.csv", delimiter=",", skiprows=1)
        assert np.all(data[:, 1:] == 0.0)

    def test_byte_identical_reruns(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        run(["simulate", "pendulum_r3", "--out", str(a)])
        run(["simulate", "pendulum_r3", "--out", str(b)])
        name = "pendulum_r3_trajectory.csv"
        assert (a / name).read_bytes() == (b / name).read_bytes()


class TestSweep:
    def test_self_test(self, tmp_path):
        code, out = run(["sweep", "--self-test", "--out", str(tmp_path)])
        assert code == 0 and "self-test passed" in out
        assert (tmp_path / "self_test_sweep.csv").exists()

    def test_small_sweep(self, tmp_path):
        doc = chain3_doc()
        doc["simulation"].update(t_end=2.0)
        doc["sweep"] = {"grid": [2e-3, 4e-3, 8e-3]}
        code, out = run(["sweep", write(tmp_path, doc), "--out", str(tmp_path)])
        assert code == 0
        lines = (tmp_path / "chain_sweep_sampling_period.csv").read_text().splitlines()
        assert lines[0] == "parameter,error_i0,error_i1"
        assert "i,slope,intercept,residual" in out

    @pytest.mark.parametrize("grid", [[], [1e-3, 1e-2]])
    def test_short_grid(self, tmp_path, grid, capsys):
        doc = chain3_doc()
        doc["sweep"] = {"grid": grid}
        code, _ = run(["sweep", write(tmp_path, doc)])
        assert code == 1
        assert "sweep.grid" in capsys.readouterr().err


class TestErrors:
    def test_malformed_json(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        assert run(["design", str(path)])[0] == 1
        assert "invalid JSON" in capsys.readouterr().err

    def test_missing_file(self, tmp_path):
        assert run(["design", str(tmp_path / "nope.json")])[0] == 1

    def test_missing_scenario(self):
        assert run(["design"])[0] == 1

    def test_bad_digits(self):
        assert run(["design", "pendulum_r1", "--digits", "0"])[0] == 1
