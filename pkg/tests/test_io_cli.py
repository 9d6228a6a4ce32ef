import json

import numpy as np
import pytest

import fermicon as fc
from fermicon import io
from fermicon.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out


@pytest.fixture
def fghz_file(tmp_path):
    path = tmp_path / "fghz.json"
    path.write_text(io.state_to_text(fc.fghz_state()))
    return str(path)


class TestStateFiles:
    def test_roundtrip(self):
        s = fc.random_state(fc.SystemShape(6, 3), seed=1)
        back = io.parse_state_text(io.state_to_text(s))
        np.testing.assert_allclose(back.amplitudes, s.amplitudes, atol=1e-15)

    def test_serialization_is_canonical(self):
        s = fc.random_state(fc.SystemShape(5, 2), seed=2)
        text = io.state_to_text(s)
        assert io.state_to_text(io.parse_state_text(text)) == text

    def test_sparse_zeros_omitted(self):
        text = io.state_to_text(fc.slater_state(fc.SystemShape(6, 3), [1, 2, 3]))
        doc = json.loads(text)
        assert doc["format"] == "occupation-v1"
        assert len(doc["amplitudes"]) == 1
        assert doc["amplitudes"][0]["modes"] == [1, 2, 3]

    def test_rejects_bad_format_tag(self):
        with pytest.raises(fc.StateFileError):
            io.parse_state_text('{"format": "other", "d": 4, "n": 2, "amplitudes": []}')

    def test_rejects_descending_modes(self):
        doc = {
            "format": "occupation-v1", "d": 4, "n": 2,
            "amplitudes": [{"modes": [2, 1], "re": 1.0, "im": 0.0}],
        }
        with pytest.raises(fc.StateFileError):
            io.parse_state_text(json.dumps(doc))

    def test_rejects_duplicate_tuples(self):
        doc = {
            "format": "occupation-v1", "d": 4, "n": 2,
            "amplitudes": [
                {"modes": [1, 2], "re": 0.8, "im": 0.0},
                {"modes": [1, 2], "re": 0.6, "im": 0.0},
            ],
        }
        with pytest.raises(fc.StateFileError):
            io.parse_state_text(json.dumps(doc))

    def test_norm_bands(self):
        def doc_with_norm(r):
            return json.dumps({
                "format": "occupation-v1", "d": 4, "n": 2,
                "amplitudes": [{"modes": [1, 2], "re": r, "im": 0.0}],
            })

        io.parse_state_text(doc_with_norm(1.0 + 5e-7))  # rounding, accepted
        with pytest.raises(fc.StateFileError):
            io.parse_state_text(doc_with_norm(1.001))
        s = io.parse_state_text(doc_with_norm(1.001), renormalize=True)
        assert np.linalg.norm(s.amplitudes) == pytest.approx(1.0, abs=1e-15)
        with pytest.raises(fc.StateFileError):
            io.parse_state_text(doc_with_norm(0.8), renormalize=True)


class TestGen:
    def test_fghz(self, capsys):
        code, out = run(capsys, "gen", "fghz")
        assert code == 0
        s = io.parse_state_text(out)
        assert (s.shape.d, s.shape.n) == (6, 3)
        assert s.amplitude((1, 2, 3)) == pytest.approx(1 / np.sqrt(2))

    def test_slater(self, capsys):
        code, out = run(capsys, "gen", "slater", "--d", "4", "--modes", "1,2")
        assert code == 0
        assert len(json.loads(out)["amplitudes"]) == 1

    def test_random_deterministic(self, capsys):
        _, out1 = run(capsys, "gen", "random", "--d", "6", "--n", "3", "--seed", "7")
        _, out2 = run(capsys, "gen", "random", "--d", "6", "--n", "3", "--seed", "7")
        assert out1 == out2

    def test_bad_shape_exit_code(self, capsys):
        code, _ = run(capsys, "gen", "random", "--d", "3", "--n", "4")
        assert code == 2

    def test_missing_args_exit_code(self, capsys):
        code, _ = run(capsys, "gen", "slater", "--d", "4")
        assert code == 2


class TestConcurrenceCommand:
    def test_fghz_value(self, capsys, fghz_file):
        code, out = run(capsys, "concurrence", fghz_file)
        assert code == 0
        doc = json.loads(out)
        assert doc["results"]["value"] == pytest.approx(1.0, abs=1e-10)
        assert doc["shape"] == {"d": 6, "n": 3}
        assert doc["command"][0] == "concurrence"

    def test_slater_value(self, capsys, tmp_path):
        path = tmp_path / "s.json"
        path.write_text(io.state_to_text(fc.slater_state(fc.SystemShape(6, 3), [1, 2, 3])))
        code, out = run(capsys, "concurrence", str(path))
        assert code == 0
        assert json.loads(out)["results"]["value"] == 0.0

    def test_pair_state_cross_checks(self, capsys, tmp_path):
        shape = fc.SystemShape(4, 2)
        a = fc.slater_state(shape, [1, 2]).amplitudes
        b = fc.slater_state(shape, [3, 4]).amplitudes
        path = tmp_path / "pair.json"
        path.write_text(io.state_to_text(fc.FermionState(shape, (a + b) / np.sqrt(2))))
        code, out = run(capsys, "concurrence", str(path))
        doc = json.loads(out)["results"]
        assert doc["value"] == pytest.approx(1.0, abs=1e-10)
        assert doc["c_ff_purity"] == pytest.approx(1.0, abs=1e-10)
        assert doc["c_ff_wedge"] == pytest.approx(1.0, abs=1e-10)
        assert doc["slater_rank"] == 2

    def test_corrupt_file_exit_code(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"format": "occupation-v1", "d": 4, "n": 2, '
                        '"amplitudes": [{"modes": [1, 2], "re": 0.8, "im": 0.0}]}')
        code, _ = run(capsys, "concurrence", str(path))
        assert code == 2


class TestTwocopyCommand:
    @pytest.mark.parametrize(
        "observable,value", [("af", 1.0), ("afprime", 1.0), ("a", 2.5), ("atilde", 2.5)]
    )
    def test_fghz_observables(self, capsys, fghz_file, observable, value):
        code, out = run(capsys, "twocopy", fghz_file, "--observable", observable)
        assert code == 0
        doc = json.loads(out)["results"]
        assert doc["expectation"] == pytest.approx(value, abs=1e-9)
        if observable in ("af", "afprime"):
            assert doc["difference"] <= 1e-9

    def test_purity_observable(self, capsys, fghz_file):
        code, out = run(capsys, "twocopy", fghz_file, "--observable", "onm", "--m", "1")
        assert code == 0
        assert json.loads(out)["results"]["expectation"] == pytest.approx(
            1.0 / 6.0, abs=1e-10
        )

    def test_degenerate_shape_exit_code(self, capsys, tmp_path):
        path = tmp_path / "deg.json"
        path.write_text(io.state_to_text(fc.slater_state(fc.SystemShape(3, 3), [1, 2, 3])))
        code, _ = run(capsys, "twocopy", str(path), "--observable", "af")
        assert code == 3


class TestVerifyCommand:
    def test_campaign_passes(self, capsys):
        code, out = run(
            capsys, "verify", "--campaign", "3,6", "--trials", "50", "--seed", "1"
        )
        assert code == 0
        assert json.loads(out)["results"]["passed"] is True

    def test_state_file_mode(self, capsys, fghz_file):
        code, out = run(capsys, "verify", fghz_file)
        assert code == 0
        assert json.loads(out)["results"]["passed"] is True

    def test_corrupt_norm_exit_code(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"format": "occupation-v1", "d": 6, "n": 3, '
                        '"amplitudes": [{"modes": [1, 2, 3], "re": 0.8, "im": 0.0}]}')
        code, _ = run(capsys, "verify", str(path))
        assert code == 2

    def test_missing_input_exit_code(self, capsys):
        code, _ = run(capsys, "verify")
        assert code == 2


class TestSensitivityCommand:
    def test_report_with_slope(self, capsys, fghz_file):
        code, out = run(
            capsys, "sensitivity", fghz_file, "--points", "5", "--seed", "3"
        )
        assert code == 0
        doc = json.loads(out)["results"]
        assert 1.7 <= doc["slope"] <= 2.3
        assert len(doc["records"]) == 5

    def test_csv_deterministic(self, capsys, fghz_file):
        args = ["sensitivity", fghz_file, "--points", "4", "--seed", "5",
                "--format", "csv"]
        code1, out1 = run(capsys, *args)
        code2, out2 = run(capsys, *args)
        assert code1 == code2 == 0
        assert out1 == out2
        assert out1.splitlines()[0] == "epsilon,c_exp,c_mean,gap"

    def test_bad_epsilon_range(self, capsys, fghz_file):
        code, _ = run(capsys, "sensitivity", fghz_file, "--eps-max", "0.9")
        assert code == 2


class TestReportReplay:
    def test_concurrence_report_bytes_stable(self, capsys, fghz_file):
        argv = ["concurrence", fghz_file]
        _, out1 = run(capsys, *argv)
        _, out2 = run(capsys, *argv)
        assert out1 == out2

    def test_report_embeds_invocation_and_tolerances(self, capsys, fghz_file):
        argv = ["verify", "--campaign", "2,4", "--trials", "10", "--seed", "4"]
        _, out = run(capsys, *argv)
        doc = json.loads(out)
        assert doc["command"] == argv
        assert doc["seed"] == 4
        assert "separability" in doc["tolerances"]
