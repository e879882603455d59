import json

import numpy as np
import pytest
from numpy.testing import assert_allclose

from masklab import build_s_fn, counterexample_states, random_density, random_pure, verify_masking_pure
from masklab import io
from masklab.cli import main
from masklab.demos import DEMOS
from masklab.verify import membership_q_r

KET0, KET1 = np.eye(2, dtype=complex)


def write_states(path, kind, states, d):
    io.write_json(path, io.state_file_payload(kind, states, d))
    return str(path)


def run(*argv):
    return main([str(a) for a in argv])


class TestEncoding:
    def test_array_round_trip_is_exact(self):
        m = random_density(3, seed=1) * np.exp(0.3j)
        back = io.decode_array(json.loads(json.dumps(io.encode_array(m))), ndim=2)
        assert np.array_equal(back, m)

    def test_bad_arrays(self):
        with pytest.raises(io.InputError):
            io.decode_array([[1, 2, 3]])
        with pytest.raises(io.InputError):
            io.decode_array("abc")
        with pytest.raises(io.InputError):
            io.decode_array([[1, 0], [0, 1]], ndim=2)

    def test_masker_round_trip(self, tmp_path):
        s = build_s_fn(n=3)
        io.write_json(tmp_path / "m.json", io.masker_file_payload(s))
        back = io.load_masker(tmp_path / "m.json")
        assert np.array_equal(back.matrix, s.matrix)
        assert back.kind == "Sfn" and np.array_equal(back.basis_a, s.basis_a)

    def test_report_round_trip(self, tmp_path):
        s = build_s_fn(n=2)
        rep = verify_masking_pure(s, [KET0, KET1])
        io.write_json(tmp_path / "r.json", io.report_payload(rep, s))
        back = io.load_report(tmp_path / "r.json")
        assert back["verdict"] == "Masked"
        assert np.array_equal(back["reference_marginal_a"], rep.reference_marginal_a)
        assert back["per_state_deviations"] == rep.per_state_deviations


class TestStateFiles:
    def test_pure_round_trip(self, tmp_path):
        states = [random_pure(3, k) for k in range(3)]
        kind, d_a, _, back = io.load_state_file(write_states(tmp_path / "s.json", "pure", states, 3))
        assert kind == "pure" and d_a == 3
        for a, b in zip(states, back):
            assert_allclose(a, b, rtol=0, atol=1e-15)

    def test_small_norm_error_fixed(self, tmp_path, caplog):
        psi = np.array([1 + 5e-10, 0])
        _, _, _, back = io.load_state_file(write_states(tmp_path / "s.json", "pure", [psi], 2))
        assert abs(np.linalg.norm(back[0]) - 1) < 1e-15
        assert "renormalized" in caplog.text

    def test_large_norm_error_rejected(self, tmp_path):
        path = write_states(tmp_path / "s.json", "pure", [np.array([1.01, 0])], 2)
        with pytest.raises(io.InputError):
            io.load_state_file(path)

    def test_mixed_validation(self, tmp_path):
        path = write_states(tmp_path / "s.json", "mixed", [np.diag([1.5, -0.5])], 2)
        with pytest.raises(io.InputError):
            io.load_state_file(path)

    def test_dimension_mismatch(self, tmp_path):
        path = write_states(tmp_path / "s.json", "pure", [random_pure(3, 0)], 2)
        with pytest.raises(io.InputError):
            io.load_state_file(path)


class TestBuild:
    def test_sharp_d2(self, tmp_path):
        out = tmp_path / "m.json"
        assert run("build", "sharp", "--d", 2, "--out", out) == 0
        m = io.decode_array(json.loads(out.read_text())["masker"]["matrix"], 2)
        assert m.shape == (4, 2)
        assert_allclose(m[:, 0], np.kron(KET0, KET0))
        assert_allclose(m[:, 1], np.kron(KET1, KET1))

    def test_sfn_d3_isometry_on_reload(self, tmp_path):
        out = tmp_path / "m.json"
        assert run("build", "sfn", "--d", 3, "--out", out) == 0
        m = io.load_masker(out).matrix
        assert np.max(np.abs(m.conj().T @ m - np.eye(3))) < 1e-12

    def test_multiparty_cap(self, tmp_path):
        assert run("build", "multiparty", "--d", 4, "--out", tmp_path / "m.json") == 2

    def test_injection(self, tmp_path):
        states = [KET0, (KET0 + KET1) / np.sqrt(2)]
        sfile = write_states(tmp_path / "s.json", "pure", states, 2)
        out = tmp_path / "m.json"
        assert run("build", "injection", "--states", sfile, "--out", out) == 0
        assert run("verify", "--masker", out, "--states", sfile, "--out", tmp_path / "r.json") == 0

    def test_seeded_bases_recorded(self, tmp_path):
        out = tmp_path / "m.json"
        assert run("build", "diamond", "--d", 3, "--seed", 7, "--out", out) == 0
        s = io.load_masker(out)
        assert s.params["seed"] == 7 and s.is_isometry

    @pytest.mark.parametrize("args", [["sfn"], ["sfn", "--d", "0"], ["remark24", "--d", "3"],
                                      ["injection"]])
    def test_usage_errors(self, tmp_path, args):
        assert run("build", *args, "--out", tmp_path / "m.json") == 2

    def test_unwritable_output(self, tmp_path):
        assert run("build", "sharp", "--d", 2, "--out", tmp_path / "no" / "m.json") == 3


class TestVerify:
    @pytest.fixture
    def sfn2(self, tmp_path):
        out = tmp_path / "m.json"
        assert run("build", "sfn", "--d", 2, "--out", out) == 0
        return out

    def test_basis_masked(self, tmp_path, sfn2, capsys):
        sfile = write_states(tmp_path / "s.json", "pure", [KET0, KET1], 2)
        out = tmp_path / "r.json"
        assert run("verify", "--masker", sfn2, "--states", sfile, "--out", out) == 0
        rep = io.load_report(out)
        assert_allclose(rep["reference_marginal_a"], np.eye(2) / 2, atol=1e-14)
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 1 and lines[0].startswith("Masked")

    def test_counterexample_not_masked(self, tmp_path, sfn2):
        sfile = write_states(tmp_path / "s.json", "pure", counterexample_states(KET0, KET1), 2)
        assert run("verify", "--masker", sfn2, "--states", sfile, "--out", tmp_path / "r.json") == 1

    def test_mixed_states(self, tmp_path):
        out = tmp_path / "m.json"
        run("build", "diamond", "--d", 2, "--out", out)
        sfile = write_states(tmp_path / "s.json", "mixed", [np.diag([0.3, 0.7]), np.eye(2) / 2], 2)
        assert run("verify", "--masker", out, "--states", sfile, "--out", tmp_path / "r.json") == 0

    def test_truncated_json(self, tmp_path, sfn2):
        sfile = tmp_path / "s.json"
        write_states(sfile, "pure", [KET0], 2)
        sfile.write_text(sfile.read_text()[:20])
        assert run("verify", "--masker", sfn2, "--states", sfile, "--out", tmp_path / "r.json") == 2

    def test_dimension_mismatch(self, tmp_path, sfn2):
        sfile = write_states(tmp_path / "s.json", "pure", [random_pure(3, 0)], 3)
        assert run("verify", "--masker", sfn2, "--states", sfile, "--out", tmp_path / "r.json") == 2

    def test_missing_file(self, tmp_path, sfn2):
        assert run("verify", "--masker", sfn2, "--states", tmp_path / "nope.json",
                   "--out", tmp_path / "r.json") == 3

    def test_round_trip_matches_library(self, tmp_path, sfn2):
        s = io.load_masker(sfn2)
        states = list(s.basis_a.T)
        sfile = write_states(tmp_path / "s.json", "pure", states, 2)
        out = tmp_path / "r.json"
        code = run("verify", "--masker", sfn2, "--states", sfile, "--out", out)
        lib = verify_masking_pure(s, states)
        rep = io.load_report(out)
        assert code == 0 and rep["verdict"] == lib.verdict.value
        assert rep["max_deviation"] == lib.max_deviation


class TestDemo:
    @pytest.mark.parametrize("name", sorted(DEMOS))
    def test_every_demo_passes(self, tmp_path, name):
        out = tmp_path / "d.json"
        assert run("demo", name, "--out", out) == 0
        data = json.loads(out.read_text())
        assert data["passed"] and all(a["result"] == "PASS" for a in data["assertions"])

    def test_unknown(self, tmp_path):
        assert run("demo", "unknown", "--out", tmp_path / "d.json") == 2


class TestSample:
    def test_q_r(self, tmp_path):
        out = tmp_path / "s.json"
        assert run("sample", "q_r", "--params", 0.6, 0.8, "--count", 10, "--out", out) == 0
        kind, _, _, states = io.load_state_file(out)
        assert kind == "pure" and len(states) == 10
        assert all(membership_q_r(s, [0.6, 0.8]) for s in states)

    def test_q_p(self, tmp_path):
        out = tmp_path / "s.json"
        assert run("sample", "q_p", "--params", 0.5, 0.5, "--count", 5, "--out", out) == 0
        kind, _, _, states = io.load_state_file(out)
        assert kind == "mixed" and len(states) == 5
        for rho in states:
            assert_allclose(np.diag(rho).real, [0.5, 0.5], atol=1e-12)

    def test_q_q(self, tmp_path):
        assert run("sample", "q_q", "--params", 0.2, 0.8, "--out", tmp_path / "s.json") == 0

    def test_bad_vector(self, tmp_path):
        assert run("sample", "q_p", "--params", 0.9, 0.3, "--out", tmp_path / "s.json") == 2

    def test_bad_count(self, tmp_path):
        assert run("sample", "q_p", "--params", 1, "--count", 0, "--out", tmp_path / "s.json") == 2


class TestDeterminism:
    @pytest.mark.parametrize("argv", [
        ["sample", "q_q", "--params", "0.1", "0.2", "0.7", "--count", "4", "--seed", "11"],
        ["build", "sharp", "--d", "3", "--seed", "5"],
        ["demo", "thm33", "--seed", "2"],
    ])
    def test_byte_identical(self, tmp_path, argv):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        assert run(*argv, "--out", a) == 0
        assert run(*argv, "--out", b) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_no_temp_files_left(self, tmp_path):
        run("build", "sharp", "--d", 2, "--out", tmp_path / "m.json")
        assert [p.name for p in tmp_path.iterdir()] == ["m.json"]


def test_argparse_usage_exit_code(tmp_path):
    with pytest.raises(SystemExit) as exc:
        run("build", "bogus", "--out", tmp_path / "m.json")
    assert exc.value.code == 2
