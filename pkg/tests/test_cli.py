import numpy as np
import pytest

from ncwigner.cli import main, read_field_file


def run(argv, capsys=None):
    code = main(argv)
    return code


def load_csv(path):
    rows = np.loadtxt(path, delimiter=",")
    return rows[:, 2] + 1j * rows[:, 3]


class TestWignerCommand:
    def test_qm_slice_smoke(self, tmp_path):
        out = tmp_path / "w.csv"
        code = main(["wigner", "qm", "--k1", "1", "--alpha", "1",
                     "--state", "gaussian:0,0", "--grid", "128", "--extent", "10",
                     "--slice", "k3s=0,k4s=0", "--out", str(out)])
        assert code == 0
        data = [ln for ln in out.read_text().splitlines() if not ln.startswith("#")]
        assert len(data) == 128 * 128

    def test_degenerate_label_exit_3(self, tmp_path, capsys):
        code = main(["wigner", "generic", "--k1", "1", "--k2", "1", "--k3", "1",
                     "--state", "gaussian:0,0", "--grid", "8", "--extent", "2",
                     "--slice", "k3s=0,k4s=0", "--out", str(tmp_path / "x.csv")])
        assert code == 3
        assert "degenerate" in capsys.readouterr().err

    def test_sector_mismatch_exit_3(self, tmp_path, capsys):
        code = main(["wigner", "tau0", "--k1", "1",
                     "--state", "gaussian:0,0", "--grid", "8", "--extent", "2",
                     "--slice", "k3s=0,k4s=0", "--out", str(tmp_path / "x.csv")])
        assert code == 3
        assert "tau_zero" in capsys.readouterr().err

    def test_methods_agree(self, tmp_path):
        base = ["wigner", "nc", "--k1", "1", "--k2", "-1", "--k3", "1",
                "--state", "gaussian:0,0", "--grid", "24", "--extent", "2.5",
                "--slice", "p1nc=0,p2nc=0"]
        d = tmp_path / "d.csv"
        f = tmp_path / "f.csv"
        assert main(base + ["--method", "direct", "--out", str(d)]) == 0
        assert main(base + ["--method", "fft", "--out", str(f)]) == 0
        vd, vf = load_csv(d), load_csv(f)
        assert np.max(np.abs(vd - vf)) <= 1e-10 * np.max(np.abs(vd))

    def test_field_file_round_trip_as_state(self, tmp_path):
        out = tmp_path / "w.csv"
        assert main(["wigner", "standard", "--state", "gaussian:0,0",
                     "--state-grid", "64", "--state-extent", "8",
                     "--grid", "8", "--extent", "2",
                     "--slice", "q2=0,p2=0", "--out", str(out)]) == 0
        f = read_field_file(str(out))
        assert f.grid.axis0.n == 8
        # 17-digit serialisation is lossless
        w2 = tmp_path / "w2.csv"
        assert main(["wigner", "standard", "--state", "gaussian:0,0",
                     "--state-grid", "64", "--state-extent", "8",
                     "--grid", "8", "--extent", "2",
                     "--slice", "q2=0,p2=0", "--out", str(w2)]) == 0
        assert out.read_text() == w2.read_text()

    def test_formats(self, tmp_path):
        import json

        for fmt, name in (("gnuplot", "g.dat"), ("json", "j.json")):
            out = tmp_path / name
            assert main(["wigner", "nc", "--k1", "1", "--k2", "-1", "--k3", "1",
                         "--state", "gaussian:0,0", "--grid", "8", "--extent", "2",
                         "--slice", "p1nc=0,p2nc=0", "--format", fmt,
                         "--out", str(out)]) == 0
        doc = json.loads((tmp_path / "j.json").read_text())
        assert len(doc["re"]) == 64
        gn = (tmp_path / "g.dat").read_text().splitlines()
        blanks = sum(1 for ln in gn if ln == "")
        assert blanks == 8  # one separator per axis0 block

    def test_bad_state_spec_exit_2(self, tmp_path, capsys):
        code = main(["wigner", "qm", "--k1", "1", "--state", "nonsense:1",
                     "--grid", "8", "--extent", "2", "--slice", "k3s=0,k4s=0",
                     "--out", str(tmp_path / "x.csv")])
        assert code == 2
        assert "--state" in capsys.readouterr().err

    def test_argparse_error_exit_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["wigner", "qm", "--grid", "not-a-number", "--out", "x.csv"])
        assert exc.value.code == 2
        assert "--grid" in capsys.readouterr().err


class TestStarAndMarginalCommands:
    def test_singular_vartheta_exit_3(self, tmp_path, capsys):
        code = main(["star", "vartheta", "--hbar", "1", "--vartheta", "0",
                     "--state", "gaussian:0,0", "--grid", "8", "--extent", "2",
                     "--out", str(tmp_path / "s.csv")])
        assert code == 3
        assert "singular" in capsys.readouterr().err

    def test_star_b_runs(self, tmp_path):
        assert main(["star", "b", "--k1", "1", "--k2", "-1", "--k3", "1",
                     "--state", "gaussian:0,0", "--grid", "12", "--extent", "2",
                     "--out", str(tmp_path / "sb.csv")]) == 0

    def test_star_hbar_runs(self, tmp_path):
        assert main(["star", "hbar", "--hbar", "2", "--vartheta", "0.5",
                     "--bfield", "0.25", "--state", "gaussian:0,0",
                     "--state-grid", "64", "--state-extent", "8",
                     "--grid", "8", "--extent", "1.5",
                     "--out", str(tmp_path / "sh.csv")]) == 0

    def test_marginal_momentum(self, tmp_path):
        out = tmp_path / "m.csv"
        assert main(["marginal", "momentum", "--k1", "1", "--k2", "-1", "--k3", "1",
                     "--state", "gaussian:0,0", "--grid", "16", "--extent", "4",
                     "--int-grid", "48", "--int-extent", "5",
                     "--out", str(out)]) == 0
        vals = load_csv(out).real
        assert vals.min() >= -1e-8 * vals.max()


class TestVerifyAndLimit:
    def test_verify_empty_suite(self, tmp_path, capsys):
        assert main(["verify", "--suite", "", "--out", str(tmp_path / "e.txt")]) == 0
        assert (tmp_path / "e.txt").read_text() == ""

    def test_verify_deterministic_bytes(self, tmp_path):
        a = tmp_path / "a.txt"
        b = tmp_path / "b.txt"
        argv = ["verify", "--suite", "group_associativity,uir_properties",
                "--seed", "7"]
        assert main(argv + ["--out", str(a)]) == 0
        assert main(argv + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_limit_prints_decreasing(self, capsys):
        code = main(["limit", "--k1", "1", "--c", "0.25", "--halvings", "4",
                     "--state", "gaussian:0,0"])
        out = [ln for ln in capsys.readouterr().out.splitlines() if ln]
        assert code == 0
        dists = [float(x) for x in out]
        assert len(dists) == 5
        assert all(a > b for a, b in zip(dists, dists[1:]))
