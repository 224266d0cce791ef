import json

import pytest

from toepkit.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gen_counterexample_then_claims(tmp_path, capsys):
    path = str(tmp_path / "cex.sdt")
    code, out, _ = run(capsys, "gen", "counterexample", "--depth", "3",
                       "-o", path)
    assert code == 0
    assert "claims" in out and "ok" in out
    code, out, _ = run(capsys, "test", "claims", path, "--depth", "3")
    assert code == 0
    assert "[claim:prefix-letter-inequality]" in out


def test_analyze_scale_counterexample(tmp_path, capsys):
    path = str(tmp_path / "cex.sdt")
    run(capsys, "gen", "counterexample", "--depth", "3", "-o", path)
    code, out, _ = run(capsys, "analyze", "scale", path, "--depth", "3")
    assert code == 0
    assert "d_0=1" in out and "d_1=40" in out and "d_2=2240" in out


def test_conjugacy_self_witnessed(tmp_path, capsys):
    path = str(tmp_path / "a.sdt")
    run(capsys, "gen", "flip-aut", "--depth", "3", "-o", path)
    code, out, _ = run(capsys, "test", "conjugacy",
                       "--left", path, "--right", path, "--depth", "3")
    assert code == 0
    assert "verdict: witnessed" in out
    assert "p: 1" in out


def test_conjugacy_refuted_names_invariant(tmp_path, capsys):
    a = str(tmp_path / "a.sdt")
    b = str(tmp_path / "b.sdt")
    run(capsys, "gen", "counterexample", "--depth", "2", "-o", a)
    run(capsys, "gen", "flip-aut", "--depth", "3", "-o", b)
    code, out, _ = run(capsys, "test", "conjugacy",
                       "--left", a, "--right", b, "--depth", "3")
    assert code == 1
    assert "scale" in out and "primes" in out


def test_sts2_unknown_exit_code(tmp_path, capsys):
    path = str(tmp_path / "cex.sdt")
    run(capsys, "gen", "counterexample", "--depth", "2", "-o", path)
    code, out, _ = run(capsys, "test", "sts2", "--system", path,
                       "--depth", "2")
    assert code == 2
    assert "no witness" in out


def test_reports_are_deterministic(tmp_path, capsys):
    path = str(tmp_path / "a.sdt")
    run(capsys, "gen", "flip-aut", "--depth", "2", "-o", path)
    _, out1, _ = run(capsys, "analyze", "language", path,
                     "--length", "3", "--depth", "3")
    _, out2, _ = run(capsys, "analyze", "language", path,
                     "--length", "3", "--depth", "3")
    assert out1 == out2
    assert "seed: 1729" in out1


def test_structured_format(tmp_path, capsys):
    path = str(tmp_path / "a.sdt")
    run(capsys, "gen", "flip-aut", "--depth", "2", "-o", path)
    code, out, _ = run(capsys, "--format", "structured",
                       "analyze", "scale", path, "--depth", "2")
    assert code == 0
    doc = json.loads(out)
    assert doc["tool"] == "toepkit" and doc["seed"] == 1729


def test_export_is_canonical(tmp_path, capsys):
    path = str(tmp_path / "a.sdt")
    run(capsys, "gen", "flip-aut", "--depth", "2", "-o", path)
    original = open(path).read()
    noisy = str(tmp_path / "noisy.sdt")
    with open(noisy, "w") as fh:
        fh.write("# comment\n" + original.replace("\n", "   \n", 1))
    out_path = str(tmp_path / "out.sdt")
    code, _, _ = run(capsys, "export", noisy, "-o", out_path)
    assert code == 0
    assert open(out_path).read() == original


def test_inverse_cli(tmp_path, capsys):
    from toepkit.constructions import BIN
    from toepkit.skeletons import HOLE, single_hole_tower, single_hole_to_rank2
    from toepkit.sadic import serialize_directive

    pal = [HOLE, 1, 0, 1]
    t = single_hole_tower(BIN, [2, 8, 32, 128, 512], [0, HOLE], [pal] * 4)
    d = single_hole_to_rank2(t)
    path = str(tmp_path / "sys.sdt")
    with open(path, "w") as fh:
        fh.write(serialize_directive(d))
    code, out, _ = run(capsys, "test", "inverse", "--system", path,
                       "--depth", "5")
    assert code == 0
    assert "anchor chain" in out and "block map" in out


def test_usage_errors_exit_three(capsys):
    code, _, err = run(capsys, "test", "conjugacy", "--left", "only.sdt")
    assert code == 3 and "error" in err
    code, _, err = run(capsys, "analyze", "scale", "/nonexistent.sdt")
    assert code == 3
    code, _, err = run(capsys, "gen", "bogus")
    assert code == 3


def test_claims_cyclic_aut(capsys):
    code, out, _ = run(capsys, "test", "claims", "--kind", "cyclic-aut",
                       "--n", "2", "--depth", "2")
    assert code == 0
    assert "[claim:letter-map-order]" in out


def test_report_file_target(tmp_path, capsys):
    path = str(tmp_path / "a.sdt")
    run(capsys, "gen", "flip-aut", "--depth", "2", "-o", path)
    report = str(tmp_path / "report.txt")
    code, out, _ = run(capsys, "analyze", "scale", path,
                       "--depth", "2", "--report", report)
    assert code == 0 and out == ""
    assert "d_0=" in open(report).read()
