import subprocess
import sys

import numpy as np
import pytest

from gruenbaum_ira import baseline, channel, code as codemod, graph, interleaver
from gruenbaum_ira.cli import main


def run(args, capsys):
    rc = main([str(a) for a in args])
    out = capsys.readouterr()
    return rc, out.out, out.err


def test_graph_export(tmp_path, capsys):
    path = tmp_path / "g.txt"
    rc, out, _ = run(["graph", "export", "--out", path], capsys)
    assert rc == 0 and "girth 5" in out
    assert graph.read_edge_list(path) == graph.gruenbaum_graph()


def test_interleave_gen_matches_library(tmp_path, capsys):
    path = tmp_path / "pi.txt"
    assert run(["interleave", "gen", "--n", 1344, "--p", 173, "--s", 1184, "--out", path], capsys)[0] == 0
    assert interleaver.read_permutation(path) == interleaver.reference_interleaver()
    rc, out, _ = run(["interleave", "gen", "--small", "gr24", "--shift", "cyclic"], capsys)
    vals = [int(t) for t in out.split()]
    assert rc == 0 and vals[0] == 1344 and sorted(vals[1:]) == list(range(1344))


def test_interleave_gen_rejects_bad_parameters(capsys):
    rc, _, err = run(["interleave", "gen", "--p", 2], capsys)
    assert rc == 2 and err.startswith("error:")


def test_code_build_and_decode(tmp_path, capsys):
    code_path = tmp_path / "code.txt"
    rc, out, _ = run(["code", "build", "--out", code_path], capsys)
    assert rc == 0 and "k=192 m=576 n=768 E=1344 rate=1/4 pinned=8" in out
    code = codemod.read_code(code_path)
    assert np.array_equal(code.perm.map, codemod.reference_code().perm.map)

    rng = np.random.default_rng(3)
    payload = rng.integers(0, 2, code.payload_bits, dtype=np.uint8)
    word = codemod.encode(code, payload).bits
    llr_path = tmp_path / "llr.txt"
    llr_path.write_text("\n".join(repr(float(v)) for v in channel.llr(channel.modulate(word), 0.6)))
    out_path = tmp_path / "bits.txt"
    for sched in ("turbo", "flooding"):
        rc, _, err = run(["decode", "--scheduling", sched, "--code", code_path, "--in", llr_path,
                          "--early-stop", "--out", out_path], capsys)
        assert rc == 0 and "converged=True" in err
        assert np.array_equal(np.loadtxt(out_path, dtype=np.uint8), payload)


def test_code_build_custom_profile_and_file_interleaver(tmp_path, capsys):
    pi = tmp_path / "pi.txt"
    interleaver.write_permutation(interleaver.Permutation(np.random.default_rng(0).permutation(60)), pi)
    rc, out, _ = run(["code", "build", "--profile", "2:0.4,4:0.6", "--k", 20, "--rate", "1/2",
                      "--edges", 60, "--interleaver", pi, "--no-pins", "--out", tmp_path / "c.txt"],
                     capsys)
    assert rc == 0 and "k=20 m=20 n=40 E=60" in out
    rc, _, err = run(["code", "build", "--k", 10, "--rate", "3/7", "--out", tmp_path / "x"], capsys)
    assert rc == 2


def test_decode_wrong_length(tmp_path, capsys):
    path = tmp_path / "llr.txt"
    path.write_text("1.0\n2.0\n")
    rc, _, err = run(["decode", "--in", path], capsys)
    assert rc == 2 and "error" in err


def test_baseline_encode_decode(tmp_path, capsys):
    bits = np.random.default_rng(1).integers(0, 2, 192)
    src = tmp_path / "u.txt"
    src.write_text("\n".join(map(str, bits)))
    coded = tmp_path / "c.txt"
    assert run(["baseline", "encode", "--in", src, "--out", coded], capsys)[0] == 0
    c = np.loadtxt(coded, dtype=np.uint8)
    assert np.array_equal(c, baseline.conv_encode(baseline.ConvCodeSpec(), bits))
    llrs = tmp_path / "l.txt"
    llrs.write_text("\n".join(repr(float(v)) for v in 4.0 * (1 - 2.0 * c)))
    rc, out, _ = run(["baseline", "decode", "--in", llrs], capsys)
    assert rc == 0 and [int(t) for t in out.split()] == bits.tolist()


def test_analyze_defects(tmp_path, capsys):
    rc, out, _ = run(["analyze", "defects", "--bound", 3], capsys)
    assert rc == 0
    assert "cycle4_total = 590" in out and "min_stopping_set_size = none" in out
    assert run(["analyze", "defects", "--bound", 9], capsys)[0] == 2


def test_analyze_search(capsys):
    rc, out, _ = run(["analyze", "search-ps", "--p-range", "173", "--s-range", "1184:1186",
                      "--bound", 2], capsys)
    lines = out.splitlines()
    assert rc == 0 and lines[0] == "p,s,cycle4_min_degree,cycle4_total,min_stopping_set_size"
    assert lines[1].startswith("173,1184,1,590,")
    assert len([ln for ln in lines if not ln.startswith("#")]) == 3
    rc, _, err = run(["analyze", "search-ps"], capsys)
    assert rc == 2 and "--sample" in err


def test_sim_sweep(tmp_path, capsys):
    cfg = tmp_path / "s.cfg"
    cfg.write_text(f"systems = ira,conv\nsnr_points = 2.5\nmax_frames = 20\n"
                   f"csv = {tmp_path / 'a.csv'}\nsvg = {tmp_path / 'a.svg'}\n")
    rc, _, err = run(["sim", "sweep", "--config", cfg], capsys)
    assert rc == 0 and "conv: FER" in err
    lines = (tmp_path / "a.csv").read_text().splitlines()
    assert len(lines) == 3 and lines[1].startswith("ira,turbo,2.5,20,")
    assert (tmp_path / "a.svg").read_text().count("<polyline") == 4
    rc, _, _ = run(["sim", "sweep", "--config", cfg, "--system", "conv", "--max-frames", 5,
                    "--csv", tmp_path / "b.csv"], capsys)
    assert rc == 0 and (tmp_path / "b.csv").read_text().splitlines()[1].startswith("conv,viterbi,2.5,5,")


def test_sim_sweep_config_error(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("max_frames = lots\n")
    rc, _, err = run(["sim", "sweep", "--config", cfg], capsys)
    assert rc != 0 and "error" in err
    assert run(["sim", "sweep", "--system", "ldpc"], capsys)[0] == 2


def test_entry_point_module():
    proc = subprocess.run([sys.executable, "-m", "gruenbaum_ira.cli", "--help"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "sim" in proc.stdout
