import json
import subprocess
import sys

import numpy as np
import pytest

from feichtinger.cli import main
from feichtinger.groups import GroupSpec
from feichtinger.signals import Signal, delta, random_signal, signal_to_json


def write(tmp_path, name, sig):
    p = tmp_path / name
    p.write_text(json.dumps(signal_to_json(sig)))
    return str(p)


Z4 = GroupSpec((4,))


def test_norm_hand_example(tmp_path, capsys):
    f = write(tmp_path, "f.json", Signal(Z4, [1, 2, 0, -1]))
    d = write(tmp_path, "d.json", delta(Z4))
    assert main(["norm", f, d]) == 0
    assert capsys.readouterr().out.strip() == "stft: 4"


def test_norm_all_methods(tmp_path, capsys, rng):
    G = GroupSpec((2, 3))
    f = write(tmp_path, "f.json", random_signal(G, rng))
    g = write(tmp_path, "g.json", random_signal(G, rng))
    assert main(["norm", f, g, "--method", "all"]) == 0
    out = capsys.readouterr().out
    disc = float(out.strip().splitlines()[-1].split(":")[1])
    assert disc <= 1e-9


def test_norm_errors(tmp_path):
    f = write(tmp_path, "f.json", Signal(Z4, [1, 2, 0, -1]))
    z = write(tmp_path, "z.json", Signal(Z4, np.zeros(4)))
    other = write(tmp_path, "o.json", delta(GroupSpec((5,))))
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["norm", f, z]) == 2
    assert main(["norm", f, other]) == 2
    assert main(["norm", f, str(bad)]) == 2
    assert main(["norm", f, str(tmp_path / "missing.json")]) == 2


def test_stft_hand_example(tmp_path):
    Z2 = GroupSpec((2,))
    d = write(tmp_path, "d.json", delta(Z2))
    out = tmp_path / "plane.json"
    assert main(["stft", d, d, "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["group"]["factors"] == [2, 2]
    assert data["values"] == [[1.0, 0.0], [1.0, 0.0], [0.0, 0.0], [0.0, 0.0]]


def test_gabor_full_lattice(tmp_path, capsys, rng):
    g = random_signal(GroupSpec((6,)), rng)
    w = write(tmp_path, "g.json", g)
    out = tmp_path / "gabor.json"
    assert main(["gabor", w, "--lattice", "full", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    energy = float(np.sum(np.abs(g.values) ** 2))
    assert data["frame_bounds"] == pytest.approx([energy, energy])
    assert data["reconstruction_error"] < 1e-12


def test_gabor_not_a_frame(tmp_path):
    w = write(tmp_path, "g.json", delta(GroupSpec((8,))))
    assert main(["gabor", w, "--lattice", "4,4"]) == 1
    assert main(["gabor", w, "--lattice", "nonsense"]) == 2


def test_kernel_round_trip(tmp_path, capsys):
    op = {
        "domain": {"factors": [3], "weight": "1"},
        "codomain": {"factors": [3], "weight": "1"},
        "matrix": [[[1.0 if i == j else 0.0, 0.0] for j in range(3)] for i in range(3)],
    }
    src = tmp_path / "op.json"
    src.write_text(json.dumps(op))
    kfile = tmp_path / "k.json"
    assert main(["kernel", str(src), "--out", str(kfile)]) == 0
    k = json.loads(kfile.read_text())
    assert k["round_trip_error"] <= 1e-12 and k["split"] == 1
    back = tmp_path / "op2.json"
    assert main(["kernel", str(kfile), "--out", str(back)]) == 0
    data = json.loads(back.read_text())
    assert np.allclose([[c[0] for c in row] for row in data["matrix"]], np.eye(3))
    assert data["round_trip_error"] <= 1e-12


def test_kernel_needs_split(tmp_path):
    src = tmp_path / "k.json"
    src.write_text(json.dumps(signal_to_json(delta(GroupSpec((2, 3))))))
    assert main(["kernel", str(src)]) == 2
    assert main(["kernel", str(src), "--split", "1"]) == 0
    assert main(["kernel", str(src), "--split", "2"]) == 2


def test_verify_poisson(tmp_path):
    report = tmp_path / "r.json"
    assert main(["verify", "--suite", "poisson", "--group", "6", "--trials", "100", "--seed", "42", "--json", str(report)]) == 0
    data = json.loads(report.read_text())
    assert data["passed"] and all(c["status"] == "pass" for c in data["checks"])
    names = [c["name"] for c in data["checks"]]
    assert names == sorted(names)


def test_verify_dual_size_cap(tmp_path):
    report = tmp_path / "r.json"
    assert main(["verify", "--suite", "dual", "--group", "16", "--json", str(report)]) == 0
    data = json.loads(report.read_text())
    assert {c["status"] for c in data["checks"]} == {"skip"}


def test_verify_usage_errors():
    assert main(["verify", "--group", "4x"]) == 2
    assert main(["verify", "--suite", "nope", "--group", "4"]) == 2
    assert main(["verify", "--group", "4", "--trials", "0"]) == 2
    assert main([]) == 2


def test_verify_determinism(tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        assert main(["verify", "--suite", "norms", "--group", "2x3", "--trials", "3", "--seed", "7", "--json", str(p)]) == 0
    a, b = (json.loads(p.read_text()) for p in paths)
    a.pop("wall_time"), b.pop("wall_time")
    assert a == b


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "feichtinger.cli", "--help"], capture_output=True, text=True)
    assert out.returncode == 0 and "verify" in out.stdout
