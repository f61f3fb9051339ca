"""Command-line surface: parsing, exit codes, deterministic outputs."""

import json

import pytest

from stoqcheck.cli import main, parse_hamiltonian, serialize_hamiltonian

TRIANGLE = """\
qubits 3
term 1 X@0 X@1
term 1 Y@0 Y@1
term 1 Z@0 Z@1
term 1 X@1 X@2
term 1 Y@1 Y@2
term 1 Z@1 Z@2
term 1 X@0 X@2
term 1 Y@0 Y@2
term 1 Z@0 Z@2
"""

EDGE = """\
qubits 2
term 1 X@0 X@1
term 1 Y@0 Y@1
term 1 Z@0 Z@1
"""

FIELD_ISING = """\
qubits 2
term 1/2 Z@0
term 0.5 Z@1
term -2 X@0
term -2.0 X@1
term 0.2 X@0 X@1
term 1 Z@0 Z@1
"""

RXC3_FILE = """\
# worked 6-element instance
elements 6
set 0 1 2
set 2 3 4
set 1 2 4
set 0 3 5
set 1 4 5
set 0 3 5
"""


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_parse_comments_blanks_rationals_duplicates():
    h, originals = parse_hamiltonian(
        "# heading\n\nqubits 2\nterm 1/4 X@0\nterm 0.25 X@0\nterm -1 Z@0 Z@1\n")
    assert h.one_local[(0, "X")] == 0.5
    assert h.two_local[(0, 1, "Z", "Z")] == -1.0
    assert originals[0][0] == "1/4"


def test_parse_errors():
    for text in ("term 1 X@0\n", "qubits 2\nterm 1 X@0 Z@0\n",
                 "qubits 2\nterm 1 Q@0\n", "qubits 2\nfrob\n",
                 "qubits 0\n"):
        with pytest.raises(ValueError):
            parse_hamiltonian(text)


def test_roundtrip_identity():
    h, _ = parse_hamiltonian(FIELD_ISING)
    h2, _ = parse_hamiltonian(serialize_hamiltonian(h))
    assert h == h2


def test_check_xyz_exit_codes(tmp_path, capsys):
    tri = write(tmp_path, "tri.ham", TRIANGLE)
    assert main(["check-xyz", tri]) == 1
    assert "NOT STOQUASTIC" in capsys.readouterr().out

    edge = write(tmp_path, "edge.ham", EDGE)
    assert main(["check-xyz", edge]) == 0
    out = capsys.readouterr().out
    assert "STOQUASTIC" in out and "qubit 0" in out

    bad = write(tmp_path, "bad.ham", "qubits 2\nterm 1 X@0 Z@1\n")
    assert main(["check-xyz", bad]) == 2


def test_check_xyz_trace(tmp_path):
    edge = write(tmp_path, "edge.ham", EDGE)
    trace_path = tmp_path / "trace.json"
    assert main(["check-xyz", edge, "--trace", str(trace_path)]) == 0
    payload = json.loads(trace_path.read_text())
    assert payload["stoquastic"] is True
    assert set(payload["solution"]["0"]) == {"perm", "signs"}
    assert sorted(payload["solution"]["0"]["perm"]) == [1, 2, 3]
    assert all({"step_id", "action", "detail"} == set(r) for r in payload["steps"])


def test_check_2q(tmp_path, capsys):
    f = write(tmp_path, "fi.ham", FIELD_ISING)
    assert main(["check-2q", f]) == 0
    out = capsys.readouterr().out
    assert "REAL UNDER LOCAL ROTATIONS" in out
    assert "STOQUASTIC" in out and "witness" in out

    nonreal = write(tmp_path, "nr.ham", """\
qubits 2
term 1 X@0 X@1
term 2 Y@0 Y@1
term 3 Z@0 Z@1
term 1 X@0
term 1 Y@0
term 1 Z@0
""")
    assert main(["check-2q", nonreal]) == 1
    assert "NOT REAL UNDER LOCAL ROTATIONS" in capsys.readouterr().out

    tri = write(tmp_path, "tri.ham", TRIANGLE)
    assert main(["check-2q", tri]) == 2

    zmat = write(tmp_path, "z.ham", "qubits 2\nterm -1 X@0 X@1\nterm -1 Y@0 Y@1\n")
    assert main(["check-2q", zmat]) == 0


def test_decompose_cmd(tmp_path, capsys):
    ok = write(tmp_path, "ok.ham",
               "qubits 3\nterm 1 Z@0 X@1\nterm 1 X@1 Z@2\nterm -2 X@1\n")
    assert main(["decompose", ok]) == 0
    assert "IN CONE" in capsys.readouterr().out
    bad = write(tmp_path, "bad.ham", "qubits 2\nterm 1 X@0 X@1\n")
    assert main(["decompose", bad]) == 1
    assert "NOT IN CONE" in capsys.readouterr().out


def test_realness_cmd(tmp_path, capsys):
    f = write(tmp_path, "fi.ham", FIELD_ISING)
    assert main(["realness", f]) == 0
    nr = write(tmp_path, "nr.ham",
               "qubits 2\nterm 1 X@0 X@1\nterm 2 Y@0 Y@1\nterm 3 Z@0 Z@1\n"
               "term 1 X@0\nterm 1 Y@0\nterm 1 Z@0\n")
    assert main(["realness", nr]) == 1


def test_oracle_cmd(tmp_path, capsys):
    f = write(tmp_path, "fi.ham", FIELD_ISING)
    assert main(["oracle", f]) == 1
    assert "NO WITNESS" in capsys.readouterr().out
    edge = write(tmp_path, "edge.ham", EDGE)
    assert main(["oracle", edge]) == 0
    assert "WITNESS" in capsys.readouterr().out
    assert main(["oracle", "--mode", "realness", edge]) == 0


def test_gen_rxc3_bytes(tmp_path):
    inst = write(tmp_path, "inst.txt", RXC3_FILE)
    out = tmp_path / "out.ham"
    assert main(["gen-rxc3", inst, "--out", str(out)]) == 0
    expect = (
        "qubits 6\n"
        "term 1.0 X@0 X@1\nterm 1.0 X@1 X@2\nterm 1.0 X@0 X@2\n"
        "term 1.0 Y@2 X@3\nterm 1.0 X@3 X@4\nterm 1.0 Y@2 X@4\n"
        "term 1.0 Y@1 Z@2\nterm 1.0 Z@2 Y@4\nterm 1.0 Y@1 Y@4\n"
        "term 1.0 Y@0 Y@3\nterm 1.0 Y@3 X@5\nterm 1.0 Y@0 X@5\n"
        "term 1.0 Z@1 Z@4\nterm 1.0 Z@4 Y@5\nterm 1.0 Z@1 Y@5\n"
        "term 1.0 Z@0 Z@3\nterm 1.0 Z@3 Z@5\nterm 1.0 Z@0 Z@5\n"
    )
    assert out.read_bytes().decode() == expect

    malformed = write(tmp_path, "bad.txt", "elements 6\nset 0 1 2\n")
    assert main(["gen-rxc3", malformed]) == 2


def test_region_scan_cmd(tmp_path):
    out = tmp_path / "scan.csv"
    assert main(["region-scan", "--ax", "0:2:3", "--az", "0:2:3",
                 "--axx", "0:1:2", "--out", str(out)]) == 0
    data = out.read_bytes().decode()
    lines = data.split("\n")
    assert lines[0] == "aX,aZ,aXX,stoquastic,case_id"
    assert len(lines) == 3 * 3 * 2 + 2
    # byte-determinism
    out2 = tmp_path / "scan2.csv"
    main(["region-scan", "--ax", "0:2:3", "--az", "0:2:3",
          "--axx", "0:1:2", "--out", str(out2)])
    assert out.read_bytes() == out2.read_bytes()


def test_usage_error_exit_code():
    assert main(["no-such-command"]) == 2
    assert main(["region-scan", "--ax", "bogus"]) == 2
