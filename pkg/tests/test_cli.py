import numpy as np
import pytest

from palqa.circuit import parse_text
from palqa.cli import main
from palqa.costmodel import RD_CSV_HEADER
from palqa.image import GrayImage, read_pgm, write_pgm
from palqa import testimages


@pytest.fixture
def flat_pgm(tmp_path):
    path = tmp_path / "flat.pgm"
    path.write_bytes(write_pgm(GrayImage(np.full((16, 16), 128, dtype=np.uint8))))
    return path


@pytest.fixture
def natural_pgm(tmp_path):
    path = tmp_path / "natural.pgm"
    path.write_bytes(write_pgm(testimages.natural(32)))
    return path


def test_encode_flat_reports_zero_budget(flat_pgm, tmp_path, capsys):
    out = tmp_path / "flat.palqa"
    assert main(["encode", str(flat_pgm), "-q", "16", "-o", str(out)]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert "b_total=0" in lines
    assert "gpp=0" in lines
    assert out.stat().st_size == 20


def test_encode_decode_round_trip(natural_pgm, tmp_path):
    payload = tmp_path / "n.palqa"
    restored = tmp_path / "restored.pgm"
    assert main(["encode", str(natural_pgm), "-q", "8", "-o", str(payload)]) == 0
    assert main(["decode", str(payload), "-o", str(restored)]) == 0
    img = read_pgm(restored.read_bytes())
    assert (img.width, img.height) == (32, 32)


def test_missing_input_exits_nonzero(tmp_path, capsys):
    rc = main(["encode", str(tmp_path / "nope.pgm"), "-q", "8", "-o", str(tmp_path / "x")])
    assert rc == 2
    assert "error" in capsys.readouterr().err


def test_corrupt_payload_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.palqa"
    bad.write_bytes(b"PALX" + bytes(16))
    rc = main(["decode", str(bad), "-o", str(tmp_path / "out.pgm")])
    assert rc == 2
    assert "format error" in capsys.readouterr().err


def test_usage_error_exits_1(capsys):
    assert main([]) == 1
    assert main(["encode"]) == 1
    capsys.readouterr()


def test_rd_sweep_csv(natural_pgm, tmp_path):
    csv_path = tmp_path / "rd.csv"
    rc = main([
        "rd-sweep", str(natural_pgm), "-q", "8,16", "--methods", "palqa,nzneqr",
        "--csv", str(csv_path),
    ])
    assert rc == 0
    lines = csv_path.read_text().strip().splitlines()
    assert lines[0] == RD_CSV_HEADER
    rows = [line.split(",") for line in lines[1:]]
    assert [(r[0], r[1]) for r in rows] == [
        ("nzneqr", "16"), ("nzneqr", "8"), ("palqa", "16"), ("palqa", "8")
    ] or [(r[0], r[1]) for r in rows] == [
        ("nzneqr", "8"), ("nzneqr", "16"), ("palqa", "8"), ("palqa", "16")
    ]
    by_key = {(r[0], r[1]): float(r[2]) for r in rows}
    assert by_key[("palqa", "8")] < by_key[("nzneqr", "8")]


def test_rd_sweep_rejects_unknown_method(natural_pgm, capsys):
    assert main(["rd-sweep", str(natural_pgm), "--methods", "zip"]) == 1
    capsys.readouterr()


def test_export_circuit_deterministic_and_parseable(flat_pgm, natural_pgm, tmp_path):
    out1 = tmp_path / "a.qc"
    out2 = tmp_path / "b.qc"
    for out in (out1, out2):
        assert main([
            "export-circuit", str(natural_pgm), "-q", "8", "--block", "1",
            "-o", str(out),
        ]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    circ = parse_text(out1.read_text())
    assert circ.n_qubits == 17

    flat_out = tmp_path / "flat.qc"
    assert main(["export-circuit", str(flat_pgm), "-q", "16", "-o", str(flat_out)]) == 0
    flat_circ = parse_text(flat_out.read_text())
    assert all(g.kind == "h" for g in flat_circ.gates)
    assert len(flat_circ.gates) == 6


def test_export_circuit_block_out_of_range(flat_pgm, tmp_path, capsys):
    rc = main([
        "export-circuit", str(flat_pgm), "-q", "8", "--block", "99",
        "-o", str(tmp_path / "o.qc"),
    ])
    assert rc == 1
    capsys.readouterr()


def test_verify_passes_on_real_block(natural_pgm, capsys):
    assert main(["verify", str(natural_pgm), "-q", "8", "--block", "2"]) == 0
    out = capsys.readouterr().out
    assert "verify: PASS" in out
    assert "decode-equivalence: PASS" in out


def test_verify_flat_block_passes_with_zero_entries(flat_pgm, capsys):
    assert main(["verify", str(flat_pgm), "-q", "16"]) == 0
    assert "(64 entries)" in capsys.readouterr().out


def test_verify_tamper_fails(natural_pgm, capsys):
    rc = main(["verify", str(natural_pgm), "-q", "8", "--block", "2", "--tamper"])
    assert rc == 3
    out = capsys.readouterr().out
    assert "verify: FAIL" in out
    assert "reconstruction palqa: FAIL" in out
