import pytest

from tmchain.cli import main

WRITE1 = "states 2\nrule 0 0 1 R 1\nrule 0 1 1 R 1\n"
ZIGZAG = "states 3\nrule 0 0 0 R 1\nrule 0 1 1 R 1\nrule 1 0 0 L 0\nrule 1 1 1 L 0\n"


def fields(text):
    return dict(line.split(": ", 1) for line in text.strip().splitlines())


@pytest.fixture
def write1(tmp_path):
    p = tmp_path / "w.tm"
    p.write_text(WRITE1)
    return p


def test_run_tm(write1, tmp_path, capsys):
    trace = tmp_path / "t.tsv"
    assert main(["run", "tm", "--program", str(write1), "--trace", str(trace)]) == 0
    out = fields(capsys.readouterr().out)
    assert out == {"status": "halted", "steps": "1", "head": "1", "offset": "0", "tape": "10"}
    lines = trace.read_text().splitlines()
    assert lines[0].startswith("step\tstate") and lines[1] == "1\t0\t0\t0\t1\tR\t1"


def test_run_budget(tmp_path, capsys):
    p = tmp_path / "z.tm"
    p.write_text(ZIGZAG)
    assert main(["run", "tm", "--program", str(p), "--max-steps", "5"]) == 0
    assert fields(capsys.readouterr().out)["status"] == "budget-exceeded"


def test_run_netm_rejects_erasing(tmp_path, capsys):
    p = tmp_path / "e.tm"
    p.write_text("states 2\nrule 0 0 1 R 1\nrule 0 1 0 R 1\n")
    assert main(["run", "netm", "--program", str(p)]) == 2
    assert "ErasingRule" in capsys.readouterr().err


def test_compile_and_run_down_the_chain(write1, tmp_path, capsys):
    netm, wb, hb, man = (tmp_path / n for n in ("w.netm", "w.wb", "w_h.wb", "w.man"))
    assert main(["compile", "tm-to-netm", "--in", str(write1), "--out", str(netm)]) == 0
    assert "# layout marker hi lo" in netm.read_text()
    # write-1 is already non-erasing, so it compiles to Wang directly
    assert main(["compile", "netm-to-wang", "--in", str(write1), "--out", str(wb)]) == 0
    assert main(["compile", "netm-to-hooper", "--in", str(netm), "--out", str(hb)]) == 0
    assert "# block 54" in hb.read_text()
    trace = tmp_path / "wt.tsv"
    assert main(["run", "wang", "--program", str(wb), "--tape", "10", "--trace", str(trace)]) == 0
    assert fields(capsys.readouterr().out)["status"] == "halted"
    assert trace.read_text().startswith("step\tpc\tinstr")
    assert main(["encode", "wang-to-has", "--in", str(wb), "--tape", "10",
                 "--out-manifest", str(man)]) == 0
    assert "block_starts:" in man.read_text()
    assert main(["run", "has", "--program", str(man), "--max-steps", "100000"]) == 0
    out = fields(capsys.readouterr().out)
    assert out["status"] == "loop-detected" and out["rules"]


def test_encode_warns_without_final_mark(tmp_path, capsys):
    wb = tmp_path / "p.wb"
    wb.write_text("R\nL\n")
    assert main(["encode", "wang-to-has", "--in", str(wb), "--out-manifest",
                 str(tmp_path / "m")]) == 0
    assert "warning:" in capsys.readouterr().err


def test_run_has_trace(tmp_path, capsys):
    wb, man, trace = tmp_path / "p.wb", tmp_path / "m", tmp_path / "t.tsv"
    wb.write_text("R\nM\n")
    main(["encode", "wang-to-has", "--in", str(wb), "--out-manifest", str(man)])
    assert main(["run", "has", "--program", str(man), "--trace", str(trace)]) == 0
    out = fields(capsys.readouterr().out)
    assert out["status"] == "loop-detected" and out["tape"] == "1" and out["offset"] == "1"
    assert trace.read_text().splitlines()[0] == "step\tstate\tpHead\tcHead\twHead\treads\truleId"


def test_verify_chain(write1, tmp_path, capsys):
    report = tmp_path / "r.txt"
    assert main(["verify", "chain", "--tm", str(write1), "--report", str(report)]) == 0
    assert report.read_text() == capsys.readouterr().out
    assert report.read_text().endswith("result: pass\n")


def test_bench_and_golden(capsys):
    assert main(["bench", "slowdown", "--sizes", "1,2"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("size\tt_tm") and len(lines) == 3
    assert main(["golden", "table1"]) == 0
    assert capsys.readouterr().out.startswith("table1: pass 14/14 rows, 32 entries")


def test_missing_file(capsys):
    assert main(["run", "tm", "--program", "/nonexistent.tm"]) == 2
    assert capsys.readouterr().err.startswith("error:")
