from __future__ import annotations

import pytest

from conftest import DATA
from medial_bikei.algebra import (
    cartesian_product,
    format_table,
    read_table,
    takasaki_kei,
    trivial_bikei,
    unknot_bikei,
    vertical_mirror,
)
from medial_bikei.cli import EXIT_BOUND, EXIT_INPUT, EXIT_NEGATIVE, EXIT_OK, main
from medial_bikei.engine import parse_trace, replay_trace
from medial_bikei.presentation import PresentationMatrix
from medial_bikei import diagram_to_presentation, parse_gauss_code


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def printed_table(out):
    lines = out.splitlines()
    assert lines[0].startswith("n=")
    return read_table("\n".join(lines[1:]))


def write_table(path, t):
    path.write_text(format_table(t.under, t.over))
    return path


# --- complete ----------------------------------------------------------------------

def test_complete_unknot_matrix(capsys, tmp_path):
    f = tmp_path / "u.txt"
    f.write_text("1\n0 0\n")
    code, out, _ = run(capsys, "complete", f)
    assert code == EXIT_OK
    assert out.splitlines()[0] == "n=2"
    assert printed_table(out) == unknot_bikei()


def test_complete_4_71(capsys):
    code, out, _ = run(capsys, "complete", DATA / "matrix_4_71.txt")
    assert code == EXIT_OK and out.startswith("n=6\n")


def test_complete_presentation_file(capsys):
    code, out, _ = run(capsys, "complete", DATA / "short_form_example.pres")
    code2, out2, _ = run(capsys, "complete", DATA / "short_form_example.txt")
    assert code == code2 == EXIT_OK and out == out2


def test_complete_bound_exceeded(capsys, tmp_path):
    f = tmp_path / "free2.txt"
    f.write_text("2\n0 0 0 0\n0 0 0 0\n")
    code, out, _ = run(capsys, "complete", f, "--max-size", 20)
    assert code == EXIT_BOUND and out.strip() == "exceeded bound 20"


@pytest.mark.parametrize("text", ["2\n1 2 3\n", "1\n5 0\n", "x\n", ""])
def test_complete_parse_failure(capsys, tmp_path, text):
    f = tmp_path / "bad.txt"
    f.write_text(text)
    code, _, err = run(capsys, "complete", f)
    assert code == EXIT_INPUT and err.startswith("error:")


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "complete", tmp_path / "absent.txt")
    assert code == EXIT_INPUT and "error" in err


def test_bad_max_size(capsys):
    code, _, _ = run(capsys, "knot", "O1+U1+", "--max-size", 0)
    assert code == EXIT_INPUT


def test_trace_file_replays(capsys, tmp_path):
    trace = tmp_path / "t.trace"
    code, out, _ = run(capsys, "knot", "O1+U2+O3+U1+O2+U3+", "--trace", trace)
    assert code == EXIT_OK
    m = diagram_to_presentation(parse_gauss_code("O1+U2+O3+U1+O2+U3+"))
    final = replay_trace(m, parse_trace(trace.read_text()))
    assert final == PresentationMatrix.from_table(printed_table(out))


def test_table_figure(capsys, tmp_path):
    png = tmp_path / "t.png"
    code, _, _ = run(capsys, "complete", DATA / "matrix_4_71.txt", "--figure", png)
    assert code == EXIT_OK and png.read_bytes()[:4] == b"\x89PNG"


# --- knot ---------------------------------------------------------------------------

@pytest.mark.parametrize("code_, n", [
    ("O1+U2+U1+O2+", 2),
    ("O1+U2+O3+U1+O2+U3+", 18),
    ("U1+O2+U3+O1+U4+O3+U2+O4+", 50),
    ("O1+U2+O3-U4-U1+O2+U3-O4-", 2),  # not planar, a virtual diagram
    ("O1+;U1+", 8),
])
def test_knot(capsys, code_, n):
    code, out, _ = run(capsys, "knot", code_)
    assert code == EXIT_OK and out.startswith(f"n={n}\n")


def test_knot_code_from_file(capsys, tmp_path):
    f = tmp_path / "k.txt"
    f.write_text("O1+U2+U1+O2+\n")
    assert run(capsys, "knot", f)[1].startswith("n=2\n")


@pytest.mark.parametrize("bad", ["O1+U2+", "O1+O1+", "Q1+U1+", "O1U1"])
def test_knot_invalid(capsys, bad):
    code, _, err = run(capsys, "knot", bad)
    assert code == EXIT_INPUT and err


def test_knot_plain_bikei(capsys):
    # without the medial identities the trefoil does not close up within the bound
    code, out, _ = run(capsys, "knot", "O1+U2+O3+U1+O2+U3+", "--plain-bikei", "--max-size", 60)
    assert code == EXIT_BOUND and out.strip() == "exceeded bound 60"
    code, out, _ = run(capsys, "knot", "O1+U2+U1+O2+", "--plain-bikei")
    assert code == EXIT_OK and out.startswith("n=2\n")


@pytest.mark.parametrize("strategy", ["score", "lex", "block"])
def test_knot_strategies(capsys, strategy):
    code, out, _ = run(capsys, "knot", "O1+U2+O3+U1+O2+U3+", "--zero-strategy", strategy)
    assert code == EXIT_OK and out.startswith("n=18\n")


# --- iso -----------------------------------------------------------------------------

def test_iso_identity(capsys):
    code, out, _ = run(capsys, "iso", DATA / "hopf_8.txt", DATA / "hopf_8.txt")
    assert code == EXIT_OK
    assert sorted(map(int, out.split())) == list(range(1, 9))


def test_iso_negative(capsys, tmp_path):
    a = write_table(tmp_path / "a.txt", unknot_bikei())
    b = write_table(tmp_path / "b.txt", trivial_bikei(2))
    code, out, _ = run(capsys, "iso", a, b)
    assert code == EXIT_NEGATIVE and out.strip() == "not isomorphic"


def test_iso_4_71_product(capsys, tmp_path):
    b = write_table(tmp_path / "b.txt", vertical_mirror(cartesian_product(unknot_bikei(), takasaki_kei(3))))
    code, out, _ = run(capsys, "iso", DATA / "table_4_71.txt", b)
    assert code == EXIT_OK and len(out.split()) == 6


def test_iso_rejects_incomplete(capsys, tmp_path):
    f = tmp_path / "z.txt"
    f.write_text("2\n1 0 1 1\n2 2 2 2\n")
    code, _, _ = run(capsys, "iso", f, f)
    assert code == EXIT_INPUT


# --- verify -------------------------------------------------------------------------------

def test_verify_z4_medial(capsys):
    code, out, _ = run(capsys, "verify", DATA / "z4_alexander.txt", "--medial")
    assert code == EXIT_OK and out.strip() == "ok: medial bikei of order 4"


def test_verify_s3_core(capsys, tmp_path):
    from medial_bikei.algebra import core_kei, permutation_group

    S3 = [(1, 2, 3), (2, 1, 3), (3, 2, 1), (1, 3, 2), (2, 3, 1), (3, 1, 2)]
    f = write_table(tmp_path / "s3.txt", core_kei(permutation_group(S3)))
    assert run(capsys, "verify", f)[0] == EXIT_OK
    code, out, _ = run(capsys, "verify", f, "--medial")
    assert code == EXIT_NEGATIVE
    assert any(line.startswith("m.i\t") for line in out.splitlines())


def test_verify_corrupted(capsys, tmp_path):
    t = read_table((DATA / "hopf_8.txt").read_text())
    u = t.under.copy()
    u[0, 0] = u[0, 0] % 8 + 1
    f = tmp_path / "c.txt"
    f.write_text(format_table(u, t.over))
    code, out, _ = run(capsys, "verify", f)
    assert code == EXIT_NEGATIVE and "!=" in out


def test_verify_printed_reference_fails(capsys):
    code, out, _ = run(capsys, "verify", DATA / "s3_core_reference.txt")
    assert code == EXIT_NEGATIVE and out.strip()


def test_verify_rejects_zeros(capsys, tmp_path):
    f = tmp_path / "z.txt"
    f.write_text("1\n0 0\n")
    assert run(capsys, "verify", f)[0] == EXIT_INPUT


def test_printed_tables_verify(capsys, tmp_path):
    code, out, _ = run(capsys, "knot", "O1+U2+O3+U1+O2+U3+")
    f = write_table(tmp_path / "t.txt", printed_table(out))
    assert run(capsys, "verify", f, "--medial")[0] == EXIT_OK


# --- classify -------------------------------------------------------------------------

def corpus(tmp_path, text):
    f = tmp_path / "corpus.txt"
    f.write_text(text)
    return f


def report(path):
    rows, classes, section = [], [], None
    for line in path.read_text().splitlines():
        if line.startswith("#"):
            section = line
            continue
        if line.startswith("name\t"):
            continue
        (classes if section else rows).append(line.split("\t"))
    return rows, classes


def test_classify_virtual_trefoil_is_unknotted(capsys, tmp_path):
    c = corpus(tmp_path, "unknot:\nvt: O1+U2+U1+O2+\n")
    out = tmp_path / "r.tsv"
    code, stdout, _ = run(capsys, "classify", c, "-o", out)
    assert code == EXIT_OK
    rows, classes = report(out)
    assert rows == [["unknot", "FINITE", "2", "1"], ["vt", "FINITE", "2", "1"]]
    assert classes == [["1", "2", "unknot", "unknot,vt"]]
    assert (tmp_path / "r.png").exists()
    assert "1 classes" in stdout


def test_classify_two_classes(capsys, tmp_path):
    c = corpus(tmp_path, "unknot:\ntrefoil: O1+U2+O3+U1+O2+U3+\n")
    out = tmp_path / "r.tsv"
    run(capsys, "classify", c, "-o", out, "--no-figure")
    _, classes = report(out)
    assert sorted(int(r[1]) for r in classes) == [2, 18]
    assert not (tmp_path / "r.png").exists()


def test_classify_empty_corpus(capsys, tmp_path):
    c = corpus(tmp_path, "# nothing\n")
    out = tmp_path / "r.tsv"
    code, _, _ = run(capsys, "classify", c, "-o", out)
    assert code == EXIT_OK
    assert out.read_text() == "name\tstatus\tcardinality\tclassId\n# classes\n# classId\tcardinality\trepresentative\tmembers\n"


def test_classify_errors_and_bounds(capsys, tmp_path):
    c = corpus(tmp_path, "bad: O1+U2+\nfree: @free.txt\nmissing: @absent.txt\nunknot:\n")
    (tmp_path / "free.txt").write_text("2\n0 0 0 0\n0 0 0 0\n")
    out = tmp_path / "r.tsv"
    code, _, _ = run(capsys, "classify", c, "-o", out, "--max-size", 20)
    assert code == EXIT_OK
    rows, classes = report(out)
    assert [r[1] for r in rows] == ["ERROR", "BOUND_EXCEEDED", "ERROR", "FINITE"]
    assert rows[1][2:] == ["-", "-"]
    text = out.read_text()
    assert "# errors" in text and "# bad:" in text and "# missing:" in text
    assert classes == [["1", "2", "unknot", "unknot"]]
    assert (tmp_path / "r.png").exists()


def test_classify_parallel_and_cache_are_deterministic(capsys, tmp_path):
    c = corpus(tmp_path, (DATA / "corpus.txt").read_text().replace("@", "@" + str(DATA) + "/"))
    outs = []
    for extra in ([], ["--jobs", 2], ["--jobs", 2, "--cache", tmp_path / "cache"], ["--cache", tmp_path / "cache"]):
        out = tmp_path / f"r{len(outs)}.tsv"
        assert run(capsys, "classify", c, "-o", out, "--no-figure", *extra)[0] == EXIT_OK
        outs.append(out.read_text())
    assert len(set(outs)) == 1
    assert len(list((tmp_path / "cache").iterdir())) == 6


def test_cache_is_used(capsys, tmp_path, monkeypatch):
    import medial_bikei.cli as cli

    cache = tmp_path / "cache"
    run(capsys, "knot", "O1+U2+O3+U1+O2+U3+", "--cache", cache)
    monkeypatch.setattr(cli, "complete", lambda *a, **k: pytest.fail("cache not used"))
    code, out, _ = run(capsys, "knot", "O1+U2+O3+U1+O2+U3+", "--cache", cache)
    assert code == EXIT_OK and out.startswith("n=18\n")
