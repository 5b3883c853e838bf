import json
import shutil
import subprocess
import sys

import pytest

from conftest import FIXTURES
from divsum.cli import build_parser, main

ALGOS = ["sasi", "rag", "summatrix", "base-first", "base-rand"]


@pytest.fixture
def corpus(tmp_path):
    """docs/ holds two single texts, clusters/congo/ one cluster."""
    docs = tmp_path / "docs"
    docs.mkdir()
    shutil.copy(FIXTURES / "cstnews" / "sanguessugas.txt", docs / "sanguessugas.txt")
    shutil.copy(FIXTURES / "congo" / "T1.txt", docs / "aviao.txt")
    clusters = tmp_path / "clusters" / "congo"
    shutil.copytree(FIXTURES / "congo", clusters)
    return tmp_path


def _snapshot(directory):
    return {p.name: p.read_bytes() for p in sorted(directory.iterdir())}


@pytest.mark.parametrize("algo", ALGOS)
def test_summarize_writes_summaries_and_report(corpus, algo):
    out = corpus / "out"
    args = ["summarize", str(corpus / "docs"), "--algo", algo, "--max-words", "60", "--out", str(out), "--seed", "5"]
    assert main(args) == 0
    assert sorted(p.name for p in out.iterdir()) == ["aviao.sum.txt", "divsum.report.json", "sanguessugas.sum.txt"]
    report = json.loads((out / "divsum.report.json").read_text(encoding="utf-8"))
    assert report["config"]["algorithm"] == algo and report["failures"] == []
    for entry in report["summaries"]:
        assert entry["summary_words"] <= entry["budget"] or len(entry["sentences"]) == 1
    first = _snapshot(out)
    assert main(args) == 0
    assert _snapshot(out) == first  # byte-identical rerun


def test_cluster_directory_gives_one_summary(corpus):
    out = corpus / "out"
    assert main(["summarize", str(corpus / "clusters"), "--algo", "summatrix", "--out", str(out)]) == 0
    assert (out / "congo.sum.txt").read_text(encoding="utf-8").strip()
    out2 = corpus / "out2"
    assert main(["summarize", str(corpus / "clusters" / "congo"), "--cluster", "--algo", "sasi", "--out", str(out2)]) == 0
    assert (out2 / "congo.sum.txt").exists()


def test_parallel_jobs_match_serial(corpus):
    a, b = corpus / "a", corpus / "b"
    base = ["summarize", str(corpus / "docs"), "--algo", "rag", "--run", "r"]
    assert main(base + ["--out", str(a)]) == 0
    assert main(base + ["--out", str(b), "--jobs", "2"]) == 0
    for name in ("aviao.sum.txt", "sanguessugas.sum.txt"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_lia_rag_on_transcripts(tmp_path):
    out = tmp_path / "out"
    src = FIXTURES / "transcripts"
    assert main(["summarize", str(src), "--algo", "lia-rag", "--lang", "fr", "--out", str(out)]) == 0
    report = json.loads((out / "divsum.report.json").read_text(encoding="utf-8"))
    assert report["config"]["tc"] == 0.07


def test_exit_codes(corpus, capsys):
    docs = str(corpus / "docs")
    assert main(["summarize", docs, "--algo", "base-rand", "--out", str(corpus / "o")]) == 2
    assert main(["summarize", docs, "--d-frase", "-1", "--out", str(corpus / "o")]) == 2
    assert main(["summarize", str(corpus / "nope"), "--out", str(corpus / "o")]) == 3
    empty = corpus / "empty"
    empty.mkdir()
    (empty / "x.txt").write_text("o a de que\n", encoding="utf-8")
    assert main(["summarize", str(empty), "--out", str(corpus / "o2")]) == 4
    err = capsys.readouterr().err
    assert "configuration error" in err and "corpus error" in err and "degenerate input" in err


def test_evaluate_rouge_and_fresa(corpus):
    out = corpus / "sums"
    assert main(["summarize", str(corpus / "docs"), "--algo", "rag", "--max-words", "60", "--out", str(out)]) == 0
    refs = corpus / "refs"
    refs.mkdir()
    (refs / "sanguessugas.A.txt").write_text((out / "sanguessugas.sum.txt").read_text(encoding="utf-8"), encoding="utf-8")
    (refs / "aviao.A.txt").write_text("Um avião caiu no Congo.\n", encoding="utf-8")
    (refs / "aviao.B.txt").write_text("O acidente matou passageiros.\n", encoding="utf-8")
    cands = corpus / "cands"
    cands.mkdir()
    for p in out.glob("*.sum.txt"):
        shutil.copy(p, cands / p.name)
    ev = corpus / "ev"
    args = ["evaluate", str(cands), str(refs), str(corpus / "docs"), "--rouge", "--fresa", "--out", str(ev)]
    assert main(args) == 0
    data = json.loads((ev / "divsum-eval.report.json").read_text(encoding="utf-8"))
    assert sorted(data["candidates"]) == ["aviao", "sanguessugas"]  # one row per candidate
    assert data["candidates"]["sanguessugas"]["rouge"]["rouge_1"] == "1.00000"
    csv_lines = (ev / "divsum-eval.report.csv").read_text(encoding="utf-8").splitlines()
    assert len(csv_lines) == 3
    first = _snapshot(ev)
    assert main(args) == 0 and _snapshot(ev) == first
    (refs / "aviao.A.txt").unlink()
    (refs / "aviao.B.txt").unlink()
    assert main(args) == 3
    assert main(["evaluate", str(cands)]) == 2


def test_inspect_verbs(corpus, capsys):
    assert main(["inspect-graph", str(corpus / "docs" / "sanguessugas.txt")]) == 0
    assert capsys.readouterr().out.startswith("graph")
    assert main(["inspect-graph", str(corpus / "docs" / "aviao.txt"), "--algo", "rag"]) == 0
    capsys.readouterr()
    assert main(["inspect-matrix", str(corpus / "clusters" / "congo")]) == 0
    out = capsys.readouterr().out
    assert "# step 1" in out and "# step 2" in out and ",T2-1," in out
    assert main(["inspect-graph", str(corpus / "docs")]) == 2
    assert main(["inspect-matrix", str(corpus / "docs" / "aviao.txt")]) == 4


def test_help_names_the_source_of_each_default():
    sub = build_parser()._subparsers._group_actions[0].choices["summarize"]
    text = sub.format_help()
    assert "published default" in text and "toolkit choice" in text
    for flag in ("--d-frase", "--gamma", "--tc"):
        assert flag in text


def test_console_entry_point(tmp_path):
    r = subprocess.run([sys.executable, "-m", "divsum.cli", "--version"], capture_output=True, text=True)
    assert r.returncode == 0 and "divsum" in r.stdout
