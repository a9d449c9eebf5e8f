"""Command-line interface: subcommands, exit codes, artifact validity."""

from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

from scisoftx.links import import_xml


def run_cli(*args, cwd=None):
    return subprocess.run(
        [sys.executable, "-m", "scisoftx", *map(str, args)],
        capture_output=True,
        text=True,
        cwd=cwd,
        timeout=120,
    )


@pytest.fixture(scope="module")
def doc(tmp_path_factory):
    from scisoftx.corpus import generate_corpus

    out = tmp_path_factory.mktemp("cli-corpus")
    generate_corpus(out, n_docs=2, seed=11)
    return out / "doc01"


def test_extract_writes_canonical_model(doc, tmp_path):
    out = tmp_path / "model.json"
    result = run_cli("extract", "--pdf", doc / "paper.pdf", "--out", out)
    assert result.returncode == 0, result.stderr
    payload = json.loads(out.read_text())
    assert set(payload) == {"page_count", "source_digest", "spans"}
    assert len(payload["source_digest"]) == 64


def test_extract_missing_pdf_flag_is_user_error(tmp_path):
    result = run_cli("extract", cwd=tmp_path)
    assert result.returncode == 1
    assert "error" in result.stderr.lower()


def test_extract_unreadable_pdf_is_user_error(tmp_path):
    bogus = tmp_path / "x.pdf"
    bogus.write_bytes(b"nope")
    result = run_cli("extract", "--pdf", bogus, "--out", tmp_path / "m.json")
    assert result.returncode == 1
    assert "cannot parse" in result.stderr or "error" in result.stderr


def test_index_command(doc, tmp_path):
    out = tmp_path / "index.json"
    result = run_cli("index", "--repo", doc / "repo", "--out", out)
    assert result.returncode == 0, result.stderr
    payload = json.loads(out.read_text())
    assert payload["entities"][0]["kind"] == "package"
    assert payload["entities"][0]["parent_id"] is None


def test_unknown_profile_is_user_error(doc, tmp_path):
    result = run_cli("index", "--repo", doc / "repo", "--profiles", "cobol",
                     "--out", tmp_path / "i.json")
    assert result.returncode == 1


def test_link_missing_inputs_usage_error(tmp_path):
    result = run_cli("link", cwd=tmp_path)
    assert result.returncode == 1


def test_full_pipeline(doc, tmp_path):
    model = tmp_path / "model.json"
    index = tmp_path / "index.json"
    links = tmp_path / "links.xml"
    graph = tmp_path / "graph.json"

    assert run_cli("extract", "--pdf", doc / "paper.pdf", "--out", model).returncode == 0
    assert run_cli("index", "--repo", doc / "repo", "--out", index).returncode == 0
    result = run_cli("link", "--model", model, "--index", index, "--out", links)
    assert result.returncode == 0, result.stderr

    link_set = import_xml(links.read_bytes())
    assert len(link_set.links) > 0
    assert link_set.params is not None  # linker params travel in the header
    assert all(l.origin == "auto" for l in link_set.links)

    for level in ("file", "package"):
        result = run_cli("graph", "--level", level, "--links", links,
                         "--index", index, "--out", graph)
        assert result.returncode == 0, result.stderr
        payload = json.loads(graph.read_text())
        assert set(payload) == {"level", "nodes", "edges"}
        assert payload["level"] == level


def test_graph_with_empty_links(doc, tmp_path):
    from scisoftx.code_model import build_index
    from scisoftx.links import LinkSet, export_xml
    from scisoftx.document import extract_spans

    model = extract_spans((doc / "paper.pdf").read_bytes())
    index = build_index(doc / "repo")
    empty = LinkSet(model.source_digest, index.source_digest)
    links = tmp_path / "empty.xml"
    links.write_bytes(export_xml(empty))
    result = run_cli("graph", "--level", "package", "--links", links,
                     "--repo", doc / "repo", "--out", tmp_path / "g.json")
    assert result.returncode == 0
    assert json.loads((tmp_path / "g.json").read_text()) == {
        "level": "package", "nodes": [], "edges": [],
    }


def test_graph_render_writes_figure(doc, tmp_path):
    links = tmp_path / "links.xml"
    run_cli("link", "--pdf", doc / "paper.pdf", "--repo", doc / "repo", "--out", links)
    figure = tmp_path / "graph.png"
    result = run_cli("graph", "--level", "file", "--links", links,
                     "--repo", doc / "repo", "--out", tmp_path / "g.json",
                     "--render", figure)
    assert result.returncode == 0, result.stderr
    assert figure.is_file() and figure.stat().st_size > 1000


def test_eval_command(tmp_path):
    from scisoftx.corpus import generate_corpus

    corpus = tmp_path / "corpus"
    generate_corpus(corpus, n_docs=2, seed=3)
    result = run_cli("eval", "--corpus", corpus, "--out-dir", tmp_path / "report")
    assert result.returncode == 0, result.stderr
    assert "TOTAL" in result.stdout
    report = json.loads((tmp_path / "report" / "report.json").read_text())
    assert report["tp"] > 0
    assert (tmp_path / "report" / "report.csv").is_file()
    assert (tmp_path / "report" / "figures" / "eval_scores.png").is_file()


def test_config_file_drives_commands(doc, tmp_path):
    config = {
        "pdf_path": str(doc / "paper.pdf"),
        "repo_path": str(doc / "repo"),
        "links_path": str(tmp_path / "links.xml"),
        "profiles": ["java", "python"],
        "linker": {"context_window": 5},
    }
    config_path = tmp_path / "project.json"
    config_path.write_text(json.dumps(config))
    result = run_cli("--config", config_path, "link", "--out", tmp_path / "links.xml")
    assert result.returncode == 0, result.stderr
    link_set = import_xml((tmp_path / "links.xml").read_bytes())
    assert link_set.params.context_window == 5


def test_bad_config_is_user_error(tmp_path):
    config_path = tmp_path / "project.json"
    config_path.write_text(json.dumps({"pdf_path": "absent.pdf",
                                       "repo_path": ".", "links_path": "l.xml"}))
    result = run_cli("--config", config_path, "extract", cwd=tmp_path)
    assert result.returncode == 1
    assert "pdf_path" in result.stderr


def test_version_flag():
    result = run_cli("--version")
    assert result.returncode == 0
    assert "scisoftx" in result.stdout
