"""Evaluation harness: matching semantics and corpus-level scoring."""

from __future__ import annotations

import json

import pytest

from scisoftx.errors import DigestMismatch
from scisoftx.evaluation import (
    evaluate_corpus,
    match_links,
    precision_recall_f1,
    render_table,
    write_report_files,
)
from scisoftx.links import LinkSet, make_link

DOC = "4d" * 32
CODE = "5e" * 32


def _link(line, char_start, snippet, qname, origin="auto"):
    return make_link(1, line, char_start, char_start + len(snippet), snippet,
                     qname, "pkg/file.java", 3, "uses", origin, 0)


def _set(*links):
    s = LinkSet(DOC, CODE)
    for l in links:
        s.add_link(l)
    return s


class TestMatchLinks:
    def test_identical_sets(self):
        links = [_link(1, 0, "alpha", "q.alpha"), _link(2, 4, "beta", "q.beta")]
        assert match_links(_set(*links), _set(*links)) == (2, 0, 0)

    def test_empty_predictions(self):
        gold = _set(_link(1, 0, "alpha", "q.alpha"), _link(2, 0, "beta", "q.beta"))
        assert match_links(_set(), gold) == (0, 0, 2)

    def test_hand_matched_mixed_case(self):
        # hand match: p1 overlaps g1 with same target (tp); p2 hits g2's
        # location but the wrong target (fp, g2 stays unmatched); p3
        # matches g3 (tp). g4 is never predicted. => (2, 1, 2)
        gold = _set(
            _link(1, 0, "alpha", "q.alpha"),
            _link(2, 0, "beta", "q.beta"),
            _link(3, 0, "gamma", "q.gamma"),
            _link(4, 0, "delta", "q.delta"),
        )
        predicted = _set(
            _link(1, 2, "pha", "q.alpha"),  # overlapping range, same target
            _link(2, 0, "beta", "q.wrong"),
            _link(3, 0, "gamma", "q.gamma"),
        )
        assert match_links(predicted, gold) == (2, 1, 2)

    def test_overlap_requires_same_line(self):
        gold = _set(_link(1, 0, "alpha", "q.alpha"))
        predicted = _set(_link(2, 0, "alpha", "q.alpha"))
        assert match_links(predicted, gold) == (0, 1, 1)

    def test_one_to_one_matching(self):
        # two predictions overlap one gold link; only one may claim it
        gold = _set(_link(1, 0, "alphabet", "q.alpha"))
        predicted = _set(
            _link(1, 0, "alpha", "q.alpha"),
            _link(1, 5, "bet", "q.alpha"),
        )
        assert match_links(predicted, gold) == (1, 1, 0)

    def test_digest_mismatch(self):
        other = LinkSet("6f" * 32, CODE)
        with pytest.raises(DigestMismatch):
            match_links(_set(), other)

    def test_symmetric_perfection(self, corpus_dir):
        from scisoftx.links import import_xml

        for gold_path in sorted(corpus_dir.glob("*/gold.xml")):
            gold = import_xml(gold_path.read_bytes())
            tp, fp, fn = match_links(gold, gold)
            assert (fp, fn) == (0, 0) and tp == len(gold.links)

    def test_monotonicity_under_removal(self):
        gold = _set(
            _link(1, 0, "alpha", "q.alpha"),
            _link(2, 0, "beta", "q.beta"),
        )
        predicted = [
            _link(1, 0, "alpha", "q.alpha"),
            _link(2, 0, "beta", "q.wrong"),
            _link(3, 0, "gamma", "q.gamma"),
        ]
        full = match_links(_set(*predicted), gold)
        for drop in range(len(predicted)):
            remaining = [l for i, l in enumerate(predicted) if i != drop]
            tp, fp, fn = match_links(_set(*remaining), gold)
            assert fp <= full[1]
            assert fn >= full[2]


def test_precision_recall_conventions():
    assert precision_recall_f1(0, 0, 0) == (1.0, 1.0, 1.0)
    p, r, f1 = precision_recall_f1(3, 1, 2)
    assert p == 3 / 4 and r == 3 / 5
    assert abs(f1 - 2 * p * r / (p + r)) < 1e-15


class TestCorpus:
    def test_scores_match_generator_plan(self, corpus_dir, corpus_manifest):
        """The generator knows which mentions must resolve and which planted
        ambiguities must fail; per-document counts follow exactly."""
        report = evaluate_corpus(corpus_dir)
        assert report.skipped == []
        by_name = {d.document: d for d in report.per_document}
        for doc in corpus_manifest["documents"]:
            score = by_name[doc["name"]]
            assert score.tp == doc["gold_count"] - doc["traps"]
            assert score.fp == doc["traps"]
            assert score.fn == doc["traps"]

    def test_report_consistency(self, corpus_dir):
        report = evaluate_corpus(corpus_dir)
        assert report.tp == sum(d.tp for d in report.per_document)
        assert report.fp == sum(d.fp for d in report.per_document)
        assert report.fn == sum(d.fn for d in report.per_document)
        p, r, f1 = precision_recall_f1(report.tp, report.fp, report.fn)
        assert abs(p - report.precision) < 1e-12
        assert abs(r - report.recall) < 1e-12
        assert abs(f1 - report.f1) < 1e-12

    def test_empty_corpus(self, tmp_path):
        report = evaluate_corpus(tmp_path)
        assert (report.tp, report.fp, report.fn) == (0, 0, 0)
        assert report.precision == report.recall == 1.0

    def test_broken_document_is_skipped_not_fatal(self, corpus_dir, tmp_path):
        import shutil

        broken = tmp_path / "corpus"
        shutil.copytree(corpus_dir, broken)
        (broken / "doc01" / "paper.pdf").write_bytes(b"garbage, not a pdf")
        report = evaluate_corpus(broken)
        assert [name for name, _ in report.skipped] == ["doc01"]
        assert len(report.per_document) == 7

    def test_report_files(self, corpus_dir, tmp_path):
        report = evaluate_corpus(corpus_dir, out_dir=tmp_path / "report")
        payload = json.loads((tmp_path / "report" / "report.json").read_text())
        assert set(payload) == {"tp", "fp", "fn", "precision", "recall", "f1",
                                "per_document", "skipped"}
        assert payload["tp"] == report.tp
        csv_text = (tmp_path / "report" / "report.csv").read_text()
        assert csv_text.splitlines()[0] == "document,tp,fp,fn,precision,recall,f1"
        assert "TOTAL" in csv_text

    def test_table_rendering(self, corpus_dir):
        table = render_table(evaluate_corpus(corpus_dir))
        lines = table.splitlines()
        assert lines[0].split()[:4] == ["document", "tp", "fp", "fn"]
        assert lines[-1].startswith("TOTAL")


def test_eval_figure_rendering(corpus_dir, tmp_path):
    from scisoftx.figures import render_eval_figure

    report = evaluate_corpus(corpus_dir)
    out = render_eval_figure(report, tmp_path / "figs" / "scores.png")
    assert out.is_file() and out.stat().st_size > 1000
