"""Document extractor: monospace detection, line clustering, span extraction."""

from __future__ import annotations

from dataclasses import dataclass

import pytest

from scisoftx.document import (
    DEFAULT_BASELINE_TOLERANCE_PT,
    cluster_lines,
    detect_monospace,
    extract_spans,
    model_from_dict,
    model_to_dict,
)
from scisoftx.errors import EncryptedDocument, MalformedDocument

from conftest import make_pdf, simple_mention_page


@pytest.mark.parametrize(
    "name,flags,expected",
    [
        ("CMTT10", 0, True),  # forced by the name-substring rule
        ("Times-Roman", 0b100010, False),  # no substring, FixedPitch unset
        ("MyCustomFont", 0b000001, True),  # FixedPitch flag set
        ("Courier", 0, True),
        ("LMTT12", 0, True),
        ("JetBrains-MonoNL", 0, True),
        ("Helvetica-Bold", 32, False),
        ("", 0, False),
        ("", 1, True),
    ],
)
def test_detect_monospace(name, flags, expected):
    assert detect_monospace(name, flags) is expected


@dataclass
class _Frag:
    y: float
    x0: float = 0.0
    seq: int = 0


class TestClusterLines:
    def test_two_clusters(self):
        frags = [_Frag(700.0), _Frag(700.4, x0=10), _Frag(688.0)]
        lines = cluster_lines(frags, 1.5)
        assert [[f.y for f in line] for line in lines] == [[700.0, 700.4], [688.0]]

    def test_empty(self):
        assert cluster_lines([], 1.5) == []

    def test_running_mean_chains_close_baselines(self):
        # hand evaluation: 700 starts the cluster (mean 700); 699 joins
        # (|699-700| = 1.0, mean 699.5); 698 joins (|698-699.5| = 1.5)
        frags = [_Frag(700.0), _Frag(699.0), _Frag(698.0)]
        lines = cluster_lines(frags, 1.5)
        assert len(lines) == 1

    def test_without_chaining_the_same_input_splits(self):
        # at tolerance 0.9 the hand evaluation gives three clusters
        frags = [_Frag(700.0), _Frag(699.0), _Frag(698.0)]
        assert len(cluster_lines(frags, 0.9)) == 3

    def test_clusters_ordered_top_to_bottom_and_x_sorted(self):
        frags = [_Frag(650.0, x0=50), _Frag(700.0, x0=90, seq=1), _Frag(700.2, x0=20, seq=2)]
        lines = cluster_lines(frags, 1.5)
        assert [f.x0 for f in lines[0]] == [20, 90]
        assert lines[1][0].y == 650.0

    def test_rejects_non_positive_tolerance(self):
        with pytest.raises(ValueError):
            cluster_lines([], 0.0)


class TestExtractSpans:
    def test_single_monospace_mention(self, tmp_path):
        data = make_pdf(tmp_path / "one.pdf", [simple_mention_page()])
        model = extract_spans(data)
        mono = [s for s in model.spans if s.font.is_monospace]
        assert [s.text for s in mono] == ["f.compute()"]
        assert model.page_count == 1
        span = mono[0]
        assert (span.char_start, span.char_end) == (8, 19)
        assert model.line_text(1, 1) == "we call f.compute() here"

    def test_empty_page(self, tmp_path):
        data = make_pdf(tmp_path / "empty.pdf", [[]])
        model = extract_spans(data)
        assert model.page_count == 1
        assert model.spans == []

    def test_two_pages_partition_by_page(self, tmp_path):
        pages = [
            [[("first page alpha", "Helvetica", 10)], [("first page beta", "Helvetica", 10)]],
            [[("second page gamma", "Helvetica", 10)]],
        ]
        data = make_pdf(tmp_path / "two.pdf", pages)
        model = extract_spans(data)
        assert model.page_count == 2
        by_page = {}
        for span in model.spans:
            by_page.setdefault(span.page, []).append(span.text)
        assert by_page == {
            1: ["first page alpha", "first page beta"],
            2: ["second page gamma"],
        }
        # line numbering restarts per page
        assert [s.line for s in model.spans] == [1, 2, 1]

    def test_determinism(self, tmp_path):
        data = make_pdf(tmp_path / "det.pdf", [simple_mention_page()])
        a, b = extract_spans(data), extract_spans(data)
        assert model_to_dict(a) == model_to_dict(b)
        assert a.source_digest == b.source_digest

    def test_monospace_purity_and_invariants(self, tmp_path):
        pages = [simple_mention_page(), [[("tail text", "Times-Roman", 9)]]]
        data = make_pdf(tmp_path / "inv.pdf", pages)
        model = extract_spans(data)
        for span in model.spans:
            assert detect_monospace(span.font.postscript_name, span.font.flags) == span.font.is_monospace
            assert span.char_start < span.char_end
            assert len(span.text) == span.char_end - span.char_start
            assert span.bbox[0] <= span.bbox[2] and span.bbox[1] <= span.bbox[3]
            assert 1 <= span.page <= model.page_count
            assert span.font.size_pt > 0

    def test_spans_do_not_overlap_within_line(self, corpus_dir):
        for pdf in sorted(corpus_dir.glob("*/paper.pdf")):
            model = extract_spans(pdf.read_bytes())
            for (page, line), spans in model.lines().items():
                spans = sorted(spans, key=lambda s: s.char_start)
                for left, right in zip(spans, spans[1:]):
                    assert left.char_end <= right.char_start

    def test_malformed_document(self):
        with pytest.raises(MalformedDocument):
            extract_spans(b"this is not a pdf at all")

    def test_truncated_document(self, tmp_path):
        data = make_pdf(tmp_path / "trunc.pdf", [simple_mention_page()])
        with pytest.raises(MalformedDocument):
            extract_spans(data[:40])

    def test_encrypted_document(self, tmp_path):
        from reportlab.pdfgen import canvas as pdf_canvas

        path = tmp_path / "enc.pdf"
        c = pdf_canvas.Canvas(str(path), encrypt="secret")
        c.drawString(72, 720, "hidden")
        c.save()
        with pytest.raises(EncryptedDocument):
            extract_spans(path.read_bytes())


class TestAgainstGeneratorManifest:
    def test_round_trip_line_text(self, corpus_dir, corpus_manifest):
        for doc in corpus_manifest["documents"]:
            model = extract_spans((corpus_dir / doc["name"] / "paper.pdf").read_bytes())
            for page_no, lines in enumerate(doc["line_texts"], start=1):
                for line_no, want in enumerate(lines, start=1):
                    assert model.line_text(page_no, line_no) == want

    def test_line_numbering_monotone(self, corpus_dir):
        for pdf in sorted(corpus_dir.glob("*/paper.pdf")):
            model = extract_spans(pdf.read_bytes())
            baselines: dict[tuple[int, int], list[float]] = {}
            for span in model.spans:
                baselines.setdefault((span.page, span.line), []).append(span.bbox[1])
            pages: dict[int, list[int]] = {}
            for page, line in baselines:
                pages.setdefault(page, []).append(line)
            for page, line_nos in pages.items():
                line_nos.sort()
                assert line_nos == list(range(1, len(line_nos) + 1))
                means = [
                    sum(baselines[(page, n)]) / len(baselines[(page, n)]) for n in line_nos
                ]
                assert all(a > b for a, b in zip(means, means[1:]))


def test_model_json_round_trip(tmp_path):
    data = make_pdf(tmp_path / "rt.pdf", [simple_mention_page()])
    model = extract_spans(data)
    assert model_from_dict(model_to_dict(model)) == model


def test_default_tolerance_is_as_documented():
    assert DEFAULT_BASELINE_TOLERANCE_PT == 1.5
