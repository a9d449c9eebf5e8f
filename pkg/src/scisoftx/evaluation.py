"""Scoring predicted link sets against gold annotations, corpus-wide."""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

from scisoftx.code_model import build_index
from scisoftx.document import extract_spans
from scisoftx.errors import DigestMismatch, ScisoftxError
from scisoftx.linker import LinkerParams
from scisoftx.links import LinkSet, import_xml
from scisoftx.pipeline import auto_link_document

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DocumentScore:
    document: str
    tp: int
    fp: int
    fn: int


@dataclass
class EvalReport:
    tp: int = 0
    fp: int = 0
    fn: int = 0
    precision: float = 1.0
    recall: float = 1.0
    f1: float = 1.0
    per_document: list[DocumentScore] = field(default_factory=list)
    skipped: list[tuple[str, str]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "tp": self.tp,
            "fp": self.fp,
            "fn": self.fn,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "per_document": [
                {"document": d.document, "tp": d.tp, "fp": d.fp, "fn": d.fn}
                for d in self.per_document
            ],
            "skipped": [{"document": name, "error": error} for name, error in self.skipped],
        }


def precision_recall_f1(tp: int, fp: int, fn: int) -> tuple[float, float, float]:
    """The 1.0-on-empty-denominator convention keeps empty corpora perfect."""
    precision = tp / (tp + fp) if tp + fp else 1.0
    recall = tp / (tp + fn) if tp + fn else 1.0
    f1 = 0.0 if precision + recall == 0 else 2 * precision * recall / (precision + recall)
    return precision, recall, f1


def match_links(predicted: LinkSet, gold: LinkSet) -> tuple[int, int, int]:
    """Greedy 1:1 matching in reading order.

    A predicted link matches a gold link on the same page and line when their
    character ranges overlap and the target qualified names agree.
    """
    if predicted.document_digest != gold.document_digest:
        raise DigestMismatch("predicted and gold sets describe different documents")
    gold_links = sorted(gold.links, key=lambda l: l.sort_key)
    taken = [False] * len(gold_links)
    tp = 0
    for p in sorted(predicted.links, key=lambda l: l.sort_key):
        for i, g in enumerate(gold_links):
            if taken[i]:
                continue
            if (
                g.page == p.page
                and g.line == p.line
                and p.char_start < g.char_end
                and g.char_start < p.char_end
                and g.target_qname == p.target_qname
            ):
                taken[i] = True
                tp += 1
                break
    fp = len(predicted.links) - tp
    fn = len(gold_links) - tp
    return tp, fp, fn


def discover_corpus(corpus_dir) -> list[tuple[str, Path, Path, Path]]:
    """(name, pdf, repo, gold.xml) per document directory, sorted by name."""
    corpus = Path(corpus_dir)
    out = []
    for doc_dir in sorted(p for p in corpus.iterdir() if p.is_dir()):
        gold = doc_dir / "gold.xml"
        pdfs = sorted(doc_dir.glob("*.pdf"))
        repos = sorted(p for p in doc_dir.iterdir() if p.is_dir())
        if gold.exists() and len(pdfs) == 1 and len(repos) == 1:
            out.append((doc_dir.name, pdfs[0], repos[0], gold))
    return out


def evaluate_corpus(corpus_dir, params: LinkerParams | None = None,
                    out_dir=None) -> EvalReport:
    """Run the full pipeline per document and aggregate scores.

    Per-document failures are recorded as skipped entries; the corpus run
    itself never aborts.
    """
    params = params or LinkerParams()
    report = EvalReport()
    for name, pdf_path, repo_path, gold_path in discover_corpus(corpus_dir):
        try:
            model = extract_spans(pdf_path.read_bytes())
            index = build_index(repo_path)
            predicted = auto_link_document(model, index, params)
            gold = import_xml(gold_path.read_bytes())
            if gold.code_digest != index.source_digest:
                logger.warning("%s: gold code digest differs from indexed tree", name)
            tp, fp, fn = match_links(predicted, gold)
        except ScisoftxError as exc:
            report.skipped.append((name, f"{type(exc).__name__}: {exc}"))
            continue
        report.per_document.append(DocumentScore(name, tp, fp, fn))
        report.tp += tp
        report.fp += fp
        report.fn += fn
    report.precision, report.recall, report.f1 = precision_recall_f1(
        report.tp, report.fp, report.fn
    )
    if out_dir is not None:
        write_report_files(report, out_dir)
    return report


def render_table(report: EvalReport) -> str:
    """Aligned per-document table with a TOTAL row."""
    headers = ["document", "tp", "fp", "fn", "P", "R", "F1"]
    rows = []
    for d in report.per_document:
        p, r, f1 = precision_recall_f1(d.tp, d.fp, d.fn)
        rows.append([d.document, str(d.tp), str(d.fp), str(d.fn),
                     f"{p:.3f}", f"{r:.3f}", f"{f1:.3f}"])
    for name, error in report.skipped:
        rows.append([name, "-", "-", "-", "-", "-", "skipped"])
    rows.append(["TOTAL", str(report.tp), str(report.fp), str(report.fn),
                 f"{report.precision:.3f}", f"{report.recall:.3f}", f"{report.f1:.3f}"])
    widths = [max(len(h), *(len(row[i]) for row in rows)) for i, h in enumerate(headers)]
    lines = ["  ".join(h.ljust(widths[i]) for i, h in enumerate(headers))]
    lines.append("  ".join("-" * w for w in widths))
    for row in rows:
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)))
    return "\n".join(lines)


def write_report_files(report: EvalReport, out_dir) -> list[Path]:
    """report.json (canonical fields) plus report.csv for spreadsheet use."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    json_path = out / "report.json"
    json_path.write_text(json.dumps(report.to_dict(), indent=2) + "\n", encoding="utf-8")
    csv_path = out / "report.csv"
    with csv_path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["document", "tp", "fp", "fn", "precision", "recall", "f1"])
        for d in report.per_document:
            p, r, f1 = precision_recall_f1(d.tp, d.fp, d.fn)
            writer.writerow([d.document, d.tp, d.fp, d.fn, f"{p:.6f}", f"{r:.6f}", f"{f1:.6f}"])
        writer.writerow(["TOTAL", report.tp, report.fp, report.fn,
                         f"{report.precision:.6f}", f"{report.recall:.6f}", f"{report.f1:.6f}"])
    return [json_path, csv_path]
