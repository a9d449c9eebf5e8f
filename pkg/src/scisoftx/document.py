"""Document extraction: PDF bytes to an ordered model of font-attributed text spans.

Positions are page/line/character based: lines are baseline clusters numbered
top to bottom, characters index into the line's reconstructed text (word gaps
between spans occupy exactly one character).
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from scisoftx.errors import EncryptedDocument, MalformedDocument
from scisoftx.pdf.content import ContentInterpreter, Fragment
from scisoftx.pdf.reader import PdfReader

#: substrings (lowercase) that mark a font name as fixed pitch even when the
#: descriptor FixedPitch flag is unset, as is common in TeX output
MONOSPACE_NAME_HINTS = (
    "courier",
    "mono",
    "consol",
    "menlo",
    "inconsolata",
    "cmtt",
    "lmtt",
    "typewriter",
    "fixed",
)

DEFAULT_BASELINE_TOLERANCE_PT = 1.5

# fraction of the font size an inter-fragment gap must reach to count as a
# word gap (one space character); below it fragments are flush
_WORD_GAP_FRACTION = 0.18
# same-font fragments further apart than this many font sizes stay separate
_MAX_JOIN_GAP_FRACTION = 2.5


def detect_monospace(postscript_name: str, flags: int) -> bool:
    """True iff the FixedPitch descriptor bit is set or the name says so."""
    if flags & 1:
        return True
    lowered = postscript_name.lower()
    return any(hint in lowered for hint in MONOSPACE_NAME_HINTS)


@dataclass(frozen=True)
class FontInfo:
    postscript_name: str
    flags: int
    size_pt: float
    is_monospace: bool

    @staticmethod
    def create(postscript_name: str, flags: int, size_pt: float) -> "FontInfo":
        return FontInfo(
            postscript_name=postscript_name,
            flags=flags,
            size_pt=size_pt,
            is_monospace=detect_monospace(postscript_name, flags),
        )


@dataclass(frozen=True)
class TextSpan:
    span_id: str
    page: int
    line: int
    char_start: int
    char_end: int
    text: str
    bbox: tuple[float, float, float, float]
    font: FontInfo


@dataclass
class DocumentModel:
    page_count: int
    spans: list[TextSpan]
    source_digest: str

    def lines(self) -> dict[tuple[int, int], list[TextSpan]]:
        """Spans grouped by (page, line), in character order."""
        grouped: dict[tuple[int, int], list[TextSpan]] = {}
        for span in self.spans:
            grouped.setdefault((span.page, span.line), []).append(span)
        return grouped

    def line_text(self, page: int, line: int) -> str:
        """Reconstructed text of one line; inter-span holes become spaces."""
        spans = [s for s in self.spans if s.page == page and s.line == line]
        if not spans:
            return ""
        out = [" "] * max(s.char_end for s in spans)
        for span in spans:
            out[span.char_start : span.char_end] = span.text
        return "".join(out)


def cluster_lines(page_spans, baseline_tolerance_pt: float = DEFAULT_BASELINE_TOLERANCE_PT):
    """Group positioned fragments of one page into baseline lines.

    A fragment joins the current cluster while its baseline lies within the
    tolerance of the cluster's running mean. Clusters come out top to bottom,
    fragments within a cluster left to right.
    """
    if baseline_tolerance_pt <= 0:
        raise ValueError("baseline_tolerance_pt must be positive")
    ordered = sorted(page_spans, key=lambda f: (-f.y, f.x0, getattr(f, "seq", 0)))
    lines: list[list] = []
    current: list = []
    mean_y = 0.0
    for frag in ordered:
        if current and abs(frag.y - mean_y) <= baseline_tolerance_pt:
            current.append(frag)
            mean_y += (frag.y - mean_y) / len(current)
        else:
            if current:
                lines.append(current)
            current = [frag]
            mean_y = frag.y
    if current:
        lines.append(current)
    for line in lines:
        line.sort(key=lambda f: (f.x0, getattr(f, "seq", 0)))
    return lines


def extract_spans(pdf_bytes: bytes) -> DocumentModel:
    """Parse a PDF into a DocumentModel. Deterministic for identical bytes."""
    digest = hashlib.sha256(pdf_bytes).hexdigest()
    try:
        reader = PdfReader(pdf_bytes)
        pages = reader.pages()
        interpreter = ContentInterpreter(reader)
        spans: list[TextSpan] = []
        counter = 0
        for page in pages:
            fragments = interpreter.run_page(page)
            for line_no, line in enumerate(cluster_lines(fragments), start=1):
                for span_parts in _assemble_spans(line):
                    counter += 1
                    spans.append(_make_span(counter, page.number, line_no, span_parts))
        return DocumentModel(page_count=len(pages), spans=spans, source_digest=digest)
    except (MalformedDocument, EncryptedDocument):
        raise
    except Exception as exc:  # any internal failure means the file is bad
        raise MalformedDocument(f"cannot parse PDF: {exc}") from exc


@dataclass
class _SpanDraft:
    fragments: list[Fragment]
    text: str
    char_start: int


def _assemble_spans(line: list[Fragment]) -> list[_SpanDraft]:
    """Merge flush same-font fragments, assign per-line character offsets."""
    drafts: list[_SpanDraft] = []
    cursor = 0
    for frag in line:
        if not drafts:
            drafts.append(_SpanDraft([frag], frag.text, 0))
            cursor = len(frag.text)
            continue
        prev = drafts[-1]
        last = prev.fragments[-1]
        gap = frag.x0 - last.x1
        word_gap = gap >= _WORD_GAP_FRACTION * min(last.size_pt, frag.size_pt)
        same_font = (
            frag.font_name == last.font_name
            and frag.font_flags == last.font_flags
            and abs(frag.size_pt - last.size_pt) < 0.01
        )
        if same_font and not word_gap:
            prev.fragments.append(frag)
            prev.text += frag.text
            cursor += len(frag.text)
        elif same_font and gap <= _MAX_JOIN_GAP_FRACTION * last.size_pt:
            prev.fragments.append(frag)
            prev.text += " " + frag.text
            cursor += 1 + len(frag.text)
        else:
            if word_gap:
                cursor += 1  # hole: exactly one character of whitespace
            drafts.append(_SpanDraft([frag], frag.text, cursor))
            cursor += len(frag.text)
    return drafts


def _make_span(counter: int, page: int, line: int, draft: _SpanDraft) -> TextSpan:
    frags = draft.fragments
    size = max(f.size_pt for f in frags)
    baseline = frags[0].y
    x0 = min(f.x0 for f in frags)
    x1 = max(f.x1 for f in frags)
    font = FontInfo.create(frags[0].font_name, frags[0].font_flags, size)
    return TextSpan(
        span_id=f"s{counter:06d}",
        page=page,
        line=line,
        char_start=draft.char_start,
        char_end=draft.char_start + len(draft.text),
        text=draft.text,
        bbox=(x0, baseline - 0.22 * size, x1, baseline + 0.78 * size),
        font=font,
    )


# -- canonical JSON layout -------------------------------------------------

def model_to_dict(model: DocumentModel) -> dict:
    return {
        "page_count": model.page_count,
        "source_digest": model.source_digest,
        "spans": [
            {
                "span_id": s.span_id,
                "page": s.page,
                "line": s.line,
                "char_start": s.char_start,
                "char_end": s.char_end,
                "text": s.text,
                "bbox": list(s.bbox),
                "font": {
                    "postscript_name": s.font.postscript_name,
                    "flags": s.font.flags,
                    "size_pt": s.font.size_pt,
                    "is_monospace": s.font.is_monospace,
                },
            }
            for s in model.spans
        ],
    }


def model_from_dict(data: dict) -> DocumentModel:
    spans = [
        TextSpan(
            span_id=s["span_id"],
            page=s["page"],
            line=s["line"],
            char_start=s["char_start"],
            char_end=s["char_end"],
            text=s["text"],
            bbox=tuple(s["bbox"]),
            font=FontInfo(
                postscript_name=s["font"]["postscript_name"],
                flags=s["font"]["flags"],
                size_pt=s["font"]["size_pt"],
                is_monospace=s["font"]["is_monospace"],
            ),
        )
        for s in data["spans"]
    ]
    return DocumentModel(
        page_count=data["page_count"],
        spans=spans,
        source_digest=data["source_digest"],
    )
