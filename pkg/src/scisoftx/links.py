"""Typed link storage and the XML interchange format (schema version 1).

Export is canonical: UTF-8, LF line endings, two-space indent, fixed
attribute order, links sorted by position then target. Import is tolerant
of attribute reordering and whitespace variation and validates the schema
version, digests, label vocabulary and per-link invariants.
"""

from __future__ import annotations

import hashlib
import re
import xml.etree.ElementTree as ET
import xml.parsers.expat
from dataclasses import dataclass, field, replace

from scisoftx.errors import (
    DigestMismatch,
    DuplicateLink,
    InvalidLabel,
    SchemaViolation,
    UnsupportedVersion,
)
from scisoftx.linker import LinkerParams

LABELS = ("defines", "implements", "uses", "configures", "evaluates", "mentions")
ORIGINS = ("auto", "manual")
SCHEMA_VERSION = "1"
LABEL_VOCABULARY = "core-v1"

_HEX64 = re.compile(r"[0-9a-f]{64}")


@dataclass(frozen=True)
class Link:
    link_id: str
    page: int
    line: int
    char_start: int
    char_end: int
    snippet: str
    target_qname: str
    target_file: str
    target_line: int
    label: str
    origin: str
    score: int

    @property
    def identity(self) -> tuple:
        return (self.page, self.line, self.char_start, self.char_end, self.target_qname)

    @property
    def sort_key(self) -> tuple:
        return (self.page, self.line, self.char_start, self.target_qname, self.char_end)


def validate_link(link: Link) -> None:
    if link.label not in LABELS:
        raise InvalidLabel(f"label {link.label!r} not in {LABELS}")
    if link.origin not in ORIGINS:
        raise ValueError(f"origin {link.origin!r} not in {ORIGINS}")
    if link.page < 1 or link.line < 1:
        raise ValueError("page and line are 1-based")
    if not (0 <= link.char_start < link.char_end):
        raise ValueError("need 0 <= char_start < char_end")
    if len(link.snippet) != link.char_end - link.char_start:
        raise ValueError("snippet length must equal char_end - char_start")
    if link.target_line < 1:
        raise ValueError("target_line is 1-based")
    if link.score < 0:
        raise ValueError("score must be non-negative")
    if link.origin == "manual" and link.score != 0:
        raise ValueError("manual links carry score 0")
    if not re.fullmatch(r"[0-9a-f]+", link.link_id):
        raise ValueError("link_id must be lowercase hex")


def make_link(
    page: int,
    line: int,
    char_start: int,
    char_end: int,
    snippet: str,
    target_qname: str,
    target_file: str,
    target_line: int,
    label: str,
    origin: str,
    score: int = 0,
) -> Link:
    """Build a validated link; the id is derived from location and target."""
    basis = f"{page}|{line}|{char_start}|{char_end}|{target_qname}"
    link = Link(
        link_id=hashlib.sha256(basis.encode("utf-8")).hexdigest()[:16],
        page=page,
        line=line,
        char_start=char_start,
        char_end=char_end,
        snippet=snippet,
        target_qname=target_qname,
        target_file=target_file,
        target_line=target_line,
        label=label,
        origin=origin,
        score=score,
    )
    validate_link(link)
    return link


@dataclass
class LinkSet:
    document_digest: str
    code_digest: str
    links: list[Link] = field(default_factory=list)
    params: LinkerParams | None = None

    def add_link(self, link: Link) -> "LinkSet":
        """Insert in order. A manual link replaces an identical auto link; an
        equal-origin duplicate is rejected; auto never displaces manual."""
        validate_link(link)
        for i, existing in enumerate(self.links):
            if existing.identity == link.identity:
                if existing.origin == link.origin:
                    raise DuplicateLink(f"duplicate {link.origin} link at {link.identity}")
                if link.origin == "manual":
                    self.links[i] = link
                    self._restore_order()
                return self
        self.links.append(link)
        self._restore_order()
        return self

    def remove(self, link_id: str) -> Link | None:
        for i, existing in enumerate(self.links):
            if existing.link_id == link_id:
                return self.links.pop(i)
        return None

    def _restore_order(self) -> None:
        self.links.sort(key=lambda l: l.sort_key)

    def __len__(self) -> int:
        return len(self.links)


def merge(auto: LinkSet, manual: LinkSet) -> LinkSet:
    """Union of the two sets; manual wins on (location, target) collisions."""
    if auto.document_digest != manual.document_digest:
        raise DigestMismatch("document digests differ")
    if auto.code_digest != manual.code_digest:
        raise DigestMismatch("code digests differ")
    result = LinkSet(auto.document_digest, auto.code_digest, list(auto.links), auto.params)
    by_identity = {link.identity: i for i, link in enumerate(result.links)}
    for link in manual.links:
        at = by_identity.get(link.identity)
        if at is None:
            result.links.append(link)
            by_identity[link.identity] = len(result.links) - 1
        else:
            result.links[at] = link
    result._restore_order()
    return result


# -- canonical XML ----------------------------------------------------------

def _escape_text(value: str) -> str:
    value = value.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
    return value.replace("\r", "&#13;")


def _escape_attr(value: str) -> str:
    value = _escape_text(value).replace('"', "&quot;")
    return value.replace("\t", "&#9;").replace("\n", "&#10;")


def export_xml(link_set: LinkSet) -> bytes:
    """Serialize to the interchange format, byte-identical across runs."""
    out = ['<?xml version="1.0" encoding="UTF-8"?>']
    out.append(
        f'<scisoftx-links version="{SCHEMA_VERSION}"'
        f' document-digest="{_escape_attr(link_set.document_digest)}"'
        f' code-digest="{_escape_attr(link_set.code_digest)}"'
        f' label-vocabulary="{LABEL_VOCABULARY}">'
    )
    if link_set.params is not None:
        p = link_set.params
        out.append(
            f'  <linker-params context-window="{p.context_window}"'
            f' block-min-lines="{p.block_min_lines}"'
            f' block-monospace-ratio="{p.block_monospace_ratio!r}"'
            f' min-token-len="{p.min_token_len}"'
            f'>{_escape_text(" ".join(sorted(p.stoplist)))}</linker-params>'
        )
    for link in sorted(link_set.links, key=lambda l: l.sort_key):
        out.append(
            f'  <link id="{link.link_id}" page="{link.page}" line="{link.line}"'
            f' char-start="{link.char_start}" char-end="{link.char_end}"'
            f' label="{link.label}" origin="{link.origin}" score="{link.score}">'
        )
        out.append(f"    <snippet>{_escape_text(link.snippet)}</snippet>")
        out.append(
            f'    <target qname="{_escape_attr(link.target_qname)}"'
            f' file="{_escape_attr(link.target_file)}" line="{link.target_line}"/>'
        )
        out.append("  </link>")
    out.append("</scisoftx-links>")
    return ("\n".join(out) + "\n").encode("utf-8")


def _parse_tracking_lines(data: bytes):
    """Parse XML via expat, keeping each element's source line for messages."""
    parser = xml.parsers.expat.ParserCreate()
    root: list = [None]
    stack: list[ET.Element] = []
    lines: dict[ET.Element, int] = {}

    def handle_start(tag, attrs):
        element = ET.Element(tag, attrs)
        lines[element] = parser.CurrentLineNumber
        if stack:
            stack[-1].append(element)
        elif root[0] is None:
            root[0] = element
        stack.append(element)

    def handle_end(tag):
        stack.pop()

    def handle_chars(text):
        if not stack:
            return
        element = stack[-1]
        if len(element):
            element[-1].tail = (element[-1].tail or "") + text
        else:
            element.text = (element.text or "") + text

    parser.StartElementHandler = handle_start
    parser.EndElementHandler = handle_end
    parser.CharacterDataHandler = handle_chars
    try:
        parser.Parse(data, True)
    except xml.parsers.expat.ExpatError as exc:
        raise SchemaViolation(str(exc), getattr(exc, "lineno", None)) from exc
    if root[0] is None:
        raise SchemaViolation("empty document")
    return root[0], lines


def _require_int(element, lines, attr: str, minimum: int) -> int:
    raw = element.get(attr)
    if raw is None:
        raise SchemaViolation(f"<{element.tag}> missing attribute {attr!r}", lines.get(element))
    try:
        value = int(raw)
    except ValueError:
        raise SchemaViolation(f"attribute {attr!r} is not an integer", lines.get(element)) from None
    if value < minimum:
        raise SchemaViolation(f"attribute {attr!r} must be >= {minimum}", lines.get(element))
    return value


def import_xml(data: bytes) -> LinkSet:
    """Parse and validate an interchange file."""
    root, lines = _parse_tracking_lines(data)
    if root.tag != "scisoftx-links":
        raise SchemaViolation(f"unexpected root element <{root.tag}>", lines.get(root))
    version = root.get("version")
    if version is None:
        raise SchemaViolation("missing schema version", lines.get(root))
    if version != SCHEMA_VERSION:
        raise UnsupportedVersion(f"schema version {version!r}")
    vocabulary = root.get("label-vocabulary")
    if vocabulary != LABEL_VOCABULARY:
        raise UnsupportedVersion(f"label vocabulary {vocabulary!r}")
    digests = {}
    for attr in ("document-digest", "code-digest"):
        value = root.get(attr)
        if value is None or not _HEX64.fullmatch(value):
            raise SchemaViolation(f"{attr} must be 64 hex characters", lines.get(root))
        digests[attr] = value

    link_set = LinkSet(digests["document-digest"], digests["code-digest"])
    seen: set[tuple] = set()
    for child in root:
        if child.tag == "linker-params":
            link_set.params = _params_from_element(child, lines)
            continue
        if child.tag != "link":
            raise SchemaViolation(f"unexpected element <{child.tag}>", lines.get(child))
        link = _link_from_element(child, lines)
        if link.identity in seen:
            raise SchemaViolation("duplicate link location/target", lines.get(child))
        seen.add(link.identity)
        link_set.links.append(link)
    link_set._restore_order()
    return link_set


def _params_from_element(element, lines) -> LinkerParams:
    params = LinkerParams()
    try:
        ratio = float(element.get("block-monospace-ratio", params.block_monospace_ratio))
    except ValueError:
        raise SchemaViolation("bad block-monospace-ratio", lines.get(element)) from None
    stoplist = frozenset((element.text or "").split())
    return replace(
        params,
        context_window=_require_int(element, lines, "context-window", 0)
        if element.get("context-window") is not None
        else params.context_window,
        block_min_lines=_require_int(element, lines, "block-min-lines", 1)
        if element.get("block-min-lines") is not None
        else params.block_min_lines,
        block_monospace_ratio=ratio,
        min_token_len=_require_int(element, lines, "min-token-len", 1)
        if element.get("min-token-len") is not None
        else params.min_token_len,
        stoplist=stoplist,
    )


def _link_from_element(element, lines) -> Link:
    line_no = lines.get(element)
    link_id = element.get("id")
    if not link_id or not re.fullmatch(r"[0-9a-f]+", link_id):
        raise SchemaViolation("link id must be lowercase hex", line_no)
    label = element.get("label")
    if label is None:
        raise SchemaViolation("link missing label", line_no)
    if label not in LABELS:
        raise InvalidLabel(f"label {label!r} not in vocabulary")
    origin = element.get("origin")
    if origin not in ORIGINS:
        raise SchemaViolation(f"origin must be one of {ORIGINS}", line_no)
    snippet_el = element.find("snippet")
    target_el = element.find("target")
    if snippet_el is None or target_el is None:
        raise SchemaViolation("link needs <snippet> and <target> children", line_no)
    qname = target_el.get("qname")
    file_path = target_el.get("file")
    if qname is None or file_path is None:
        raise SchemaViolation("<target> needs qname and file", lines.get(target_el))
    link = Link(
        link_id=link_id,
        page=_require_int(element, lines, "page", 1),
        line=_require_int(element, lines, "line", 1),
        char_start=_require_int(element, lines, "char-start", 0),
        char_end=_require_int(element, lines, "char-end", 0),
        snippet=snippet_el.text or "",
        target_qname=qname,
        target_file=file_path,
        target_line=_require_int(target_el, lines, "line", 1),
        label=label,
        origin=origin,
        score=_require_int(element, lines, "score", 0),
    )
    try:
        validate_link(link)
    except InvalidLabel:
        raise
    except ValueError as exc:
        raise SchemaViolation(str(exc), line_no) from None
    return link
