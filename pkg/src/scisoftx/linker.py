"""Mention discovery and resolution: monospace text runs to code entities.

Candidates are maximal runs of monospace spans on one line. Multi-line,
mostly-monospace regions are treated as display listings and skipped.
Ambiguous identifiers are settled by containment-tree distance to a sliding
window of recently resolved entities.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, replace

from scisoftx.code_model import CodeIndex, containment_distance, lookup, reserved_words
from scisoftx.document import DocumentModel, TextSpan

#: score assigned when no context is available to measure vicinity against
MAX_SCORE = 2**31 - 1

DEFAULT_STOPLIST = reserved_words(("java", "python"))


@dataclass(frozen=True)
class LinkerParams:
    context_window: int = 10
    block_min_lines: int = 3
    block_monospace_ratio: float = 0.8
    min_token_len: int = 2
    stoplist: frozenset[str] = DEFAULT_STOPLIST

    def to_dict(self) -> dict:
        return {
            "context_window": self.context_window,
            "block_min_lines": self.block_min_lines,
            "block_monospace_ratio": self.block_monospace_ratio,
            "min_token_len": self.min_token_len,
            "stoplist": sorted(self.stoplist),
        }

    @staticmethod
    def from_dict(data: dict) -> "LinkerParams":
        params = LinkerParams()
        return replace(
            params,
            context_window=int(data.get("context_window", params.context_window)),
            block_min_lines=int(data.get("block_min_lines", params.block_min_lines)),
            block_monospace_ratio=float(
                data.get("block_monospace_ratio", params.block_monospace_ratio)
            ),
            min_token_len=int(data.get("min_token_len", params.min_token_len)),
            stoplist=frozenset(data.get("stoplist", params.stoplist)),
        )


@dataclass(frozen=True)
class MentionCandidate:
    mention_id: str
    span_ids: tuple[str, ...]
    raw_text: str
    tokens: tuple[str, ...]
    page: int
    line: int
    char_start: int
    char_end: int


@dataclass(frozen=True)
class ResolvedLink:
    page: int
    line: int
    char_start: int
    char_end: int
    snippet: str
    token: str
    entity_id: str
    score: int
    ambiguity_count: int


_PAREN_GROUP = re.compile(r"\([^()]*\)")
_OPEN_TAIL = re.compile(r"\([^()]*$")
_SPLIT = re.compile(r"[^A-Za-z0-9_.]+")
_NUMERIC = re.compile(r"[0-9.]+")


def tokenize_identifier(raw_text: str, params: LinkerParams | None = None) -> list[str]:
    """Normalize a mention's surface text into identifier tokens."""
    params = params or LinkerParams()
    s = raw_text.replace("::", ".").replace("->", ".")
    while _PAREN_GROUP.search(s):
        s = _PAREN_GROUP.sub(" ", s)
    s = _OPEN_TAIL.sub(" ", s)
    tokens = []
    for part in _SPLIT.split(s):
        part = part.strip(".")
        if len(part) < params.min_token_len:
            continue
        if _NUMERIC.fullmatch(part):
            continue
        if part in params.stoplist:
            continue
        tokens.append(part)
    return tokens


def _line_monospace_ratio(spans: list[TextSpan]) -> float:
    total = max(s.char_end for s in spans)
    if total == 0:
        return 0.0
    mono = sum(len(s.text) for s in spans if s.font.is_monospace)
    return mono / total


def _display_block_lines(doc: DocumentModel, params: LinkerParams) -> set[tuple[int, int]]:
    """(page, line) pairs that belong to display listings."""
    blockish: dict[int, list[int]] = {}
    for (page, line), spans in doc.lines().items():
        if _line_monospace_ratio(spans) >= params.block_monospace_ratio:
            blockish.setdefault(page, []).append(line)
    excluded: set[tuple[int, int]] = set()
    for page, lines in blockish.items():
        lines.sort()
        run: list[int] = []
        for line in lines + [None]:  # type: ignore[list-item]
            if run and (line is None or line != run[-1] + 1):
                if len(run) >= params.block_min_lines:
                    excluded.update((page, l) for l in run)
                run = []
            if line is not None:
                run.append(line)
    return excluded


def extract_candidates(
    doc: DocumentModel, params: LinkerParams | None = None
) -> list[MentionCandidate]:
    """Group monospace spans into mention candidates, in reading order."""
    params = params or LinkerParams()
    excluded = _display_block_lines(doc, params)
    candidates: list[MentionCandidate] = []
    for (page, line), spans in sorted(doc.lines().items()):
        if (page, line) in excluded:
            continue
        for run in _monospace_runs(spans):
            raw = _run_text(run)
            tokens = tokenize_identifier(raw, params)
            if not tokens:
                continue
            candidates.append(
                MentionCandidate(
                    mention_id=f"m{page}-{line}-{run[0].char_start}",
                    span_ids=tuple(s.span_id for s in run),
                    raw_text=raw,
                    tokens=tuple(tokens),
                    page=page,
                    line=line,
                    char_start=run[0].char_start,
                    char_end=run[-1].char_end,
                )
            )
    return candidates


def _monospace_runs(spans: list[TextSpan]) -> list[list[TextSpan]]:
    """Maximal runs of monospace spans separated by at most a single space."""
    ordered = sorted(spans, key=lambda s: s.char_start)
    runs: list[list[TextSpan]] = []
    current: list[TextSpan] = []
    for span in ordered:
        if not span.font.is_monospace:
            continue
        if current:
            gap = span.char_start - current[-1].char_end
            if 0 <= gap <= 1 and _only_spaces_between(ordered, current[-1], span):
                current.append(span)
                continue
            runs.append(current)
        current = [span]
    if current:
        runs.append(current)
    return runs


def _only_spaces_between(spans: list[TextSpan], left: TextSpan, right: TextSpan) -> bool:
    # a character gap with no span is a whitespace hole by construction
    for s in spans:
        if left.char_end <= s.char_start and s.char_end <= right.char_start:
            if s.text != " ":
                return False
    return True


def _run_text(run: list[TextSpan]) -> str:
    parts = [run[0].text]
    for prev, span in zip(run, run[1:]):
        if span.char_start > prev.char_end:
            parts.append(" ")
        parts.append(span.text)
    return "".join(parts)


def vicinity_score(entity_id: str, context, index: CodeIndex) -> int:
    """Minimum containment distance from entity to any context entity."""
    index.entity(entity_id)
    best = MAX_SCORE
    for other in context:
        distance = containment_distance(index, entity_id, other)
        if distance < best:
            best = distance
    return best


def resolve(
    candidates,
    index: CodeIndex,
    params: LinkerParams | None = None,
) -> list[ResolvedLink]:
    """Link candidates to entities in reading order; first resolving token wins."""
    params = params or LinkerParams()
    if params.context_window < 0:
        raise ValueError("context_window must be >= 0")
    context: deque[str] = deque(maxlen=params.context_window)
    links: list[ResolvedLink] = []
    for candidate in candidates:
        for token in candidate.tokens:
            matches = lookup(index, token)
            if not matches:
                continue
            if len(matches) == 1:
                chosen, score = matches[0], 0
            else:
                scored = [
                    (vicinity_score(eid, context, index), index.sort_key(eid), eid)
                    for eid in matches
                ]
                scored.sort(key=lambda item: (item[0], item[1]))
                score, _, chosen = scored[0]
            links.append(
                ResolvedLink(
                    page=candidate.page,
                    line=candidate.line,
                    char_start=candidate.char_start,
                    char_end=candidate.char_end,
                    snippet=candidate.raw_text,
                    token=token,
                    entity_id=chosen,
                    score=score,
                    ambiguity_count=len(matches),
                )
            )
            context.append(chosen)
            break
    return links
