"""Content-stream interpretation: text operators to positioned fragments."""

from __future__ import annotations

import math
from dataclasses import dataclass

from scisoftx.pdf.fonts import LoadedFont, load_font
from scisoftx.pdf.objects import Lexer, Name, PdfStream
from scisoftx.pdf.reader import Page, PdfReader

Matrix = tuple[float, float, float, float, float, float]
IDENTITY: Matrix = (1.0, 0.0, 0.0, 1.0, 0.0, 0.0)


def mat_mul(m1: Matrix, m2: Matrix) -> Matrix:
    a1, b1, c1, d1, e1, f1 = m1
    a2, b2, c2, d2, e2, f2 = m2
    return (
        a1 * a2 + b1 * c2,
        a1 * b2 + b1 * d2,
        c1 * a2 + d1 * c2,
        c1 * b2 + d1 * d2,
        e1 * a2 + f1 * c2 + e2,
        e1 * b2 + f1 * d2 + f2,
    )


def mat_apply(m: Matrix, x: float, y: float) -> tuple[float, float]:
    a, b, c, d, e, f = m
    return (a * x + c * y + e, b * x + d * y + f)


@dataclass
class Fragment:
    """One shown run of text, positioned in user space."""

    text: str
    x0: float
    x1: float
    y: float  # baseline
    size_pt: float
    font_name: str
    font_flags: int
    seq: int  # emission order, for stable sorting


class _TextState:
    def __init__(self):
        self.font: LoadedFont | None = None
        self.size = 0.0
        self.char_spacing = 0.0
        self.word_spacing = 0.0
        self.hscale = 1.0
        self.leading = 0.0
        self.rise = 0.0
        self.render_mode = 0

    def clone(self) -> "_TextState":
        out = _TextState()
        out.__dict__.update(self.__dict__)
        return out


class ContentInterpreter:
    """Executes the text-relevant subset of the page description language."""

    def __init__(self, reader: PdfReader):
        self.reader = reader
        self.fragments: list[Fragment] = []
        self._font_cache: dict[int, LoadedFont] = {}
        self._seq = 0

    def run_page(self, page: Page) -> list[Fragment]:
        self.fragments = []
        self._seq = 0
        self._execute(page.contents, page.resources, IDENTITY, depth=0)
        return self.fragments

    # -- execution -------------------------------------------------------

    def _execute(self, content: bytes, resources: dict, base_ctm: Matrix, depth: int) -> None:
        if depth > 8:
            return
        resolve = self.reader.resolve
        font_res = resolve(resources.get("Font")) or {}
        xobjects = resolve(resources.get("XObject")) or {}

        ctm = base_ctm
        stack: list[tuple[Matrix, _TextState]] = []
        ts = _TextState()
        tm: Matrix = IDENTITY
        tlm: Matrix = IDENTITY
        in_text = False

        lex = Lexer(content)
        operands: list = []
        while True:
            lex.skip_whitespace()
            if lex.pos >= len(content):
                break
            c = lex.peek()
            if c in b"/(<[" or c in b"+-.0123456789":
                try:
                    operands.append(lex.parse_object())
                except Exception:
                    lex.pos += 1
                continue
            op = lex.read_keyword()
            if not op:
                lex.pos += 1
                continue
            try:
                if op == b"q":
                    stack.append((ctm, ts.clone()))
                elif op == b"Q":
                    if stack:
                        ctm, ts = stack.pop()
                elif op == b"cm" and len(operands) >= 6:
                    m = tuple(float(v) for v in operands[-6:])
                    ctm = mat_mul(m, ctm)  # type: ignore[arg-type]
                elif op == b"BT":
                    in_text = True
                    tm = tlm = IDENTITY
                elif op == b"ET":
                    in_text = False
                elif op == b"Tf" and len(operands) >= 2:
                    ts.font = self._lookup_font(font_res, operands[-2])
                    ts.size = float(operands[-1])
                elif op == b"Td" and len(operands) >= 2:
                    tlm = mat_mul((1, 0, 0, 1, float(operands[-2]), float(operands[-1])), tlm)
                    tm = tlm
                elif op == b"TD" and len(operands) >= 2:
                    ts.leading = -float(operands[-1])
                    tlm = mat_mul((1, 0, 0, 1, float(operands[-2]), float(operands[-1])), tlm)
                    tm = tlm
                elif op == b"Tm" and len(operands) >= 6:
                    tlm = tuple(float(v) for v in operands[-6:])  # type: ignore[assignment]
                    tm = tlm
                elif op == b"T*":
                    tlm = mat_mul((1, 0, 0, 1, 0, -ts.leading), tlm)
                    tm = tlm
                elif op == b"TL" and operands:
                    ts.leading = float(operands[-1])
                elif op == b"Tc" and operands:
                    ts.char_spacing = float(operands[-1])
                elif op == b"Tw" and operands:
                    ts.word_spacing = float(operands[-1])
                elif op == b"Tz" and operands:
                    ts.hscale = float(operands[-1]) / 100.0
                elif op == b"Ts" and operands:
                    ts.rise = float(operands[-1])
                elif op == b"Tr" and operands:
                    ts.render_mode = int(operands[-1])
                elif op == b"Tj" and operands:
                    tm = self._show(operands[-1], ts, tm, ctm)
                elif op == b"'" and operands:
                    tlm = mat_mul((1, 0, 0, 1, 0, -ts.leading), tlm)
                    tm = tlm
                    tm = self._show(operands[-1], ts, tm, ctm)
                elif op == b'"' and len(operands) >= 3:
                    ts.word_spacing = float(operands[-3])
                    ts.char_spacing = float(operands[-2])
                    tlm = mat_mul((1, 0, 0, 1, 0, -ts.leading), tlm)
                    tm = tlm
                    tm = self._show(operands[-1], ts, tm, ctm)
                elif op == b"TJ" and operands and isinstance(operands[-1], list):
                    tm = self._show_array(operands[-1], ts, tm, ctm)
                elif op == b"Do" and operands:
                    self._do_xobject(xobjects, operands[-1], ctm, depth)
                elif op == b"BI":
                    # inline image: skip to the EI terminator
                    end = content.find(b"EI", lex.pos)
                    lex.pos = len(content) if end < 0 else end + 2
            except (TypeError, ValueError, IndexError):
                pass
            operands = []

    def _lookup_font(self, font_res: dict, name) -> LoadedFont | None:
        ref = font_res.get(str(name))
        if ref is None:
            return None
        key = id(ref)
        cached = self._font_cache.get(key)
        if cached is None:
            cached = load_font(self.reader.resolve(ref), self.reader.resolve)
            self._font_cache[key] = cached
        return cached

    def _do_xobject(self, xobjects: dict, name, ctm: Matrix, depth: int) -> None:
        obj = self.reader.resolve(xobjects.get(str(name)))
        if not isinstance(obj, PdfStream):
            return
        if str(self.reader.resolve(obj.dict.get("Subtype", ""))) != "Form":
            return
        matrix = self.reader.resolve(obj.dict.get("Matrix"))
        inner_ctm = ctm
        if isinstance(matrix, list) and len(matrix) == 6:
            inner_ctm = mat_mul(tuple(float(self.reader.resolve(v)) for v in matrix), ctm)  # type: ignore[arg-type]
        resources = self.reader.resolve(obj.dict.get("Resources")) or {}
        self._execute(obj.data(self.reader.resolve), resources, inner_ctm, depth + 1)

    # -- text showing ------------------------------------------------------

    def _show(self, raw, ts: _TextState, tm: Matrix, ctm: Matrix) -> Matrix:
        if not isinstance(raw, bytes) or ts.font is None or ts.render_mode == 3:
            return tm
        return self._emit_glyphs(ts.font.decode(raw), ts, tm, ctm)

    def _show_array(self, items: list, ts: _TextState, tm: Matrix, ctm: Matrix) -> Matrix:
        if ts.font is None:
            return tm
        glyphs: list[tuple[int, str]] = []
        space_em = ts.font.space_width
        for item in items:
            if isinstance(item, bytes):
                glyphs.extend(ts.font.decode(item))
            elif isinstance(item, (int, float)):
                # kern adjustment; a wide positive gap reads as a word break
                gap_em = -float(item) / 1000.0
                if gap_em > 0.5 * space_em and glyphs and glyphs[-1][1] != " ":
                    glyphs.append((-1, " "))
                glyphs.append((-2, gap_em))  # type: ignore[arg-type]
        return self._emit_glyphs(glyphs, ts, tm, ctm, hidden=ts.render_mode == 3)

    def _emit_glyphs(
        self,
        glyphs: list,
        ts: _TextState,
        tm: Matrix,
        ctm: Matrix,
        hidden: bool = False,
    ) -> Matrix:
        if not glyphs:
            return tm
        font = ts.font
        assert font is not None
        trm0 = mat_mul(tm, ctm)
        x0, y0 = mat_apply(trm0, 0.0, ts.rise)
        a, b, c, d, _, _ = trm0
        size_pt = math.hypot(c * ts.size, d * ts.size) or ts.size
        chars: list[str] = []
        advance = 0.0  # text-space advance
        for glyph in glyphs:
            code, payload = glyph
            if code == -2:
                advance += float(payload) * ts.size * ts.hscale
                continue
            if code == -1:
                chars.append(" ")
                continue
            w0 = font.width(code)
            tx = w0 * ts.size + ts.char_spacing
            if code == 32 and not font.two_byte:
                tx += ts.word_spacing
            advance += tx * ts.hscale
            chars.append(payload)
        end_tm = mat_mul((1, 0, 0, 1, advance, 0), tm)
        if not hidden:
            text = "".join(chars)
            if text.strip():
                ex, ey = mat_apply(mat_mul(end_tm, ctm), 0.0, ts.rise)
                self.fragments.append(
                    Fragment(
                        text=text,
                        x0=min(x0, ex),
                        x1=max(x0, ex),
                        y=y0,
                        size_pt=size_pt,
                        font_name=font.postscript_name,
                        font_flags=font.flags,
                        seq=self._seq,
                    )
                )
                self._seq += 1
        return end_tm
