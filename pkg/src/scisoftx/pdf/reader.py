"""PDF file reader: cross-reference tables, object retrieval, page tree."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from scisoftx.errors import EncryptedDocument, MalformedDocument
from scisoftx.pdf.objects import Lexer, Name, ObjRef, PdfStream


@dataclass
class Page:
    number: int  # 1-based
    resources: dict
    contents: bytes
    mediabox: tuple[float, float, float, float]


@dataclass
class _Xref:
    # obj num -> ("n", offset) from a table/stream, or ("c", container, index)
    # for objects living in an object stream
    entries: dict[int, tuple] = field(default_factory=dict)


class PdfReader:
    """Random-access reader over one PDF document held in memory."""

    def __init__(self, data: bytes):
        if not data.lstrip(b"\xef\xbb\xbf \r\n").startswith(b"%PDF-"):
            raise MalformedDocument("missing %PDF header")
        self.data = data
        self._cache: dict[int, object] = {}
        self._xref = _Xref()
        self.trailer: dict = {}
        try:
            self._load_xref()
        except MalformedDocument:
            self._rebuild_xref()
        if not self._xref.entries or "Root" not in self.trailer:
            self._rebuild_xref()
        if self.trailer.get("Encrypt") is not None:
            raise EncryptedDocument("document is encrypted")
        if "Root" not in self.trailer:
            raise MalformedDocument("trailer has no /Root")

    # -- object access --------------------------------------------------

    def resolve(self, obj):
        """Follow indirect references until a direct object is reached."""
        seen = 0
        while isinstance(obj, ObjRef):
            obj = self.get_object(obj.num)
            seen += 1
            if seen > 64:
                raise MalformedDocument("reference cycle")
        return obj

    def get_object(self, num: int):
        if num in self._cache:
            return self._cache[num]
        entry = self._xref.entries.get(num)
        if entry is None:
            return None
        if entry[0] == "n":
            obj = self._parse_at(entry[1], num)
        else:
            obj = self._object_from_stream(entry[1], entry[2], num)
        self._cache[num] = obj
        return obj

    def stream_data(self, obj) -> bytes:
        obj = self.resolve(obj)
        if not isinstance(obj, PdfStream):
            raise MalformedDocument("expected a stream object")
        return obj.data(self.resolve)

    def _parse_at(self, offset: int, expected_num: int):
        if offset <= 0 or offset >= len(self.data):
            raise MalformedDocument(f"bad object offset {offset}")
        lex = Lexer(self.data, offset)
        lex.skip_whitespace()
        header = re.match(rb"(\d+)\s+(\d+)\s+obj\b", self.data[lex.pos : lex.pos + 40])
        if not header:
            raise MalformedDocument(f"no object header at offset {offset}")
        lex.pos += header.end()
        obj = lex.parse_object()
        lex.skip_whitespace()
        if isinstance(obj, dict) and self.data[lex.pos : lex.pos + 6] == b"stream":
            return self._read_stream(obj, lex)
        return obj

    def _read_stream(self, dictionary: dict, lex: Lexer) -> PdfStream:
        pos = lex.pos + 6
        if self.data[pos : pos + 2] == b"\r\n":
            pos += 2
        elif self.data[pos : pos + 1] in (b"\n", b"\r"):
            pos += 1
        length = self.resolve(dictionary.get("Length"))
        raw = None
        if isinstance(length, int) and length >= 0 and pos + length <= len(self.data):
            raw = self.data[pos : pos + length]
            tail = self.data[pos + length : pos + length + 20]
            if b"endstream" not in tail and not tail.lstrip(b"\r\n ").startswith(b"endstream"):
                raw = None  # stated /Length is wrong; fall back to scanning
        if raw is None:
            end = self.data.find(b"endstream", pos)
            if end < 0:
                raise MalformedDocument("unterminated stream")
            raw = self.data[pos:end].rstrip(b"\r\n")
        return PdfStream(dictionary, raw)

    def _object_from_stream(self, container_num: int, index: int, expected_num: int):
        container = self.get_object(container_num)
        if not isinstance(container, PdfStream):
            raise MalformedDocument("object stream container missing")
        data = container.data(self.resolve)
        n = self.resolve(container.dict.get("N")) or 0
        first = self.resolve(container.dict.get("First")) or 0
        lex = Lexer(data)
        offsets = []
        for _ in range(n):
            lex.skip_whitespace()
            onum = lex.parse_object()
            lex.skip_whitespace()
            ooff = lex.parse_object()
            offsets.append((onum, ooff))
        if index >= len(offsets):
            raise MalformedDocument("object stream index out of range")
        onum, ooff = offsets[index]
        inner = Lexer(data, first + ooff)
        return inner.parse_object()

    # -- cross reference ------------------------------------------------

    def _load_xref(self) -> None:
        tail = self.data[-2048:]
        m = None
        for m in re.finditer(rb"startxref\s+(\d+)", tail):
            pass
        if m is None:
            raise MalformedDocument("startxref not found")
        offset = int(m.group(1))
        seen: set[int] = set()
        while offset and offset not in seen:
            seen.add(offset)
            offset = self._load_xref_section(offset)

    def _load_xref_section(self, offset: int) -> int:
        if offset >= len(self.data):
            raise MalformedDocument("xref offset beyond end of file")
        lex = Lexer(self.data, offset)
        lex.skip_whitespace()
        if self.data[lex.pos : lex.pos + 4] == b"xref":
            lex.pos += 4
            self._load_xref_table(lex)
            trailer = self._read_trailer(lex)
        else:
            trailer = self._load_xref_stream(offset)
        for key, value in trailer.items():
            self.trailer.setdefault(key, value)
        if "XRefStm" in trailer:  # hybrid files
            try:
                self._load_xref_section(int(self.resolve(trailer["XRefStm"])))
            except MalformedDocument:
                pass
        prev = trailer.get("Prev")
        return int(self.resolve(prev)) if prev is not None else 0

    def _load_xref_table(self, lex: Lexer) -> None:
        while True:
            lex.skip_whitespace()
            header = re.match(rb"(\d+)\s+(\d+)", self.data[lex.pos : lex.pos + 40])
            if not header:
                return
            start, count = int(header.group(1)), int(header.group(2))
            lex.pos += header.end()
            lex.skip_whitespace()
            for i in range(count):
                entry = self.data[lex.pos : lex.pos + 20]
                m = re.match(rb"(\d{10})\s(\d{5})\s([nf])", entry)
                if not m:
                    raise MalformedDocument("bad xref entry")
                lex.pos += m.end()
                lex.skip_whitespace()
                num = start + i
                if m.group(3) == b"n" and num not in self._xref.entries:
                    self._xref.entries[num] = ("n", int(m.group(1)))

    def _read_trailer(self, lex: Lexer) -> dict:
        lex.skip_whitespace()
        if self.data[lex.pos : lex.pos + 7] != b"trailer":
            raise MalformedDocument("trailer keyword not found")
        lex.pos += 7
        trailer = lex.parse_object()
        if not isinstance(trailer, dict):
            raise MalformedDocument("trailer is not a dictionary")
        return trailer

    def _load_xref_stream(self, offset: int) -> dict:
        obj = self._parse_at(offset, -1)
        if not isinstance(obj, PdfStream) or str(obj.dict.get("Type", "")) != "XRef":
            raise MalformedDocument("expected xref stream")
        data = obj.data(self.resolve)
        widths = [int(self.resolve(w)) for w in self.resolve(obj.dict.get("W", []))]
        if len(widths) != 3:
            raise MalformedDocument("xref stream /W must have three entries")
        size = int(self.resolve(obj.dict.get("Size", 0)))
        index = self.resolve(obj.dict.get("Index", [0, size]))
        index = [int(self.resolve(v)) for v in index]
        row = sum(widths)
        pos = 0

        def read_field(width: int, default: int) -> int:
            nonlocal pos
            if width == 0:
                return default
            value = int.from_bytes(data[pos : pos + width], "big")
            pos += width
            return value

        for start, count in zip(index[0::2], index[1::2]):
            for i in range(count):
                if pos + row > len(data):
                    break
                ftype = read_field(widths[0], 1)
                f2 = read_field(widths[1], 0)
                f3 = read_field(widths[2], 0)
                num = start + i
                if num in self._xref.entries:
                    continue
                if ftype == 1:
                    self._xref.entries[num] = ("n", f2)
                elif ftype == 2:
                    self._xref.entries[num] = ("c", f2, f3)
        return obj.dict

    def _rebuild_xref(self) -> None:
        """Recover by scanning the whole file for object headers."""
        self._xref = _Xref()
        self._cache.clear()
        for m in re.finditer(rb"(?m)^[^\S\n]*(\d+)\s+(\d+)\s+obj\b", self.data):
            self._xref.entries[int(m.group(1))] = ("n", m.start())
        if not self._xref.entries:
            raise MalformedDocument("no objects found")
        if "Root" not in self.trailer:
            for m in re.finditer(rb"trailer", self.data):
                try:
                    lex = Lexer(self.data, m.end())
                    trailer = lex.parse_object()
                    if isinstance(trailer, dict):
                        for key, value in trailer.items():
                            self.trailer.setdefault(key, value)
                except MalformedDocument:
                    continue
        if "Root" not in self.trailer:
            for num in sorted(self._xref.entries):
                try:
                    obj = self.get_object(num)
                except MalformedDocument:
                    continue
                if isinstance(obj, dict) and str(obj.get("Type", "")) == "Catalog":
                    self.trailer["Root"] = ObjRef(num, 0)
                    break

    # -- page tree ------------------------------------------------------

    def pages(self) -> list[Page]:
        catalog = self.resolve(self.trailer.get("Root"))
        if not isinstance(catalog, dict):
            raise MalformedDocument("catalog missing")
        root = self.resolve(catalog.get("Pages"))
        if not isinstance(root, dict):
            raise MalformedDocument("page tree missing")
        pages: list[Page] = []
        inherited = {"Resources": {}, "MediaBox": [0, 0, 612, 792]}
        self._walk_pages(root, inherited, pages, depth=0)
        if not pages:
            raise MalformedDocument("document has no pages")
        return pages

    def _walk_pages(self, node: dict, inherited: dict, out: list[Page], depth: int) -> None:
        if depth > 64:
            raise MalformedDocument("page tree too deep")
        local = dict(inherited)
        for key in ("Resources", "MediaBox"):
            if key in node:
                local[key] = self.resolve(node[key])
        node_type = str(node.get("Type", ""))
        if node_type == "Page" or ("Kids" not in node and node_type != "Pages"):
            box = [float(self.resolve(v)) for v in local["MediaBox"]]
            out.append(
                Page(
                    number=len(out) + 1,
                    resources=self.resolve(local["Resources"]) or {},
                    contents=self._page_contents(node),
                    mediabox=(box[0], box[1], box[2], box[3]),
                )
            )
            return
        for kid in self.resolve(node.get("Kids", [])) or []:
            kid = self.resolve(kid)
            if isinstance(kid, dict):
                self._walk_pages(kid, local, out, depth + 1)

    def _page_contents(self, node: dict) -> bytes:
        contents = self.resolve(node.get("Contents"))
        if contents is None:
            return b""
        if isinstance(contents, PdfStream):
            return contents.data(self.resolve)
        if isinstance(contents, list):
            parts = []
            for part in contents:
                part = self.resolve(part)
                if isinstance(part, PdfStream):
                    parts.append(part.data(self.resolve))
            return b"\n".join(parts)
        return b""
