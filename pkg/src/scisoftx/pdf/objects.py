"""Low-level PDF object model: lexer, basic objects and stream filters.

Covers the subset of ISO 32000 needed to read text from ordinary,
unencrypted documents: all basic object types, FlateDecode (with PNG
predictors), ASCII85Decode, ASCIIHexDecode and RunLengthDecode.
"""

from __future__ import annotations

import base64
import re
import zlib
from dataclasses import dataclass

from scisoftx.errors import MalformedDocument

WHITESPACE = b"\x00\t\n\x0c\r "
DELIMITERS = b"()<>[]{}/%"


class Name(str):
    """A PDF name object (stored without the leading slash)."""

    __slots__ = ()


@dataclass(frozen=True)
class ObjRef:
    num: int
    gen: int


class PdfStream:
    """A stream object: its dictionary plus raw (still encoded) bytes."""

    def __init__(self, dictionary: dict, raw: bytes):
        self.dict = dictionary
        self.raw = raw
        self._decoded: bytes | None = None

    def data(self, resolve=lambda obj: obj) -> bytes:
        """Decoded stream bytes; `resolve` dereferences indirect objects."""
        if self._decoded is None:
            filters = resolve(self.dict.get("Filter"))
            if filters is None:
                filters = []
            elif isinstance(filters, Name):
                filters = [filters]
            parms = resolve(self.dict.get("DecodeParms"))
            if parms is None or isinstance(parms, dict):
                parms = [parms] * len(filters)
            data = self.raw
            for filt, parm in zip(filters, parms):
                data = _apply_filter(str(filt), data, resolve(parm) or {}, resolve)
            self._decoded = data
        return self._decoded


def _apply_filter(name: str, data: bytes, parm: dict, resolve) -> bytes:
    if name == "FlateDecode" or name == "Fl":
        try:
            out = zlib.decompress(data)
        except zlib.error:
            # salvage truncated streams
            out = zlib.decompressobj().decompress(data)
        return _apply_predictor(out, parm, resolve)
    if name == "ASCII85Decode" or name == "A85":
        payload = data.strip()
        if payload.endswith(b"~>"):
            payload = payload[:-2]
        return base64.a85decode(re.sub(rb"\s", b"", payload))
    if name == "ASCIIHexDecode" or name == "AHx":
        payload = re.sub(rb"[\s>]", b"", data)
        if len(payload) % 2:
            payload += b"0"
        return bytes.fromhex(payload.decode("ascii"))
    if name == "RunLengthDecode" or name == "RL":
        return _run_length_decode(data)
    raise MalformedDocument(f"unsupported stream filter /{name}")


def _apply_predictor(data: bytes, parm: dict, resolve) -> bytes:
    predictor = resolve(parm.get("Predictor", 1)) or 1
    if predictor <= 1:
        return data
    columns = resolve(parm.get("Columns", 1)) or 1
    colors = resolve(parm.get("Colors", 1)) or 1
    bpc = resolve(parm.get("BitsPerComponent", 8)) or 8
    if predictor < 10:
        raise MalformedDocument(f"unsupported predictor {predictor}")
    # PNG predictors: each row is prefixed with a filter-type byte
    bpp = max(1, colors * bpc // 8)
    row_len = (columns * colors * bpc + 7) // 8
    out = bytearray()
    prev = bytearray(row_len)
    pos = 0
    while pos + 1 <= len(data):
        ftype = data[pos]
        row = bytearray(data[pos + 1 : pos + 1 + row_len])
        pos += 1 + row_len
        if ftype == 1:  # Sub
            for i in range(bpp, len(row)):
                row[i] = (row[i] + row[i - bpp]) & 0xFF
        elif ftype == 2:  # Up
            for i in range(len(row)):
                row[i] = (row[i] + prev[i]) & 0xFF
        elif ftype == 3:  # Average
            for i in range(len(row)):
                left = row[i - bpp] if i >= bpp else 0
                row[i] = (row[i] + (left + prev[i]) // 2) & 0xFF
        elif ftype == 4:  # Paeth
            for i in range(len(row)):
                a = row[i - bpp] if i >= bpp else 0
                b = prev[i]
                c = prev[i - bpp] if i >= bpp else 0
                p = a + b - c
                pa, pb, pc = abs(p - a), abs(p - b), abs(p - c)
                pred = a if (pa <= pb and pa <= pc) else (b if pb <= pc else c)
                row[i] = (row[i] + pred) & 0xFF
        elif ftype != 0:
            raise MalformedDocument(f"bad PNG predictor row type {ftype}")
        out.extend(row)
        prev = row
    return bytes(out)


def _run_length_decode(data: bytes) -> bytes:
    out = bytearray()
    i = 0
    while i < len(data):
        length = data[i]
        if length == 128:
            break
        if length < 128:
            out.extend(data[i + 1 : i + 2 + length])
            i += 2 + length
        else:
            out.extend(data[i + 1 : i + 2] * (257 - length))
            i += 2
    return bytes(out)


_STRING_ESCAPES = {
    ord("n"): b"\n",
    ord("r"): b"\r",
    ord("t"): b"\t",
    ord("b"): b"\b",
    ord("f"): b"\x0c",
    ord("("): b"(",
    ord(")"): b")",
    ord("\\"): b"\\",
}


class Lexer:
    """Cursor-based reader for PDF syntax inside a bytes buffer."""

    def __init__(self, data: bytes, pos: int = 0):
        self.data = data
        self.pos = pos

    def skip_whitespace(self) -> None:
        data, n = self.data, len(self.data)
        while self.pos < n:
            c = data[self.pos]
            if c in WHITESPACE:
                self.pos += 1
            elif c == 0x25:  # '%' comment runs to end of line
                while self.pos < n and data[self.pos] not in b"\r\n":
                    self.pos += 1
            else:
                return

    def peek(self) -> int:
        return self.data[self.pos] if self.pos < len(self.data) else -1

    def read_keyword(self) -> bytes:
        start = self.pos
        data, n = self.data, len(self.data)
        while self.pos < n and data[self.pos] not in WHITESPACE and data[self.pos] not in DELIMITERS:
            self.pos += 1
        return data[start : self.pos]

    def parse_object(self):
        self.skip_whitespace()
        if self.pos >= len(self.data):
            raise MalformedDocument("unexpected end of data")
        c = self.data[self.pos]
        if c == ord("/"):
            return self._parse_name()
        if c == ord("("):
            return self._parse_literal_string()
        if c == ord("<"):
            if self.data[self.pos : self.pos + 2] == b"<<":
                return self._parse_dict()
            return self._parse_hex_string()
        if c == ord("["):
            return self._parse_array()
        if c in b"+-.0123456789":
            return self._parse_number_or_ref()
        keyword = self.read_keyword()
        if keyword == b"true":
            return True
        if keyword == b"false":
            return False
        if keyword == b"null":
            return None
        raise MalformedDocument(f"unexpected token {keyword[:20]!r} at offset {self.pos}")

    def _parse_name(self) -> Name:
        self.pos += 1  # '/'
        start = self.pos
        data, n = self.data, len(self.data)
        while self.pos < n and data[self.pos] not in WHITESPACE and data[self.pos] not in DELIMITERS:
            self.pos += 1
        raw = data[start : self.pos]
        if b"#" in raw:
            raw = re.sub(rb"#([0-9A-Fa-f]{2})", lambda m: bytes([int(m.group(1), 16)]), raw)
        return Name(raw.decode("latin-1"))

    def _parse_literal_string(self) -> bytes:
        self.pos += 1  # '('
        out = bytearray()
        depth = 1
        data, n = self.data, len(self.data)
        while self.pos < n:
            c = data[self.pos]
            if c == ord("\\"):
                self.pos += 1
                if self.pos >= n:
                    break
                e = data[self.pos]
                if e in _STRING_ESCAPES:
                    out.extend(_STRING_ESCAPES[e])
                    self.pos += 1
                elif e in b"01234567":
                    digits = bytearray()
                    while self.pos < n and len(digits) < 3 and data[self.pos] in b"01234567":
                        digits.append(data[self.pos])
                        self.pos += 1
                    out.append(int(digits.decode(), 8) & 0xFF)
                elif e in b"\r\n":  # line continuation
                    self.pos += 1
                    if e == ord("\r") and self.pos < n and data[self.pos] == ord("\n"):
                        self.pos += 1
                else:
                    out.append(e)
                    self.pos += 1
            elif c == ord("("):
                depth += 1
                out.append(c)
                self.pos += 1
            elif c == ord(")"):
                depth -= 1
                self.pos += 1
                if depth == 0:
                    return bytes(out)
                out.append(c)
            elif c == ord("\r"):
                # EOL inside a string is read as \n
                out.append(ord("\n"))
                self.pos += 1
                if self.pos < n and data[self.pos] == ord("\n"):
                    self.pos += 1
            else:
                out.append(c)
                self.pos += 1
        raise MalformedDocument("unterminated string literal")

    def _parse_hex_string(self) -> bytes:
        self.pos += 1  # '<'
        end = self.data.find(b">", self.pos)
        if end < 0:
            raise MalformedDocument("unterminated hex string")
        payload = re.sub(rb"\s", b"", self.data[self.pos : end])
        self.pos = end + 1
        if len(payload) % 2:
            payload += b"0"
        try:
            return bytes.fromhex(payload.decode("ascii"))
        except ValueError as exc:
            raise MalformedDocument("invalid hex string") from exc

    def _parse_array(self) -> list:
        self.pos += 1  # '['
        items = []
        while True:
            self.skip_whitespace()
            if self.peek() == ord("]"):
                self.pos += 1
                return items
            if self.peek() == -1:
                raise MalformedDocument("unterminated array")
            items.append(self.parse_object())

    def _parse_dict(self) -> dict:
        self.pos += 2  # '<<'
        out: dict = {}
        while True:
            self.skip_whitespace()
            if self.data[self.pos : self.pos + 2] == b">>":
                self.pos += 2
                return out
            if self.peek() != ord("/"):
                raise MalformedDocument(f"expected name key in dictionary at offset {self.pos}")
            key = self._parse_name()
            out[str(key)] = self.parse_object()

    def _parse_number_or_ref(self):
        start = self.pos
        data, n = self.data, len(self.data)
        while self.pos < n and data[self.pos] in b"+-.0123456789eE":
            self.pos += 1
        token = data[start : self.pos]
        try:
            if b"." in token or b"e" in token or b"E" in token:
                value = float(token)
            else:
                value = int(token)
        except ValueError as exc:
            raise MalformedDocument(f"bad number {token!r}") from exc
        # 'INT INT R' is an indirect reference; look ahead non-destructively
        if isinstance(value, int) and value >= 0:
            mark = self.pos
            self.skip_whitespace()
            start2 = self.pos
            while self.pos < n and data[self.pos] in b"0123456789":
                self.pos += 1
            gen_tok = data[start2 : self.pos]
            if gen_tok:
                self.skip_whitespace()
                if self.data[self.pos : self.pos + 1] == b"R" and (
                    self.pos + 1 >= n
                    or data[self.pos + 1] in WHITESPACE
                    or data[self.pos + 1] in DELIMITERS
                ):
                    self.pos += 1
                    return ObjRef(value, int(gen_tok))
            self.pos = mark
        return value
