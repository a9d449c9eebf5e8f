"""Source-tree indexing: a containment model of named code entities.

Two language profiles ship: a brace-delimited Java-like profile backed by a
structural scanner, and an indentation-delimited Python-like profile backed
by the standard library ast module. Files that fail to parse still yield a
file entity plus a diagnostic; indexing never aborts on bad input.
"""

from __future__ import annotations

import ast
import hashlib
import keyword
import os
import re
from bisect import bisect_right
from dataclasses import dataclass, field
from pathlib import Path

from scisoftx.errors import NoProfilesSelected, NotADirectory, UnknownEntity

ENTITY_KINDS = ("package", "file", "type_def", "function", "field", "variable", "parameter")

_SKIP_DIRS = {
    "__pycache__", "node_modules", "build", "dist", "target",
    "venv", ".venv", "vendor",
}


@dataclass(frozen=True)
class CodeEntity:
    entity_id: str
    kind: str
    name: str
    qualified_name: str
    file_path: str  # repo-root-relative, "/" separators; "" for packages
    line_start: int  # 0 for packages
    line_end: int
    parent_id: str | None


@dataclass(frozen=True)
class Diagnostic:
    file_path: str
    message: str


@dataclass
class _Decl:
    """A declaration found by a profile scanner, before entity creation."""

    kind: str
    name: str
    line_start: int
    line_end: int
    children: list["_Decl"] = field(default_factory=list)


@dataclass
class _FileParse:
    declared_package: str | None
    declarations: list[_Decl]


class _ProfileParseError(Exception):
    pass


class CodeIndex:
    """Immutable-after-build containment tree with name lookup maps."""

    def __init__(self, root_dir: str, root: CodeEntity, source_digest: str):
        self.root_dir = root_dir
        self.root = root
        self.source_digest = source_digest
        self.entities: dict[str, CodeEntity] = {}
        self.children: dict[str, list[str]] = {}
        self.name_map: dict[str, set[str]] = {}
        self.qname_map: dict[str, set[str]] = {}
        self.suffix_map: dict[str, set[str]] = {}
        self.files: dict[str, str] = {}  # file_path -> file entity id
        self.diagnostics: list[Diagnostic] = []
        self._register(root)

    def add(self, entity: CodeEntity) -> None:
        if entity.parent_id is None or entity.parent_id not in self.entities:
            raise ValueError(f"entity {entity.entity_id} has no known parent")
        self._register(entity)
        self.children[entity.parent_id].append(entity.entity_id)

    def _register(self, entity: CodeEntity) -> None:
        self.entities[entity.entity_id] = entity
        self.children[entity.entity_id] = []
        self.name_map.setdefault(entity.name, set()).add(entity.entity_id)
        self.qname_map.setdefault(entity.qualified_name, set()).add(entity.entity_id)
        parts = entity.qualified_name.split(".")
        for k in range(1, len(parts) + 1):
            self.suffix_map.setdefault(".".join(parts[-k:]), set()).add(entity.entity_id)
        if entity.kind == "file":
            self.files[entity.file_path] = entity.entity_id

    def parent_of(self, entity_id: str) -> str | None:
        return self.entities[entity_id].parent_id

    def entity(self, entity_id: str) -> CodeEntity:
        try:
            return self.entities[entity_id]
        except KeyError:
            raise UnknownEntity(entity_id) from None

    def sort_key(self, entity_id: str) -> tuple:
        e = self.entities[entity_id]
        return (e.file_path, e.line_start, e.entity_id)

    def file_entity(self, file_path: str) -> CodeEntity | None:
        eid = self.files.get(file_path)
        return self.entities[eid] if eid else None

    def package_of(self, entity_id: str) -> CodeEntity:
        """Innermost package ancestor (the entity itself if it is a package)."""
        current = self.entity(entity_id)
        while current.kind != "package":
            assert current.parent_id is not None
            current = self.entities[current.parent_id]
        return current

    def counts_by_kind(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for e in self.entities.values():
            out[e.kind] = out.get(e.kind, 0) + 1
        return out


# -- profiles ---------------------------------------------------------------

JAVA_KEYWORDS = frozenset(
    """abstract assert boolean break byte case catch char class const continue
    default do double else enum extends final finally float for goto if
    implements import instanceof int interface long native new package private
    protected public return short static strictfp super switch synchronized
    this throw throws transient try void volatile while var record sealed
    permits yield true false null""".split()
)

PYTHON_KEYWORDS = frozenset(keyword.kwlist) | {"match", "case", "self", "cls"}

_CONTROL_HEADS = frozenset(
    "if for while switch catch synchronized do else try finally new return throw assert".split()
)


class JavaProfile:
    """Structural scanner for brace-delimited Java-like sources."""

    name = "java"
    extensions = (".java",)
    keywords = JAVA_KEYWORDS
    packages_from_directories = False

    _TYPE_RE = re.compile(r"\b(class|interface|enum|record)\s+(\w+)")
    _PACKAGE_RE = re.compile(r"^package\s+([\w.]+)$")

    def scan(self, text: str) -> _FileParse:
        masked = _mask_java(text)
        newlines = [m.start() for m in re.finditer("\n", masked)]

        def line_of(pos: int) -> int:
            return bisect_right(newlines, pos) + 1

        declared_package: str | None = None
        top: list[_Decl] = []
        frames: list[tuple[str, _Decl | None]] = []  # (frame kind, decl)
        seg_start = 0

        def container() -> tuple[str, list[_Decl]]:
            if not frames:
                return "file", top
            kind, decl = frames[-1]
            if decl is None:
                return "block", []
            return kind, decl.children

        for pos, ch in enumerate(masked):
            if ch == "{":
                head = masked[seg_start:pos]
                ckind, clist = container()
                decl = self._block_decl(head, seg_start, ckind, line_of)
                if decl is not None:
                    clist.append(decl)
                    frames.append((decl.kind, decl))
                else:
                    if ckind == "type_def" and head.rstrip().endswith("="):
                        # field with a brace initializer; the declarator sits
                        # left of the '='
                        for fdecl in self._field_decls(head.rstrip()[:-1], seg_start, line_of):
                            clist.append(fdecl)
                    frames.append(("block", None))
                seg_start = pos + 1
            elif ch == "}":
                if not frames:
                    raise _ProfileParseError("unbalanced braces")
                _, decl = frames.pop()
                if decl is not None:
                    decl.line_end = line_of(pos)
                seg_start = pos + 1
            elif ch == ";":
                head = masked[seg_start:pos]
                ckind, clist = container()
                if ckind == "file":
                    m = self._PACKAGE_RE.match(head.strip())
                    if m:
                        declared_package = m.group(1)
                elif ckind == "type_def":
                    for decl in self._member_decls(head, seg_start, pos, line_of):
                        clist.append(decl)
                seg_start = pos + 1
        if frames:
            raise _ProfileParseError("unbalanced braces")
        return _FileParse(declared_package, top)

    def _block_decl(self, head: str, head_offset: int, container_kind: str, line_of) -> _Decl | None:
        if container_kind in ("file", "type_def"):
            m = None
            for m in self._TYPE_RE.finditer(head):
                pass
            if m:
                return _Decl("type_def", m.group(2), line_of(head_offset + m.start(2)), 0)
        if container_kind == "type_def":
            sig = _method_signature(head)
            if sig is not None:
                name, name_pos, params = sig
                line = line_of(head_offset + name_pos)
                decl = _Decl("function", name, line, 0)
                decl.children.extend(_Decl("parameter", p, line, line) for p in params)
                return decl
        return None

    def _member_decls(self, head: str, start: int, end: int, line_of) -> list[_Decl]:
        stripped = head.strip()
        if not stripped or stripped.startswith(("import ", "package ")):
            return []
        first_word = re.match(r"\w+", stripped)
        if first_word and first_word.group(0) in _CONTROL_HEADS:
            return []
        sig = _method_signature(head)
        if sig is not None:  # abstract or interface method, no body
            name, name_pos, params = sig
            line = line_of(start + name_pos)
            decl = _Decl("function", name, line, line_of(end))
            decl.children.extend(_Decl("parameter", p, line, line) for p in params)
            return [decl]
        return self._field_decls(head, start, line_of)

    def _field_decls(self, head: str, start: int, line_of) -> list[_Decl]:
        if "(" in _split_top_level(head, "=")[0]:
            return []
        out: list[_Decl] = []
        search_from = 0
        for i, piece in enumerate(_split_top_level(head, ",")):
            piece_offset = head.find(piece, search_from)
            search_from = piece_offset + len(piece) + 1
            declarator = _split_top_level(piece, "=")[0]
            words = list(re.finditer(r"\w+", declarator))
            plain = [w for w in words if w.group(0) not in JAVA_KEYWORDS]
            if i == 0 and len(words) < 2:
                return []  # no type token: not a declaration
            if not words or not plain:
                continue
            name_match = words[-1]
            name = name_match.group(0)
            if name in JAVA_KEYWORDS or name[0].isdigit():
                continue
            line = line_of(start + piece_offset + name_match.start())
            out.append(_Decl("field", name, line, line))
        return out


def _method_signature(head: str) -> tuple[str, int, list[str]] | None:
    """Match `... name(params) [throws ...]` at the end of a statement head."""
    groups = _top_level_paren_groups(head)
    if not groups:
        return None
    open_pos, close_pos = groups[-1]
    tail = head[close_pos + 1 :]
    if tail.strip() and not re.fullmatch(r"\s*throws[\w.,\s<>\[\]]*", tail):
        return None
    before = head[:open_pos]
    m = re.search(r"(\w+)\s*$", before)
    if not m:
        return None
    name = m.group(1)
    if name in JAVA_KEYWORDS or name in _CONTROL_HEADS or name[0].isdigit():
        return None
    if "=" in before:
        return None
    return name, m.start(1), _parse_java_params(head[open_pos + 1 : close_pos])


def _parse_java_params(raw: str) -> list[str]:
    names = []
    for piece in _split_top_level(raw, ","):
        piece = re.sub(r"@\w+(\s*\([^)]*\))?", " ", piece).strip()
        if not piece:
            continue
        words = list(re.finditer(r"\w+", piece))
        if len(words) < 2:
            continue
        name = words[-1].group(0)
        if name in JAVA_KEYWORDS:
            continue
        names.append(name)
    return names


def _top_level_paren_groups(text: str) -> list[tuple[int, int]]:
    groups = []
    depth = 0
    start = -1
    for i, ch in enumerate(text):
        if ch == "(":
            if depth == 0:
                start = i
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth == 0 and start >= 0:
                groups.append((start, i))
            if depth < 0:
                depth = 0
    return groups


def _split_top_level(text: str, sep: str) -> list[str]:
    """Split on sep outside any (), [] or <> nesting."""
    parts = []
    depth = 0
    current: list[str] = []
    for ch in text:
        if ch in "(<[":
            depth += 1
        elif ch in ")>]":
            depth = max(0, depth - 1)
        if ch == sep and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(ch)
    parts.append("".join(current))
    return parts


def _mask_java(text: str) -> str:
    """Blank out comments and string/char literals, preserving offsets."""
    out = list(text)
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "/" and i + 1 < n and text[i + 1] == "/":
            while i < n and text[i] != "\n":
                out[i] = " "
                i += 1
        elif ch == "/" and i + 1 < n and text[i + 1] == "*":
            out[i] = out[i + 1] = " "
            i += 2
            while i < n and not (text[i] == "*" and i + 1 < n and text[i + 1] == "/"):
                if text[i] != "\n":
                    out[i] = " "
                i += 1
            if i < n:
                out[i] = " "
            if i + 1 < n:
                out[i + 1] = " "
            i += 2
        elif ch in "\"'":
            quote = ch
            out[i] = " "
            i += 1
            while i < n and text[i] != quote:
                if text[i] == "\\":
                    out[i] = " "
                    i += 1
                    if i < n:
                        out[i] = " "
                        i += 1
                    continue
                if text[i] != "\n":
                    out[i] = " "
                i += 1
            if i < n:
                out[i] = " "
                i += 1
        else:
            i += 1
    return "".join(out)


class PythonProfile:
    """Declaration extraction for Python sources via the ast module."""

    name = "python"
    extensions = (".py",)
    keywords = PYTHON_KEYWORDS
    packages_from_directories = True

    def scan(self, text: str) -> _FileParse:
        try:
            tree = ast.parse(text)
        except (SyntaxError, ValueError) as exc:
            raise _ProfileParseError(str(exc)) from exc
        return _FileParse(None, self._body(tree.body, "module"))

    def _body(self, statements, container: str) -> list[_Decl]:
        out: list[_Decl] = []
        for node in statements:
            if isinstance(node, (ast.FunctionDef, ast.AsyncFunctionDef)):
                decl = _Decl("function", node.name, node.lineno, node.end_lineno or node.lineno)
                decl.children.extend(self._parameters(node))
                decl.children.extend(self._body(node.body, "function"))
                out.append(decl)
            elif isinstance(node, ast.ClassDef) and container in ("module", "type_def"):
                # classes local to a function are not modeled
                decl = _Decl("type_def", node.name, node.lineno, node.end_lineno or node.lineno)
                decl.children.extend(self._body(node.body, "type_def"))
                out.append(decl)
            elif isinstance(node, (ast.Assign, ast.AnnAssign)) and container in ("module", "type_def"):
                kind = "field" if container == "type_def" else "variable"
                targets = node.targets if isinstance(node, ast.Assign) else [node.target]
                for target in targets:
                    for name_node in self._target_names(target):
                        out.append(
                            _Decl(kind, name_node.id, name_node.lineno,
                                  name_node.end_lineno or name_node.lineno)
                        )
        return out

    def _parameters(self, node) -> list[_Decl]:
        args = node.args
        collected = list(args.posonlyargs) + list(args.args) + list(args.kwonlyargs)
        if args.vararg:
            collected.append(args.vararg)
        if args.kwarg:
            collected.append(args.kwarg)
        return [
            _Decl("parameter", a.arg, a.lineno, a.end_lineno or a.lineno) for a in collected
        ]

    def _target_names(self, target) -> list[ast.Name]:
        if isinstance(target, ast.Name):
            return [target]
        if isinstance(target, (ast.Tuple, ast.List)):
            out = []
            for element in target.elts:
                out.extend(self._target_names(element))
            return out
        return []


PROFILES = {"java": JavaProfile(), "python": PythonProfile()}


def reserved_words(profile_names=("java", "python")) -> frozenset[str]:
    words: set[str] = set()
    for name in profile_names:
        words |= PROFILES[name].keywords
    return frozenset(words)


# -- index construction ------------------------------------------------------

def _entity_id(kind: str, qname: str, file_path: str, line: int, salt: int) -> str:
    basis = f"{kind}|{qname}|{file_path}|{line}|{salt}"
    return hashlib.sha256(basis.encode("utf-8")).hexdigest()[:12]


class _IndexBuilder:
    def __init__(self, root_dir: Path, digest: str):
        root_name = root_dir.name or "repo"
        root = CodeEntity(
            entity_id=_entity_id("package", root_name, "", 0, 0),
            kind="package",
            name=root_name,
            qualified_name=root_name,
            file_path="",
            line_start=0,
            line_end=0,
            parent_id=None,
        )
        self.index = CodeIndex(str(root_dir), root, digest)
        self._packages: dict[tuple[str, ...], str] = {(): root.entity_id}
        self._id_salts: dict[tuple, int] = {}

    def ensure_package(self, components: tuple[str, ...]) -> str:
        if components in self._packages:
            return self._packages[components]
        parent_id = self.ensure_package(components[:-1])
        parent = self.index.entities[parent_id]
        qname = f"{parent.qualified_name}.{components[-1]}"
        entity = CodeEntity(
            entity_id=self._fresh_id("package", qname, "", 0),
            kind="package",
            name=components[-1],
            qualified_name=qname,
            file_path="",
            line_start=0,
            line_end=0,
            parent_id=parent_id,
        )
        self.index.add(entity)
        self._packages[components] = entity.entity_id
        return entity.entity_id

    def _fresh_id(self, kind: str, qname: str, file_path: str, line: int) -> str:
        key = (kind, qname, file_path, line)
        salt = self._id_salts.get(key, 0)
        self._id_salts[key] = salt + 1
        return _entity_id(kind, qname, file_path, line, salt)

    def add_file(self, rel_path: str, package_components: tuple[str, ...],
                 parse: _FileParse | None, line_count: int) -> None:
        package_id = self.ensure_package(package_components)
        package = self.index.entities[package_id]
        stem = Path(rel_path).stem
        file_entity = CodeEntity(
            entity_id=self._fresh_id("file", f"{package.qualified_name}.{stem}", rel_path, 1),
            kind="file",
            name=Path(rel_path).name,
            qualified_name=f"{package.qualified_name}.{stem}",
            file_path=rel_path,
            line_start=1,
            line_end=max(1, line_count),
            parent_id=package_id,
        )
        self.index.add(file_entity)
        if parse is not None:
            for decl in parse.declarations:
                self._add_decl(decl, file_entity)

    def _add_decl(self, decl: _Decl, parent: CodeEntity) -> None:
        qname = f"{parent.qualified_name}.{decl.name}"
        entity = CodeEntity(
            entity_id=self._fresh_id(decl.kind, qname, parent.file_path, decl.line_start),
            kind=decl.kind,
            name=decl.name,
            qualified_name=qname,
            file_path=parent.file_path,
            line_start=decl.line_start,
            line_end=max(decl.line_end, decl.line_start),
            parent_id=parent.entity_id,
        )
        self.index.add(entity)
        for child in decl.children:
            self._add_decl(child, entity)


def tree_digest(root_dir: Path, rel_paths: list[str]) -> str:
    hasher = hashlib.sha256()
    for rel in sorted(rel_paths):
        content = (root_dir / rel).read_bytes()
        hasher.update(rel.encode("utf-8"))
        hasher.update(b":")
        hasher.update(hashlib.sha256(content).hexdigest().encode("ascii"))
        hasher.update(b"\n")
    return hasher.hexdigest()


def build_index(root_dir, language_profiles=("java", "python")) -> CodeIndex:
    """Index every source file under root_dir matching the selected profiles."""
    root = Path(root_dir)
    if not root.is_dir():
        raise NotADirectory(str(root_dir))
    profiles = []
    for name in language_profiles:
        if name not in PROFILES:
            raise NoProfilesSelected(
                f"unknown profile {name!r}; supported: {sorted(PROFILES)}"
            )
        profiles.append(PROFILES[name])
    if not profiles:
        raise NoProfilesSelected("at least one language profile is required")

    by_ext = {ext: p for p in profiles for ext in p.extensions}
    rel_paths: list[str] = []
    for dirpath, dirnames, filenames in os.walk(root):
        dirnames[:] = sorted(
            d for d in dirnames if not d.startswith(".") and d not in _SKIP_DIRS
        )
        for filename in sorted(filenames):
            if Path(filename).suffix in by_ext:
                rel = os.path.relpath(os.path.join(dirpath, filename), root)
                rel_paths.append(rel.replace(os.sep, "/"))
    rel_paths.sort()

    builder = _IndexBuilder(root, tree_digest(root, rel_paths))
    for rel in rel_paths:
        profile = by_ext[Path(rel).suffix]
        text = (root / rel).read_text(encoding="utf-8", errors="replace")
        line_count = text.count("\n") + (0 if text.endswith("\n") or not text else 1)
        try:
            parse = profile.scan(text)
        except _ProfileParseError as exc:
            builder.index.diagnostics.append(Diagnostic(rel, str(exc)))
            parse = None
        if parse is not None and parse.declared_package and not profile.packages_from_directories:
            components = tuple(parse.declared_package.split("."))
        else:
            components = tuple(p for p in Path(rel).parent.parts if p != ".")
        builder.add_file(rel, components, parse, line_count)
    return builder.index


# -- queries -----------------------------------------------------------------

def lookup(index: CodeIndex, identifier: str) -> list[str]:
    """Resolve an identifier: exact qualified name first, then qualified-name
    suffix, then simple name. Ordered by (file_path, line_start, entity_id)."""
    if not identifier:
        raise ValueError("identifier must be non-empty")
    ids = index.qname_map.get(identifier)
    if not ids:
        ids = index.suffix_map.get(identifier)
    if not ids:
        ids = index.name_map.get(identifier)
    if not ids:
        return []
    return sorted(ids, key=index.sort_key)


def containment_distance(index: CodeIndex, a: str, b: str) -> int:
    """Length of the unique path between two entities in the containment tree."""
    index.entity(a)
    index.entity(b)
    if a == b:
        return 0
    depth_a, depth_b = _depth(index, a), _depth(index, b)
    steps = 0
    while depth_a > depth_b:
        a = index.parent_of(a)  # type: ignore[assignment]
        depth_a -= 1
        steps += 1
    while depth_b > depth_a:
        b = index.parent_of(b)  # type: ignore[assignment]
        depth_b -= 1
        steps += 1
    while a != b:
        a = index.parent_of(a)  # type: ignore[assignment]
        b = index.parent_of(b)  # type: ignore[assignment]
        steps += 2
    return steps


def _depth(index: CodeIndex, entity_id: str) -> int:
    depth = 0
    current = entity_id
    while True:
        parent = index.parent_of(current)
        if parent is None:
            return depth
        current = parent
        depth += 1


# -- canonical JSON layout ----------------------------------------------------

def index_to_dict(index: CodeIndex) -> dict:
    ordered: list[CodeEntity] = []

    def walk(entity_id: str) -> None:
        ordered.append(index.entities[entity_id])
        for child in index.children.get(entity_id, []):
            walk(child)

    walk(index.root.entity_id)
    return {
        "root_dir": index.root_dir,
        "source_digest": index.source_digest,
        "entities": [
            {
                "entity_id": e.entity_id,
                "kind": e.kind,
                "name": e.name,
                "qualified_name": e.qualified_name,
                "file_path": e.file_path,
                "line_start": e.line_start,
                "line_end": e.line_end,
                "parent_id": e.parent_id,
            }
            for e in ordered
        ],
        "diagnostics": [
            {"file_path": d.file_path, "message": d.message} for d in index.diagnostics
        ],
    }


def index_from_dict(data: dict) -> CodeIndex:
    entities = data["entities"]
    if not entities:
        raise ValueError("index JSON has no entities")
    root = CodeEntity(**entities[0])
    index = CodeIndex(data["root_dir"], root, data["source_digest"])
    for raw in entities[1:]:
        index.add(CodeEntity(**raw))
    for raw in data.get("diagnostics", []):
        index.diagnostics.append(Diagnostic(raw["file_path"], raw["message"]))
    return index
