"""Synthetic evaluation corpus: rendered papers with known inline mentions.

Each generated document consists of a fixture source repo, a PDF whose code
mentions are typeset in Courier at generator-recorded positions, and a gold
link file derived from the same plan. Ground truth is exact by construction.

Documents follow one of two hand-traced flows. "Showcase" documents anchor
the context in one file before an ambiguous mention, so vicinity resolves it
the way the text intends. "Trap" documents resolve the ambiguous name early
in one file and later mean the other owner; the stale context wins and the
linker errs, keeping corpus precision realistic rather than trivially 1.0.

Run `python -m scisoftx.corpus <out_dir>` to materialize the default corpus.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
from dataclasses import dataclass, field
from pathlib import Path

from reportlab.lib.pagesizes import A4
from reportlab.pdfbase.pdfmetrics import stringWidth
from reportlab.pdfgen import canvas as pdf_canvas

from scisoftx.links import LABELS, LinkSet, export_xml, make_link

BODY_FONT = ("Helvetica", 10)
TITLE_FONT = ("Helvetica-Bold", 13)
MONO_FONT = ("Courier", 10)
BLOCK_FONT = ("Courier", 9)

_MARGIN = 72.0
_TOP_Y = 780.0
_LEADING = 16.0
LINES_PER_PAGE = 18

TRAP_DOCS = (0, 3, 5, 6)


@dataclass(frozen=True)
class Segment:
    text: str
    font: str
    size: float


@dataclass
class DocumentPlan:
    name: str
    lines: list[list[Segment]] = field(default_factory=list)
    mentions: list[dict] = field(default_factory=list)
    monospace_texts: list[str] = field(default_factory=list)
    traps: int = 0
    block_lines: list[int] = field(default_factory=list)  # 0-based flat indices


# -- fixture repositories ----------------------------------------------------

def _java_class(package: str, class_name: str, methods: list[str],
                fields: list[str]) -> tuple[str, dict[str, int]]:
    """File content plus a member-name -> 1-based declaration line map."""
    lines = [f"package {package};", ""]
    decls: dict[str, int] = {}
    lines.append(f"public class {class_name} {{")
    decls[class_name] = len(lines)
    for name in fields:
        lines.append(f"    private int {name};")
        decls[name] = len(lines)
    for name in methods:
        lines.append("")
        lines.append(f"    public int {name}(int amount) {{")
        decls[name] = len(lines)
        lines.append(f"        return amount + {len(name)};")
        lines.append("    }")
    lines.append("}")
    return "\n".join(lines) + "\n", decls


def _python_module(class_name: str, methods: list[str],
                   module_funcs: list[str]) -> tuple[str, dict[str, int]]:
    lines = ['"""Generated fixture module."""', ""]
    decls: dict[str, int] = {}
    lines.append(f"class {class_name}:")
    decls[class_name] = len(lines)
    for name in methods:
        lines.append(f"    def {name}(self, amount):")
        decls[name] = len(lines)
        lines.append(f"        return amount + {len(name)}")
        lines.append("")
    for name in module_funcs:
        lines.append("")
        lines.append(f"def {name}(amount):")
        decls[name] = len(lines)
        lines.append(f"    return amount * {len(name) + 1}")
    return "\n".join(lines) + "\n", decls


@dataclass
class RepoSpec:
    """Everything the generator knows about one fixture repository."""

    files: dict[str, str]  # rel path -> content
    targets: dict[str, tuple[str, str, int]]  # key -> (qname, path, decl line)
    ambiguous: str  # member name declared in both the first and second file
    first_owner_key: str  # its key in the alphabetically first file
    second_owner_key: str
    first_members: list[str]  # unique member keys, first file
    second_members: list[str]
    other_members: list[str]  # unique member keys elsewhere in the repo


_CLASS_POOL = ["Parser", "Engine", "Scheduler", "Planner", "Sampler",
               "Encoder", "Tracker", "Router"]
_METHOD_POOL = ["parse", "tokenize", "reset", "configure", "run", "shutdown",
                "encode", "decode", "log", "validate", "store", "sample"]


def _build_java_repo(rng: random.Random) -> RepoSpec:
    a_class, b_class, c_class = rng.sample(_CLASS_POOL, 3)
    shared = "init"
    pool = list(_METHOD_POOL)
    rng.shuffle(pool)
    a_methods, b_methods, c_methods = pool[0:3], pool[3:6], pool[6:8]
    files: dict[str, str] = {}
    targets: dict[str, tuple[str, str, int]] = {}

    def add(path: str, package: str, class_name: str, methods: list[str],
            fields: list[str]) -> None:
        content, decls = _java_class(package, class_name, methods, fields)
        files[path] = content
        class_qname = f"repo.{package}.{Path(path).stem}.{class_name}"
        targets[class_name] = (class_qname, path, decls[class_name])
        for name in methods + fields:
            targets[f"{class_name}.{name}"] = (f"{class_qname}.{name}", path, decls[name])

    add(f"core/{a_class}.java", "core", a_class, a_methods + [shared], ["capacity"])
    add(f"core/{b_class}.java", "core", b_class, b_methods, [])
    add(f"util/{c_class}.java", "util", c_class, c_methods + [shared], ["verbosity"])
    return RepoSpec(
        files=files,
        targets=targets,
        ambiguous=shared,
        first_owner_key=f"{a_class}.{shared}",
        second_owner_key=f"{c_class}.{shared}",
        first_members=[f"{a_class}.{m}" for m in a_methods] + [f"{a_class}.capacity"],
        second_members=[f"{c_class}.{m}" for m in c_methods] + [f"{c_class}.verbosity"],
        other_members=[f"{b_class}.{m}" for m in b_methods],
    )


def _build_python_repo(rng: random.Random) -> RepoSpec:
    a_class, b_class = rng.sample(_CLASS_POOL, 2)
    shared = "flush"
    pool = list(_METHOD_POOL)
    rng.shuffle(pool)
    a_methods, b_methods = pool[0:3], pool[3:5]
    funcs = pool[5:7]
    files: dict[str, str] = {}
    targets: dict[str, tuple[str, str, int]] = {}

    def add(path: str, class_name: str, methods: list[str], module_funcs: list[str]) -> None:
        content, decls = _python_module(class_name, methods, module_funcs)
        files[path] = content
        package = str(Path(path).parent).replace("/", ".")
        module_qname = f"repo.{package}.{Path(path).stem}"
        class_qname = f"{module_qname}.{class_name}"
        targets[class_name] = (class_qname, path, decls[class_name])
        for name in methods:
            targets[f"{class_name}.{name}"] = (f"{class_qname}.{name}", path, decls[name])
        for name in module_funcs:
            targets[name] = (f"{module_qname}.{name}", path, decls[name])

    add("analysis/reader.py", a_class, a_methods + [shared], funcs[:1])
    add("report/writer.py", b_class, b_methods + [shared], funcs[1:])
    return RepoSpec(
        files=files,
        targets=targets,
        ambiguous=shared,
        first_owner_key=f"{a_class}.{shared}",
        second_owner_key=f"{b_class}.{shared}",
        first_members=[f"{a_class}.{m}" for m in a_methods] + [funcs[0]],
        second_members=[f"{b_class}.{m}" for m in b_methods] + [funcs[1]],
        other_members=[],
    )


# -- paper composition -------------------------------------------------------

_FILLER = [
    "The measurement campaign covers three seasons of archived telemetry.",
    "All runs were repeated five times on the same commodity workstation.",
    "Results remain stable under moderate perturbation of the inputs.",
    "We follow the preprocessing conventions established in prior work.",
    "Data quality checks ran before every batch was accepted.",
    "The appendix lists the full configuration used in each trial.",
    "Intermediate artifacts are cached to keep reruns inexpensive.",
    "Ablations confirm that each stage contributes to the final score.",
]

_MENTION_TEMPLATES = [
    ("Decoding starts once ", " has accepted the streamed header."),
    ("Each batch is handed to ", " before any aggregation happens."),
    ("The dispatcher retries ", " whenever the backlog grows."),
    ("Calibration calls ", " with the smoothing constant fixed."),
    ("Internally, ", " owns the lifecycle of every worker."),
    ("The hot path avoids ", " except during the warm-up phase."),
    ("Our profiler attributes most allocations to ", " under load."),
    ("Checkpointing goes through ", " at the end of every epoch."),
    ("Error budgets are enforced by ", " on a per-tenant basis."),
    ("The ", " routine validates offsets before any write lands."),
    ("Cold caches are repopulated by ", " after every failover."),
    ("Back pressure is signalled through ", " once queues saturate."),
]


class _PaperBuilder:
    def __init__(self, plan: DocumentPlan, repo: RepoSpec, rng: random.Random):
        self.plan = plan
        self.repo = repo
        self.rng = rng
        self.templates = list(_MENTION_TEMPLATES)
        rng.shuffle(self.templates)
        self.fillers = list(_FILLER)
        rng.shuffle(self.fillers)

    def plain(self, text: str, font=BODY_FONT) -> None:
        self.plan.lines.append([Segment(text, *font)])

    def filler(self) -> None:
        self.plain(self.fillers.pop())

    def mono(self, text: str) -> None:
        self.plan.lines.append([Segment(text, BLOCK_FONT[0], BLOCK_FONT[1])])
        self.plan.monospace_texts.append(text)
        self.plan.block_lines.append(len(self.plan.lines) - 1)

    def mention(self, mention_text: str, target_key: str, *,
                intended_qname: str | None = None, expect_correct: bool = True,
                prefix: str | None = None, suffix: str | None = None) -> None:
        qname, path, decl_line = self.repo.targets[target_key]
        if intended_qname is not None:
            qname, path, decl_line = self.repo.targets[intended_qname]
        if prefix is None or suffix is None:
            prefix, suffix = self.templates.pop()
        self.plan.lines.append(
            [
                Segment(prefix, *BODY_FONT),
                Segment(mention_text, *MONO_FONT),
                Segment(suffix, *BODY_FONT),
            ]
        )
        self.plan.monospace_texts.append(mention_text)
        self.plan.mentions.append(
            {
                "line_index": len(self.plan.lines) - 1,
                "char_start": len(prefix),
                "char_end": len(prefix) + len(mention_text),
                "text": mention_text,
                "qname": qname,
                "file": path,
                "decl_line": decl_line,
                "label": LABELS[len(self.plan.mentions) % len(LABELS)],
                "expect_correct": expect_correct,
            }
        )
        if not expect_correct:
            self.plan.traps += 1

    def member_mention(self, key: str) -> None:
        """A uniquely resolvable mention, surface form varied."""
        simple = key.split(".")[-1]
        style = self.rng.random()
        if "." in key and style < 0.4:
            text = key
        elif "." in key and style < 0.7:
            text = key + "()"
        else:
            text = simple
        self.mention(text, key)

def plan_document(name: str, doc_index: int, rng: random.Random) -> tuple[DocumentPlan, RepoSpec]:
    repo = _build_java_repo(rng) if doc_index % 2 == 0 else _build_python_repo(rng)
    plan = DocumentPlan(name=name)
    b = _PaperBuilder(plan, repo, rng)
    trap_doc = doc_index in TRAP_DOCS

    b.plain(f"Streaming Pipelines Field Report {doc_index + 1}", TITLE_FONT)
    b.plain("Generated fixture corpus, evaluation series.")
    b.filler()

    if trap_doc:
        # cold-start ambiguity: empty context, the tie-break picks the
        # alphabetically first file, which is what this paragraph means
        b.mention(repo.ambiguous, repo.first_owner_key)
        for key in repo.first_members[:3]:
            b.member_mention(key)
        b.filler()
        self_block_member = repo.first_members[0] if not repo.other_members else repo.other_members[0]
        _emit_block(b, self_block_member)
        b.filler()
        b.member_mention(repo.second_members[0])
        # the text now means the second owner, but the first owner still sits
        # in the sliding context at distance zero and wins: a planted miss
        b.mention(repo.ambiguous, repo.second_owner_key, expect_correct=False)
        b.filler()
        extra = repo.second_members[1:2] + repo.other_members[1:2]
    else:
        # anchor the context firmly in the second file, then let vicinity
        # resolve the shared name the way the text intends
        for key in repo.second_members[:3]:
            b.member_mention(key)
        b.mention(repo.ambiguous, repo.second_owner_key)
        b.filler()
        block_member = repo.first_members[0]
        _emit_block(b, block_member)
        b.filler()
        extra = repo.first_members[1:3] + repo.other_members[:1]
    for key in extra:
        b.member_mention(key)

    # a fully monospace single line: below the listing threshold, so linked
    code_key = repo.first_members[-1] if trap_doc else repo.second_members[-1]
    line_text = f"totals = {code_key}(limit)"
    b.mention(line_text, code_key, prefix="", suffix="")

    b.plain("Legacy hooks such as ")
    plan.lines[-1].append(Segment("orphan_callback_v2()", *MONO_FONT))
    plan.lines[-1].append(Segment(" stay disabled throughout.", *BODY_FONT))
    plan.monospace_texts.append("orphan_callback_v2()")
    b.plain("Loop keywords like ")
    plan.lines[-1].append(Segment("for", *MONO_FONT))
    plan.lines[-1].append(Segment(" never form a mention of their own.", *BODY_FONT))
    plan.monospace_texts.append("for")
    b.filler()
    b.filler()
    return plan, repo


def _emit_block(b: _PaperBuilder, member_key: str) -> None:
    simple = member_key.split(".")[-1]
    b.plain("The reference implementation is reproduced below.")
    b.mono(f"handle = {member_key}(window)")
    b.mono("while handle.pending():")
    b.mono(f"    handle.{simple}_next(batch)")
    b.mono("return handle.close()")


# -- rendering ---------------------------------------------------------------

def render_pdf(path: Path, pages: list[list[list[Segment]]]) -> bytes:
    """Draw pre-measured segment lines; returns the file bytes."""
    canvas = pdf_canvas.Canvas(str(path), pagesize=A4)
    canvas.setTitle("generated fixture")
    for page_lines in pages:
        y = _TOP_Y
        for segments in page_lines:
            x = _MARGIN
            for segment in segments:
                canvas.setFont(segment.font, segment.size)
                canvas.drawString(x, y, segment.text)
                x += stringWidth(segment.text, segment.font, segment.size)
            y -= _LEADING
        canvas.showPage()
    canvas.save()
    return path.read_bytes()


def _paginate(lines: list[list[Segment]]) -> list[list[list[Segment]]]:
    pages = []
    for start in range(0, len(lines), LINES_PER_PAGE):
        pages.append(lines[start : start + LINES_PER_PAGE])
    return pages or [[]]


def _corpus_tree_digest(repo_dir: Path) -> str:
    """Digest over sorted (path, content hash) pairs, per the index scheme."""
    hasher = hashlib.sha256()
    rel_paths = sorted(
        str(p.relative_to(repo_dir)).replace("\\", "/")
        for p in repo_dir.rglob("*")
        if p.is_file()
    )
    for rel in rel_paths:
        content = (repo_dir / rel).read_bytes()
        hasher.update(rel.encode("utf-8"))
        hasher.update(b":")
        hasher.update(hashlib.sha256(content).hexdigest().encode("ascii"))
        hasher.update(b"\n")
    return hasher.hexdigest()


def generate_document(doc_dir: Path, name: str, doc_index: int,
                      rng: random.Random) -> dict:
    """Write one (pdf, repo, gold.xml) triple; returns its manifest entry."""
    plan, repo = plan_document(name, doc_index, rng)
    if plan.block_lines:
        first_page = plan.block_lines[0] // LINES_PER_PAGE
        if any(i // LINES_PER_PAGE != first_page for i in plan.block_lines):
            raise AssertionError("display listing may not straddle a page break")
    repo_dir = doc_dir / "repo"
    for rel, content in repo.files.items():
        target = repo_dir / rel
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(content, encoding="utf-8")

    pages = _paginate(plan.lines)
    pdf_path = doc_dir / "paper.pdf"
    pdf_bytes = render_pdf(pdf_path, pages)
    document_digest = hashlib.sha256(pdf_bytes).hexdigest()
    code_digest = _corpus_tree_digest(repo_dir)

    gold = LinkSet(document_digest=document_digest, code_digest=code_digest)
    mention_entries = []
    for pending in plan.mentions:
        page = pending["line_index"] // LINES_PER_PAGE + 1
        line = pending["line_index"] % LINES_PER_PAGE + 1
        gold.add_link(
            make_link(
                page=page,
                line=line,
                char_start=pending["char_start"],
                char_end=pending["char_end"],
                snippet=pending["text"],
                target_qname=pending["qname"],
                target_file=pending["file"],
                target_line=pending["decl_line"],
                label=pending["label"],
                origin="manual",
                score=0,
            )
        )
        mention_entries.append(
            {
                "page": page,
                "line": line,
                "char_start": pending["char_start"],
                "char_end": pending["char_end"],
                "text": pending["text"],
                "target_qname": pending["qname"],
                "expect_correct": pending["expect_correct"],
            }
        )
    (doc_dir / "gold.xml").write_bytes(export_xml(gold))
    line_texts = [
        ["".join(seg.text for seg in segments) for segments in page_lines]
        for page_lines in pages
    ]
    return {
        "name": name,
        "pages": len(pages),
        "gold_count": len(gold.links),
        "traps": plan.traps,
        "monospace_texts": plan.monospace_texts,
        "line_texts": line_texts,
        "mentions": mention_entries,
    }


def generate_corpus(out_dir, n_docs: int = 8, seed: int = 7) -> dict:
    """Materialize the corpus; returns (and writes) the manifest."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(seed)
    documents = []
    for i in range(n_docs):
        name = f"doc{i + 1:02d}"
        doc_dir = out / name
        doc_dir.mkdir(parents=True, exist_ok=True)
        documents.append(generate_document(doc_dir, name, i, rng))
    manifest = {"seed": seed, "documents": documents}
    (out / "manifest.json").write_text(
        json.dumps(manifest, indent=2) + "\n", encoding="utf-8"
    )
    return manifest


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description="generate the synthetic evaluation corpus")
    parser.add_argument("out_dir")
    parser.add_argument("--docs", type=int, default=8)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args(argv)
    manifest = generate_corpus(args.out_dir, args.docs, args.seed)
    total = sum(d["gold_count"] for d in manifest["documents"])
    print(f"wrote {len(manifest['documents'])} documents, {total} gold links to {args.out_dir}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
