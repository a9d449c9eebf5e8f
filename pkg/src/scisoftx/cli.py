"""Command-line entry points: extract, index, link, graph, eval, serve."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from scisoftx import __version__
from scisoftx.code_model import PROFILES, build_index, index_from_dict, index_to_dict
from scisoftx.config import ProjectConfig, load_config, resolve_port
from scisoftx.document import extract_spans, model_from_dict, model_to_dict
from scisoftx.errors import ScisoftxError
from scisoftx.evaluation import evaluate_corpus, render_table, write_report_files
from scisoftx.graphs import GRAPH_LEVELS, build_graph
from scisoftx.linker import LinkerParams
from scisoftx.links import export_xml, import_xml
from scisoftx.pipeline import auto_link_document

logger = logging.getLogger("scisoftx")


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with status 1; 2 is reserved for internal faults."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _build_parser() -> _Parser:
    parser = _Parser(prog="scisoftx", description=__doc__)
    parser.add_argument("--version", action="version", version=f"scisoftx {__version__}")
    parser.add_argument("--config", type=Path, help="project file (canonical JSON)")
    parser.add_argument("--verbose", action="store_true", help="debug logging to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", parents=[], help="parse a PDF into a document model")
    p.add_argument("--pdf", type=Path, help="input PDF (or use --config)")
    p.add_argument("--out", type=Path, default=Path("model.json"))

    p = sub.add_parser("index", help="index a source tree into a code model")
    p.add_argument("--repo", type=Path, help="repository root (or use --config)")
    p.add_argument("--profiles", default=None,
                   help=f"comma-separated subset of {sorted(PROFILES)}")
    p.add_argument("--out", type=Path, default=Path("index.json"))

    p = sub.add_parser("link", help="discover code mentions and emit a link file")
    p.add_argument("--pdf", type=Path)
    p.add_argument("--repo", type=Path)
    p.add_argument("--model", type=Path, help="reuse an extracted model.json")
    p.add_argument("--index", type=Path, help="reuse an index.json")
    p.add_argument("--profiles", default=None)
    p.add_argument("--out", type=Path, default=Path("links.xml"))

    p = sub.add_parser("graph", help="aggregate a link file into a bipartite graph")
    p.add_argument("--level", choices=GRAPH_LEVELS, required=True)
    p.add_argument("--links", type=Path, required=True)
    p.add_argument("--repo", type=Path)
    p.add_argument("--index", type=Path)
    p.add_argument("--profiles", default=None)
    p.add_argument("--out", type=Path, default=Path("graph.json"))
    p.add_argument("--render", type=Path, help="also draw the graph to this image file")

    p = sub.add_parser("eval", help="score the linker against a gold corpus")
    p.add_argument("--corpus", type=Path, required=True)
    p.add_argument("--out-dir", type=Path, default=None,
                   help="report directory (default: <corpus>/report)")
    p.add_argument("--no-figures", action="store_true")

    p = sub.add_parser("serve", help="run the local HTTP service and UI")
    p.add_argument("--port", type=int, default=None)
    p.add_argument("--pdf", type=Path)
    p.add_argument("--repo", type=Path)
    p.add_argument("--links", type=Path)
    p.add_argument("--static-dir", type=Path)
    return parser


def _load_project(args) -> ProjectConfig | None:
    if args.config is not None:
        return load_config(args.config)
    return None


def _resolve(args, attr: str, config, config_attr: str, what: str) -> Path:
    value = getattr(args, attr, None)
    if value is not None:
        return value
    if config is not None:
        return getattr(config, config_attr)
    raise ScisoftxError(f"missing --{attr.replace('_', '-')} (or provide --config with {what})")


def _profiles(args, config) -> tuple[str, ...]:
    if getattr(args, "profiles", None):
        return tuple(p.strip() for p in args.profiles.split(",") if p.strip())
    if config is not None:
        return config.profiles
    return ("java", "python")


def _linker_params(config) -> LinkerParams:
    return config.linker if config is not None else LinkerParams()


def _write_json(path: Path, payload: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def cmd_extract(args, config) -> int:
    pdf = _resolve(args, "pdf", config, "pdf_path", "pdf_path")
    model = extract_spans(Path(pdf).read_bytes())
    _write_json(args.out, model_to_dict(model))
    print(f"{args.out}: {model.page_count} pages, {len(model.spans)} spans")
    return 0


def cmd_index(args, config) -> int:
    repo = _resolve(args, "repo", config, "repo_path", "repo_path")
    index = build_index(repo, _profiles(args, config))
    _write_json(args.out, index_to_dict(index))
    counts = index.counts_by_kind()
    summary = ", ".join(f"{kind}={counts[kind]}" for kind in sorted(counts))
    print(f"{args.out}: {summary}")
    for diagnostic in index.diagnostics:
        print(f"warning: {diagnostic.file_path}: {diagnostic.message}", file=sys.stderr)
    return 0


def _load_model_and_index(args, config):
    if getattr(args, "model", None):
        model = model_from_dict(json.loads(args.model.read_text(encoding="utf-8")))
    else:
        pdf = _resolve(args, "pdf", config, "pdf_path", "pdf_path")
        model = extract_spans(Path(pdf).read_bytes())
    if getattr(args, "index", None):
        index = index_from_dict(json.loads(args.index.read_text(encoding="utf-8")))
    else:
        repo = _resolve(args, "repo", config, "repo_path", "repo_path")
        index = build_index(repo, _profiles(args, config))
    return model, index


def cmd_link(args, config) -> int:
    model, index = _load_model_and_index(args, config)
    link_set = auto_link_document(model, index, _linker_params(config))
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_bytes(export_xml(link_set))
    print(f"{args.out}: {len(link_set.links)} links")
    return 0


def cmd_graph(args, config) -> int:
    link_set = import_xml(args.links.read_bytes())
    if args.index is None and args.repo is None and config is None:
        raise ScisoftxError("graph needs --index, --repo or --config")
    if args.index is not None:
        index = index_from_dict(json.loads(args.index.read_text(encoding="utf-8")))
    else:
        repo = _resolve(args, "repo", config, "repo_path", "repo_path")
        index = build_index(repo, _profiles(args, config))
    graph = build_graph(link_set, index, args.level)
    _write_json(args.out, graph.to_dict())
    for link, reason in graph.unresolved:
        print(f"warning: unresolvable link {link.link_id}: {reason}", file=sys.stderr)
    if args.render is not None:
        from scisoftx.figures import render_graph_figure

        render_graph_figure(graph, args.render)
        print(f"{args.render}: rendered {args.level} graph")
    print(f"{args.out}: {len(graph.nodes)} nodes, {len(graph.edges)} edges")
    return 0


def cmd_eval(args, config) -> int:
    out_dir = args.out_dir or (args.corpus / "report")
    report = evaluate_corpus(args.corpus, _linker_params(config))
    write_report_files(report, out_dir)
    if not args.no_figures:
        from scisoftx.figures import render_eval_figure

        render_eval_figure(report, out_dir / "figures" / "eval_scores.png")
    print(render_table(report))
    print(f"report written to {out_dir}")
    return 0


def cmd_serve(args, config) -> int:
    from scisoftx.service import serve

    if config is None:
        if args.pdf is None or args.repo is None:
            raise ScisoftxError("serve needs --config, or --pdf and --repo")
        config = ProjectConfig(
            pdf_path=args.pdf.resolve(),
            repo_path=args.repo.resolve(),
            links_path=(args.links or Path("links.xml")).resolve(),
            static_dir=args.static_dir.resolve() if args.static_dir else None,
        )
        config.validate()
    elif args.static_dir is not None:
        config.static_dir = args.static_dir.resolve()
    port = resolve_port(args.port, config)
    print(f"serving on http://127.0.0.1:{port}", file=sys.stderr)
    serve(config, port)
    return 0


_COMMANDS = {
    "extract": cmd_extract,
    "index": cmd_index,
    "link": cmd_link,
    "graph": cmd_graph,
    "eval": cmd_eval,
    "serve": cmd_serve,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        config = _load_project(args)
        return _COMMANDS[args.command](args, config)
    except ScisoftxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception:  # internal fault: full traceback, distinct status
        import traceback

        traceback.print_exc()
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
