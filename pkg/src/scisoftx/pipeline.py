"""Composition helpers shared by the CLI, the service and the evaluator."""

from __future__ import annotations

from scisoftx.code_model import CodeIndex
from scisoftx.document import DocumentModel
from scisoftx.linker import LinkerParams, extract_candidates, resolve
from scisoftx.links import LinkSet, make_link

#: label given to automatically discovered links; the discovery step knows a
#: mention points at an entity but not in what role
AUTO_LABEL = "mentions"


def auto_link_document(
    model: DocumentModel,
    index: CodeIndex,
    params: LinkerParams | None = None,
) -> LinkSet:
    """Run mention extraction and resolution, returning an auto-origin set."""
    params = params or LinkerParams()
    candidates = extract_candidates(model, params)
    resolved = resolve(candidates, index, params)
    link_set = LinkSet(
        document_digest=model.source_digest,
        code_digest=index.source_digest,
        params=params,
    )
    for item in resolved:
        entity = index.entities[item.entity_id]
        link_set.add_link(
            make_link(
                page=item.page,
                line=item.line,
                char_start=item.char_start,
                char_end=item.char_end,
                snippet=item.snippet,
                target_qname=entity.qualified_name,
                target_file=entity.file_path,
                target_line=max(1, entity.line_start),
                label=AUTO_LABEL,
                origin="auto",
                score=item.score,
            )
        )
    return link_set
