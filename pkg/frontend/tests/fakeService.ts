/** In-memory stand-in for the scisoftx service, wired into global fetch.
 * It mirrors the real API's contracts: link identity rules, 409 on
 * duplicates, 400 on unknown labels, graph aggregation, XML-export count. */

import type {
  CodeEntity,
  CodeIndexPayload,
  DocumentModel,
  GraphPayload,
  Link,
  ManualLinkBody,
} from "../src/types.js";

export const VOCABULARY = [
  "defines",
  "implements",
  "uses",
  "configures",
  "evaluates",
  "mentions",
];

const DOC_DIGEST = "a".repeat(64);
const CODE_DIGEST = "b".repeat(64);

function span(
  id: string,
  page: number,
  line: number,
  charStart: number,
  text: string,
  mono = false,
) {
  return {
    span_id: id,
    page,
    line,
    char_start: charStart,
    char_end: charStart + text.length,
    text,
    bbox: [72, 700 - line * 16, 300, 712 - line * 16] as [number, number, number, number],
    font: {
      postscript_name: mono ? "Courier" : "Helvetica",
      flags: mono ? 35 : 32,
      size_pt: 10,
      is_monospace: mono,
    },
  };
}

export function fixtureModel(): DocumentModel {
  return {
    page_count: 2,
    source_digest: DOC_DIGEST,
    spans: [
      span("s1", 1, 1, 0, "The run starts in "),
      span("s2", 1, 1, 18, "Engine.run()", true),
      span("s3", 1, 1, 30, " every time."),
      span("s4", 1, 2, 0, "Input is read by "),
      span("s5", 1, 2, 17, "Loader.load", true),
      span("s6", 1, 2, 28, " beforehand."),
      span("s7", 2, 1, 0, "Cleanup lives in "),
      span("s8", 2, 1, 17, "Engine.stop()", true),
      span("s9", 2, 1, 30, "."),
    ],
  };
}

function entity(
  id: string,
  kind: CodeEntity["kind"],
  name: string,
  qname: string,
  file: string,
  lineStart: number,
  lineEnd: number,
  parent: string | null,
): CodeEntity {
  return {
    entity_id: id,
    kind,
    name,
    qualified_name: qname,
    file_path: file,
    line_start: lineStart,
    line_end: lineEnd,
    parent_id: parent,
  };
}

export function fixtureIndex(): CodeIndexPayload {
  return {
    root_dir: "/work/repo",
    source_digest: CODE_DIGEST,
    entities: [
      entity("e-root", "package", "repo", "repo", "", 0, 0, null),
      entity("e-core", "package", "core", "repo.core", "", 0, 0, "e-root"),
      entity("e-io", "package", "io", "repo.io", "", 0, 0, "e-root"),
      entity("e-engine-file", "file", "Engine.java", "repo.core.Engine", "core/Engine.java", 1, 30, "e-core"),
      entity("e-engine", "type_def", "Engine", "repo.core.Engine.Engine", "core/Engine.java", 3, 28, "e-engine-file"),
      entity("e-run", "function", "run", "repo.core.Engine.Engine.run", "core/Engine.java", 5, 9, "e-engine"),
      entity("e-stop", "function", "stop", "repo.core.Engine.Engine.stop", "core/Engine.java", 11, 14, "e-engine"),
      entity("e-loader-file", "file", "Loader.java", "repo.io.Loader", "io/Loader.java", 1, 20, "e-io"),
      entity("e-loader", "type_def", "Loader", "repo.io.Loader.Loader", "io/Loader.java", 3, 18, "e-loader-file"),
      entity("e-load", "function", "load", "repo.io.Loader.Loader.load", "io/Loader.java", 6, 10, "e-loader"),
    ],
  };
}

const SOURCES: Record<string, string> = {
  "core/Engine.java": "package core;\n\npublic class Engine {\n\n    public void run() {\n    }\n\n    public void stop() {\n    }\n}\n",
  "io/Loader.java": "package io;\n\npublic class Loader {\n\n    public void load() {\n    }\n}\n",
};

let linkCounter = 0;

function makeLink(body: ManualLinkBody, origin: "auto" | "manual", score = 0): Link {
  linkCounter += 1;
  return {
    link_id: `fade${String(linkCounter).padStart(4, "0")}`,
    page: body.page,
    line: body.line,
    char_start: body.char_start,
    char_end: body.char_end,
    snippet: body.snippet,
    target_qname: body.target_qname,
    target_file: body.target_file,
    target_line: body.target_line,
    label: body.label,
    origin,
    score,
  };
}

export class FakeService {
  model = fixtureModel();
  index = fixtureIndex();
  links: Link[] = [];
  exportCalls = 0;
  exportedLinkIds: string[] = [];

  seedAutoLinks(): void {
    this.links = [
      makeLink(
        {
          page: 1, line: 1, char_start: 18, char_end: 30, snippet: "Engine.run()",
          target_qname: "repo.core.Engine.Engine.run", target_file: "core/Engine.java",
          target_line: 5, label: "mentions",
        },
        "auto",
      ),
      makeLink(
        {
          page: 1, line: 2, char_start: 17, char_end: 28, snippet: "Loader.load",
          target_qname: "repo.io.Loader.Loader.load", target_file: "io/Loader.java",
          target_line: 6, label: "mentions",
        },
        "auto",
      ),
    ];
  }

  private identity(link: { page: number; line: number; char_start: number; char_end: number; target_qname: string }) {
    return [link.page, link.line, link.char_start, link.char_end, link.target_qname].join("|");
  }

  private linksPayload() {
    return {
      document_digest: DOC_DIGEST,
      code_digest: CODE_DIGEST,
      label_vocabulary: VOCABULARY,
      links: [...this.links].sort(
        (a, b) =>
          a.page - b.page || a.line - b.line || a.char_start - b.char_start ||
          a.target_qname.localeCompare(b.target_qname),
      ),
    };
  }

  private graph(level: "file" | "package"): GraphPayload {
    const nodes = new Map<string, { node_id: string; kind: GraphPayload["nodes"][number]["kind"]; label: string }>();
    const weights = new Map<string, number>();
    for (const link of this.links) {
      const packageQname = link.target_file.startsWith("core/") ? "repo.core" : "repo.io";
      const source = level === "file"
        ? { node_id: `m:${link.page}:${link.line}:${link.char_start}`, kind: "mention" as const, label: `p${link.page}:l${link.line} ${link.snippet}` }
        : { node_id: `p:${link.page}`, kind: "page" as const, label: `page ${link.page}` };
      const target = level === "file"
        ? { node_id: `f:${link.target_file}`, kind: "file" as const, label: link.target_file }
        : { node_id: `pkg:${packageQname}`, kind: "package" as const, label: packageQname };
      nodes.set(source.node_id, source);
      nodes.set(target.node_id, target);
      const key = `${source.node_id}->${target.node_id}`;
      weights.set(key, (weights.get(key) ?? 0) + 1);
    }
    return {
      level,
      nodes: [...nodes.values()].sort((a, b) => a.node_id.localeCompare(b.node_id)),
      edges: [...weights.entries()]
        .map(([key, weight]) => {
          const [source, target] = key.split("->");
          return { source, target, weight };
        })
        .sort((a, b) => a.source.localeCompare(b.source) || a.target.localeCompare(b.target)),
    };
  }

  /** fetch-compatible handler. */
  readonly fetch = async (input: RequestInfo | URL, init?: RequestInit): Promise<Response> => {
    const url = typeof input === "string" ? input : input.toString();
    const method = init?.method ?? "GET";
    const path = url.replace(/^https?:\/\/[^/]+/, "");

    const json = (body: unknown, status = 200) =>
      new Response(JSON.stringify(body), {
        status,
        headers: { "content-type": "application/json" },
      });

    if (method === "GET" && path === "/api/document") return json(this.model);
    if (method === "GET" && path === "/api/code/entities") return json(this.index);
    if (method === "GET" && path.startsWith("/api/code/source")) {
      const file = decodeURIComponent(path.split("=", 2)[1] ?? "");
      const source = SOURCES[file];
      if (source === undefined) return json({ code: "NotFound", message: file }, 404);
      return new Response(source, { status: 200, headers: { "content-type": "text/plain" } });
    }
    if (method === "GET" && path === "/api/links") return json(this.linksPayload());
    if (method === "POST" && path === "/api/links/auto") {
      const manual = this.links.filter((l) => l.origin === "manual");
      this.seedAutoLinks();
      this.links.push(...manual);
      return json({ ...this.linksPayload(), auto_discovered: 2 });
    }
    if (method === "POST" && path === "/api/links") {
      const body = JSON.parse(String(init?.body)) as ManualLinkBody;
      if (!VOCABULARY.includes(body.label)) {
        return json({ code: "InvalidLabel", message: `label ${body.label}` }, 400);
      }
      const candidate = makeLink(body, "manual");
      const existing = this.links.findIndex((l) => this.identity(l) === this.identity(candidate));
      if (existing >= 0) {
        if (this.links[existing].origin === "manual") {
          return json({ code: "DuplicateLink", message: "duplicate manual link" }, 409);
        }
        this.links[existing] = candidate;
      } else {
        this.links.push(candidate);
      }
      return json(candidate, 201);
    }
    if (method === "DELETE" && path.startsWith("/api/links/")) {
      const id = path.slice("/api/links/".length);
      const at = this.links.findIndex((l) => l.link_id === id);
      if (at < 0) return json({ code: "NotFound", message: id }, 404);
      const [removed] = this.links.splice(at, 1);
      return json({ deleted: removed.link_id });
    }
    if (method === "GET" && path.startsWith("/api/graph")) {
      const level = path.includes("package") ? "package" : "file";
      return json(this.graph(level));
    }
    if (method === "POST" && path === "/api/export") {
      this.exportCalls += 1;
      this.exportedLinkIds = this.links.map((l) => l.link_id);
      return json({ path: "/work/links.xml", links: this.links.length });
    }
    return json({ code: "NotFound", message: path }, 404);
  };

  install(): void {
    globalThis.fetch = this.fetch as typeof fetch;
  }
}
