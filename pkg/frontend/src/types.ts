/** Payload shapes of the scisoftx JSON API. */

export interface FontInfo {
  postscript_name: string;
  flags: number;
  size_pt: number;
  is_monospace: boolean;
}

export interface TextSpan {
  span_id: string;
  page: number;
  line: number;
  char_start: number;
  char_end: number;
  text: string;
  bbox: [number, number, number, number];
  font: FontInfo;
}

export interface DocumentModel {
  page_count: number;
  source_digest: string;
  spans: TextSpan[];
}

export type EntityKind =
  | "package"
  | "file"
  | "type_def"
  | "function"
  | "field"
  | "variable"
  | "parameter";

export interface CodeEntity {
  entity_id: string;
  kind: EntityKind;
  name: string;
  qualified_name: string;
  file_path: string;
  line_start: number;
  line_end: number;
  parent_id: string | null;
}

export interface CodeIndexPayload {
  root_dir: string;
  source_digest: string;
  entities: CodeEntity[];
}

export interface Link {
  link_id: string;
  page: number;
  line: number;
  char_start: number;
  char_end: number;
  snippet: string;
  target_qname: string;
  target_file: string;
  target_line: number;
  label: string;
  origin: "auto" | "manual";
  score: number;
}

export interface LinksResponse {
  document_digest: string;
  code_digest: string;
  label_vocabulary: string[];
  links: Link[];
}

export interface ManualLinkBody {
  page: number;
  line: number;
  char_start: number;
  char_end: number;
  snippet: string;
  target_qname: string;
  target_file: string;
  target_line: number;
  label: string;
}

export type GraphLevel = "file" | "package";

export interface GraphNode {
  node_id: string;
  kind: "mention" | "file" | "page" | "package";
  label: string;
}

export interface GraphEdge {
  source: string;
  target: string;
  weight: number;
}

export interface GraphPayload {
  level: GraphLevel;
  nodes: GraphNode[];
  edges: GraphEdge[];
}
