/** Graph pane: force-directed SVG rendering of the bipartite link graphs.
 * Publication-side nodes (mentions, pages) are red, code-side nodes (files,
 * packages) blue, matching the established two-color convention. */

import type { GraphNode, GraphPayload } from "./types.js";

export const PUBLICATION_COLOR = "#c0392b";
export const CODE_COLOR = "#2e6da4";

export function nodeColor(node: GraphNode): string {
  return node.kind === "mention" || node.kind === "page"
    ? PUBLICATION_COLOR
    : CODE_COLOR;
}

export interface GraphPaneHandlers {
  onNodeClick(node: GraphNode): void;
}

interface Body {
  node: GraphNode;
  x: number;
  y: number;
}

/** Deterministic jitter so layouts reproduce across reloads. */
function hash01(text: string): number {
  let h = 2166136261;
  for (let i = 0; i < text.length; i++) {
    h ^= text.charCodeAt(i);
    h = Math.imul(h, 16777619);
  }
  return ((h >>> 0) % 10_000) / 10_000;
}

export function computeLayout(
  graph: GraphPayload,
  width: number,
  height: number,
  iterations = 150,
): Map<string, { x: number; y: number }> {
  // bipartite prior: publication side starts left, code side right
  const bodies: Body[] = graph.nodes.map((node) => {
    const left = node.kind === "mention" || node.kind === "page";
    return {
      node,
      x: (left ? 0.25 : 0.75) * width + (hash01(node.node_id) - 0.5) * width * 0.2,
      y: (0.12 + 0.76 * hash01(node.node_id + "#y")) * height,
    };
  });
  const byId = new Map(bodies.map((b) => [b.node.node_id, b]));
  const springLength = Math.min(width, height) * 0.35;

  for (let step = 0; step < iterations; step++) {
    const temperature = 1 - step / iterations;
    // pairwise repulsion
    for (let i = 0; i < bodies.length; i++) {
      for (let j = i + 1; j < bodies.length; j++) {
        const a = bodies[i];
        const b = bodies[j];
        let dx = a.x - b.x;
        let dy = a.y - b.y;
        const dist = Math.max(12, Math.hypot(dx, dy));
        const force = (1800 / (dist * dist)) * temperature;
        dx /= dist;
        dy /= dist;
        a.x += dx * force;
        a.y += dy * force;
        b.x -= dx * force;
        b.y -= dy * force;
      }
    }
    // springs along edges
    for (const edge of graph.edges) {
      const a = byId.get(edge.source);
      const b = byId.get(edge.target);
      if (!a || !b) continue;
      const dx = b.x - a.x;
      const dy = b.y - a.y;
      const dist = Math.max(1, Math.hypot(dx, dy));
      const force = ((dist - springLength) / dist) * 0.04 * temperature;
      a.x += dx * force;
      a.y += dy * force;
      b.x -= dx * force;
      b.y -= dy * force;
    }
    for (const body of bodies) {
      body.x = Math.min(width - 16, Math.max(16, body.x));
      body.y = Math.min(height - 16, Math.max(16, body.y));
    }
  }
  return new Map(bodies.map((b) => [b.node.node_id, { x: b.x, y: b.y }]));
}

const SVG_NS = "http://www.w3.org/2000/svg";

export class GraphPane {
  constructor(
    private readonly root: HTMLElement,
    private readonly handlers: GraphPaneHandlers,
  ) {}

  render(graph: GraphPayload, width = 520, height = 420): void {
    this.root.textContent = "";
    if (graph.nodes.length === 0) {
      const empty = document.createElement("div");
      empty.className = "empty-state";
      empty.textContent = `no links to display at the ${graph.level} level yet`;
      this.root.appendChild(empty);
      return;
    }
    const positions = computeLayout(graph, width, height);
    const svg = document.createElementNS(SVG_NS, "svg");
    svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
    svg.setAttribute("class", "graph-svg");

    const maxWeight = Math.max(1, ...graph.edges.map((e) => e.weight));
    for (const edge of graph.edges) {
      const a = positions.get(edge.source);
      const b = positions.get(edge.target);
      if (!a || !b) continue;
      const line = document.createElementNS(SVG_NS, "line");
      line.setAttribute("x1", a.x.toFixed(1));
      line.setAttribute("y1", a.y.toFixed(1));
      line.setAttribute("x2", b.x.toFixed(1));
      line.setAttribute("y2", b.y.toFixed(1));
      line.setAttribute("stroke", "#999999");
      line.setAttribute("stroke-width", (0.8 + (2.4 * edge.weight) / maxWeight).toFixed(2));
      svg.appendChild(line);
    }
    for (const node of graph.nodes) {
      const pos = positions.get(node.node_id)!;
      const group = document.createElementNS(SVG_NS, "g");
      group.setAttribute("class", `graph-node kind-${node.kind}`);
      (group as unknown as HTMLElement).dataset.nodeId = node.node_id;
      const circle = document.createElementNS(SVG_NS, "circle");
      circle.setAttribute("cx", pos.x.toFixed(1));
      circle.setAttribute("cy", pos.y.toFixed(1));
      circle.setAttribute("r", "9");
      circle.setAttribute("fill", nodeColor(node));
      const title = document.createElementNS(SVG_NS, "title");
      title.textContent = node.label;
      const text = document.createElementNS(SVG_NS, "text");
      text.setAttribute("x", (pos.x + 12).toFixed(1));
      text.setAttribute("y", (pos.y + 4).toFixed(1));
      text.setAttribute("class", "graph-label");
      text.textContent =
        node.label.length > 26 ? `${node.label.slice(0, 23)}...` : node.label;
      group.appendChild(circle);
      group.appendChild(title);
      group.appendChild(text);
      group.addEventListener("click", () => this.handlers.onNodeClick(node));
      svg.appendChild(group);
    }
    this.root.appendChild(svg);
  }
}
