/** Paper pane: the extracted span model rendered page by page, with one
 * highlight element per link and a hover tooltip listing link targets. */

import type { DocumentModel, Link, TextSpan } from "./types.js";
import type { MentionSelection } from "./state.js";

export interface PaperPaneHandlers {
  onMentionSelected(mention: MentionSelection): void;
}

interface LineData {
  page: number;
  line: number;
  text: string;
  monoRanges: Array<[number, number]>;
}

function buildLines(model: DocumentModel): LineData[] {
  const byLine = new Map<string, TextSpan[]>();
  for (const span of model.spans) {
    const key = `${span.page}:${span.line}`;
    const spans = byLine.get(key);
    if (spans) spans.push(span);
    else byLine.set(key, [span]);
  }
  const lines: LineData[] = [];
  for (const spans of byLine.values()) {
    spans.sort((a, b) => a.char_start - b.char_start);
    const length = spans[spans.length - 1].char_end;
    const chars = new Array<string>(length).fill(" ");
    const monoRanges: Array<[number, number]> = [];
    for (const span of spans) {
      for (let i = 0; i < span.text.length; i++) {
        chars[span.char_start + i] = span.text[i];
      }
      if (span.font.is_monospace) {
        monoRanges.push([span.char_start, span.char_end]);
      }
    }
    lines.push({
      page: spans[0].page,
      line: spans[0].line,
      text: chars.join(""),
      monoRanges,
    });
  }
  lines.sort((a, b) => a.page - b.page || a.line - b.line);
  return lines;
}

export class PaperPane {
  private tooltip: HTMLDivElement;

  constructor(
    private readonly root: HTMLElement,
    private readonly handlers: PaperPaneHandlers,
  ) {
    this.tooltip = document.createElement("div");
    this.tooltip.className = "tooltip hidden";
    this.root.ownerDocument.body.appendChild(this.tooltip);
  }

  render(model: DocumentModel, links: Link[]): void {
    this.root.textContent = "";
    const linksByLine = new Map<string, Link[]>();
    for (const link of links) {
      const key = `${link.page}:${link.line}`;
      const bucket = linksByLine.get(key);
      if (bucket) bucket.push(link);
      else linksByLine.set(key, [link]);
    }

    let currentPage = 0;
    let pageEl: HTMLElement | null = null;
    for (const line of buildLines(model)) {
      if (line.page !== currentPage) {
        currentPage = line.page;
        pageEl = document.createElement("section");
        pageEl.className = "page";
        pageEl.id = `page-${line.page}`;
        const header = document.createElement("div");
        header.className = "page-header";
        header.textContent = `page ${line.page}`;
        pageEl.appendChild(header);
        this.root.appendChild(pageEl);
      }
      pageEl!.appendChild(this.renderLine(line, linksByLine.get(`${line.page}:${line.line}`) ?? []));
    }
  }

  highlightCount(): number {
    return this.root.querySelectorAll("mark.link-highlight").length;
  }

  scrollToLine(page: number, line: number): void {
    const el = this.root.querySelector(`#line-p${page}-l${line}`);
    if (el) {
      (el as HTMLElement).scrollIntoView?.({ block: "center" });
      el.classList.add("flash");
      setTimeout(() => el.classList.remove("flash"), 900);
    }
  }

  scrollToPage(page: number): void {
    const el = this.root.querySelector(`#page-${page}`);
    if (el) (el as HTMLElement).scrollIntoView?.({ block: "start" });
  }

  private renderLine(line: LineData, links: Link[]): HTMLElement {
    const el = document.createElement("div");
    el.className = "paper-line";
    el.id = `line-p${line.page}-l${line.line}`;

    // one <mark> per link; links sharing an exact range nest so the
    // highlight count always equals the link count
    const byRange = new Map<string, Link[]>();
    for (const link of links) {
      const key = `${link.char_start}:${link.char_end}`;
      const bucket = byRange.get(key);
      if (bucket) bucket.push(link);
      else byRange.set(key, [link]);
    }
    const ranges = [...byRange.entries()]
      .map(([key, bucket]) => ({
        start: bucket[0].char_start,
        end: bucket[0].char_end,
        bucket,
      }))
      .sort((a, b) => a.start - b.start || b.end - a.end);

    let cursor = 0;
    for (const range of ranges) {
      const start = Math.max(range.start, cursor);
      const end = Math.max(range.end, start);
      if (start > cursor) {
        this.appendPlain(el, line, cursor, start);
      }
      let host: HTMLElement = el;
      for (const link of range.bucket) {
        const mark = document.createElement("mark");
        mark.className = "link-highlight";
        mark.dataset.linkId = link.link_id;
        mark.dataset.page = String(link.page);
        mark.dataset.line = String(link.line);
        host.appendChild(mark);
        this.attachTooltip(mark, range.bucket);
        this.attachSelection(mark, line, range.start, range.end);
        host = mark;
      }
      host.textContent = line.text.slice(start, end);
      cursor = end;
    }
    if (cursor < line.text.length) {
      this.appendPlain(el, line, cursor, line.text.length);
    }
    if (line.text.length === 0) {
      el.appendChild(document.createTextNode(" "));
    }
    return el;
  }

  private appendPlain(el: HTMLElement, line: LineData, start: number, end: number): void {
    // split the plain stretch at monospace boundaries so code text keeps
    // its fixed-pitch look and stays clickable as a mention
    let cursor = start;
    const cuts = line.monoRanges
      .flatMap(([s, e]) => [s, e])
      .filter((c) => c > start && c < end)
      .sort((a, b) => a - b);
    for (const cut of [...cuts, end]) {
      if (cut <= cursor) continue;
      const piece = line.text.slice(cursor, cut);
      const mono = line.monoRanges.some(([s, e]) => cursor >= s && cut <= e);
      const span = document.createElement("span");
      span.className = mono ? "span mono" : "span";
      span.textContent = piece;
      this.attachSelection(span, line, cursor, cut);
      el.appendChild(span);
      cursor = cut;
    }
  }

  private attachSelection(el: HTMLElement, line: LineData, start: number, end: number): void {
    el.addEventListener("click", (event) => {
      event.stopPropagation();
      this.handlers.onMentionSelected({
        page: line.page,
        line: line.line,
        charStart: start,
        charEnd: end,
        snippet: line.text.slice(start, end),
      });
    });
  }

  private attachTooltip(mark: HTMLElement, links: Link[]): void {
    mark.addEventListener("mouseenter", () => {
      this.tooltip.textContent = "";
      for (const link of links) {
        const row = document.createElement("div");
        row.className = "tooltip-row";
        row.textContent = `${link.target_file}:${link.target_line} — ${link.target_qname} [${link.label}]`;
        this.tooltip.appendChild(row);
      }
      const rect = mark.getBoundingClientRect();
      this.tooltip.style.left = `${rect.left}px`;
      this.tooltip.style.top = `${rect.bottom + 4}px`;
      this.tooltip.classList.remove("hidden");
    });
    mark.addEventListener("mouseleave", () => {
      this.tooltip.classList.add("hidden");
    });
  }
}
