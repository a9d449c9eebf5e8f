/** Code pane: entity tree on the left of the pane, source text below the
 * selected file, selected entity line emphasized. */

import type { ApiClient } from "./api.js";
import type { CodeEntity, CodeIndexPayload } from "./types.js";
import type { EntitySelection } from "./state.js";

export interface CodePaneHandlers {
  onEntitySelected(entity: EntitySelection): void;
}

export class CodePane {
  private entities = new Map<string, CodeEntity>();
  private children = new Map<string, CodeEntity[]>();
  private byFile = new Map<string, CodeEntity>();
  private treeEl: HTMLElement;
  private sourceEl: HTMLElement;

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
    private readonly handlers: CodePaneHandlers,
  ) {
    this.treeEl = document.createElement("div");
    this.treeEl.className = "entity-tree";
    this.sourceEl = document.createElement("pre");
    this.sourceEl.className = "source-view";
    this.root.appendChild(this.treeEl);
    this.root.appendChild(this.sourceEl);
  }

  render(index: CodeIndexPayload): void {
    this.entities.clear();
    this.children.clear();
    this.byFile.clear();
    let rootEntity: CodeEntity | null = null;
    for (const entity of index.entities) {
      this.entities.set(entity.entity_id, entity);
      if (entity.parent_id === null) rootEntity = entity;
      else {
        const siblings = this.children.get(entity.parent_id);
        if (siblings) siblings.push(entity);
        else this.children.set(entity.parent_id, [entity]);
      }
      if (entity.kind === "file") this.byFile.set(entity.file_path, entity);
    }
    this.treeEl.textContent = "";
    if (rootEntity) this.treeEl.appendChild(this.renderEntity(rootEntity, 0));
  }

  private renderEntity(entity: CodeEntity, depth: number): HTMLElement {
    const container = document.createElement("div");
    container.className = "entity-node";
    const row = document.createElement("div");
    row.className = `entity-row kind-${entity.kind}`;
    row.style.paddingLeft = `${depth * 0.9}rem`;
    row.dataset.entityId = entity.entity_id;
    row.dataset.qname = entity.qualified_name;
    const kindTag = document.createElement("span");
    kindTag.className = "kind-tag";
    kindTag.textContent = entity.kind.replace("_def", "");
    const name = document.createElement("span");
    name.className = "entity-name";
    name.textContent = entity.name;
    row.appendChild(kindTag);
    row.appendChild(name);
    row.addEventListener("click", (event) => {
      event.stopPropagation();
      void this.select(entity);
    });
    container.appendChild(row);
    for (const child of this.children.get(entity.entity_id) ?? []) {
      if (child.kind === "parameter") continue; // too noisy for the tree
      container.appendChild(this.renderEntity(child, depth + 1));
    }
    return container;
  }

  async select(entity: CodeEntity): Promise<void> {
    for (const el of this.treeEl.querySelectorAll(".entity-row.selected")) {
      el.classList.remove("selected");
    }
    const row = this.treeEl.querySelector(`[data-entity-id="${entity.entity_id}"]`);
    row?.classList.add("selected");
    this.handlers.onEntitySelected({
      qualifiedName: entity.qualified_name,
      filePath: entity.file_path,
      line: Math.max(1, entity.line_start),
      kind: entity.kind,
    });
    if (entity.file_path) {
      await this.showSource(entity.file_path, entity.line_start, entity.line_end);
    }
  }

  async revealFile(filePath: string): Promise<void> {
    const entity = this.byFile.get(filePath);
    if (entity) await this.select(entity);
  }

  revealPackage(qualifiedName: string): void {
    for (const el of this.treeEl.querySelectorAll(".entity-row.selected")) {
      el.classList.remove("selected");
    }
    const row = this.treeEl.querySelector(`[data-qname="${qualifiedName}"]`);
    if (row) {
      row.classList.add("selected");
      (row as HTMLElement).scrollIntoView?.({ block: "center" });
    }
  }

  private async showSource(filePath: string, lineStart: number, lineEnd: number): Promise<void> {
    let text: string;
    try {
      text = await this.api.getSource(filePath);
    } catch {
      this.sourceEl.textContent = `cannot load ${filePath}`;
      return;
    }
    this.sourceEl.textContent = "";
    const lines = text.split("\n");
    for (let i = 0; i < lines.length; i++) {
      const lineNo = i + 1;
      const row = document.createElement("div");
      row.className = "source-line";
      if (lineNo >= lineStart && lineNo <= lineEnd && lineStart > 0) {
        row.classList.add("selected-range");
      }
      row.textContent = `${String(lineNo).padStart(4, " ")}  ${lines[i]}`;
      this.sourceEl.appendChild(row);
      if (lineNo === lineStart) {
        row.scrollIntoView?.({ block: "center" });
      }
    }
  }
}
