/** UI view state. The server stays authoritative; this only tracks the
 * current selections driving the step-wise annotation flow. */

import type { GraphLevel } from "./types.js";

export interface MentionSelection {
  page: number;
  line: number;
  charStart: number;
  charEnd: number;
  snippet: string;
}

export interface EntitySelection {
  qualifiedName: string;
  filePath: string;
  line: number;
  kind: string;
}

type Listener = () => void;

export class ViewState {
  currentPage = 1;
  mention: MentionSelection | null = null;
  entity: EntitySelection | null = null;
  pendingLabel: string | null = null;
  graphLevel: GraphLevel = "file";

  private listeners: Listener[] = [];

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private notify(): void {
    for (const listener of this.listeners) listener();
  }

  selectMention(mention: MentionSelection | null): void {
    this.mention = mention;
    if (mention) this.currentPage = mention.page;
    this.notify();
  }

  selectEntity(entity: EntitySelection | null): void {
    this.entity = entity;
    this.notify();
  }

  setLabel(label: string | null): void {
    this.pendingLabel = label;
    this.notify();
  }

  setGraphLevel(level: GraphLevel): void {
    this.graphLevel = level;
    this.notify();
  }

  /** A link may be submitted only with mention, entity and label all chosen. */
  canSubmit(): boolean {
    return this.mention !== null && this.entity !== null && this.pendingLabel !== null;
  }

  clearPending(): void {
    this.mention = null;
    this.pendingLabel = null;
    this.notify();
  }
}
