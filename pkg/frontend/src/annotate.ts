/** The step-wise annotation bar: shows the current mention/entity/label
 * selections, enables submit only when all three are set, and surfaces
 * server conflicts inline without dropping the selection. */

import { ApiClient, ApiError } from "./api.js";
import type { ViewState } from "./state.js";

export class AnnotationBar {
  private mentionEl: HTMLElement;
  private entityEl: HTMLElement;
  private labelSelect: HTMLSelectElement;
  private submitButton: HTMLButtonElement;
  private messageEl: HTMLElement;

  constructor(
    private readonly root: HTMLElement,
    private readonly state: ViewState,
    private readonly api: ApiClient,
    private readonly onCreated: () => void | Promise<void>,
  ) {
    this.mentionEl = this.step("1. mention", "click text in the paper pane");
    this.entityEl = this.step("2. code entity", "click an entity in the code pane");
    const labelStep = document.createElement("div");
    labelStep.className = "annotate-step";
    const caption = document.createElement("span");
    caption.className = "step-caption";
    caption.textContent = "3. label";
    this.labelSelect = document.createElement("select");
    this.labelSelect.className = "label-select";
    this.labelSelect.addEventListener("change", () => {
      this.state.setLabel(this.labelSelect.value || null);
    });
    labelStep.appendChild(caption);
    labelStep.appendChild(this.labelSelect);
    this.root.appendChild(labelStep);

    this.submitButton = document.createElement("button");
    this.submitButton.className = "submit-link";
    this.submitButton.textContent = "create link";
    this.submitButton.addEventListener("click", () => void this.submit());
    this.root.appendChild(this.submitButton);

    this.messageEl = document.createElement("span");
    this.messageEl.className = "annotate-message";
    this.root.appendChild(this.messageEl);

    this.state.subscribe(() => this.refresh());
    this.refresh();
  }

  /** The picker reflects whatever vocabulary the service declares. */
  setVocabulary(labels: string[]): void {
    this.labelSelect.textContent = "";
    const placeholder = document.createElement("option");
    placeholder.value = "";
    placeholder.textContent = "choose a label";
    this.labelSelect.appendChild(placeholder);
    for (const label of labels) {
      const option = document.createElement("option");
      option.value = label;
      option.textContent = label;
      this.labelSelect.appendChild(option);
    }
  }

  private step(captionText: string, emptyText: string): HTMLElement {
    const container = document.createElement("div");
    container.className = "annotate-step";
    const caption = document.createElement("span");
    caption.className = "step-caption";
    caption.textContent = captionText;
    const value = document.createElement("span");
    value.className = "step-value empty";
    value.textContent = emptyText;
    container.appendChild(caption);
    container.appendChild(value);
    this.root.appendChild(container);
    return value;
  }

  private refresh(): void {
    const { mention, entity } = this.state;
    if (mention) {
      this.mentionEl.textContent = `p${mention.page}:l${mention.line} "${mention.snippet}"`;
      this.mentionEl.classList.remove("empty");
    } else {
      this.mentionEl.textContent = "click text in the paper pane";
      this.mentionEl.classList.add("empty");
    }
    if (entity) {
      this.entityEl.textContent = entity.qualifiedName;
      this.entityEl.classList.remove("empty");
    } else {
      this.entityEl.textContent = "click an entity in the code pane";
      this.entityEl.classList.add("empty");
    }
    if ((this.state.pendingLabel ?? "") !== this.labelSelect.value) {
      this.labelSelect.value = this.state.pendingLabel ?? "";
    }
    this.submitButton.disabled = !this.state.canSubmit();
  }

  private async submit(): Promise<void> {
    const { mention, entity, pendingLabel } = this.state;
    if (!mention || !entity || !pendingLabel) return;
    this.messageEl.textContent = "";
    this.messageEl.classList.remove("error");
    try {
      await this.api.createLink({
        page: mention.page,
        line: mention.line,
        char_start: mention.charStart,
        char_end: mention.charEnd,
        snippet: mention.snippet,
        target_qname: entity.qualifiedName,
        target_file: entity.filePath,
        target_line: entity.line,
        label: pendingLabel,
      });
    } catch (error) {
      // conflicts and validation errors stay inline; the selection survives
      if (error instanceof ApiError) {
        this.messageEl.textContent =
          error.status === 409 ? `conflict: ${error.message}` : error.message;
        this.messageEl.classList.add("error");
        return;
      }
      throw error;
    }
    this.messageEl.textContent = "link created";
    this.state.clearPending();
    await this.onCreated();
  }
}
