/** Application bootstrap: fetch everything from the service, wire panes.
 * The page renders purely from server responses; a reload reproduces it. */

import { ApiClient } from "./api.js";
import { AnnotationBar } from "./annotate.js";
import { CodePane } from "./codePane.js";
import { GraphPane } from "./graphPane.js";
import { PaperPane } from "./paperPane.js";
import { ViewState } from "./state.js";
import type { GraphLevel, GraphNode } from "./types.js";

export interface App {
  state: ViewState;
  paperPane: PaperPane;
  codePane: CodePane;
  graphPane: GraphPane;
  refreshLinks(): Promise<void>;
  refreshGraph(): Promise<void>;
}

export async function boot(root: HTMLElement, api: ApiClient = new ApiClient()): Promise<App> {
  root.textContent = "";
  const state = new ViewState();

  const toolbar = document.createElement("header");
  toolbar.className = "toolbar";
  const title = document.createElement("span");
  title.className = "app-title";
  title.textContent = "scisoftx explorer";
  toolbar.appendChild(title);

  const autoButton = document.createElement("button");
  autoButton.className = "run-auto";
  autoButton.textContent = "discover links";
  toolbar.appendChild(autoButton);

  const exportButton = document.createElement("button");
  exportButton.className = "export-links";
  exportButton.textContent = "export XML";
  toolbar.appendChild(exportButton);

  const levelToggle = document.createElement("div");
  levelToggle.className = "level-toggle";
  for (const level of ["file", "package"] as GraphLevel[]) {
    const button = document.createElement("button");
    button.dataset.level = level;
    button.textContent = `${level} graph`;
    button.addEventListener("click", () => state.setGraphLevel(level));
    levelToggle.appendChild(button);
  }
  toolbar.appendChild(levelToggle);

  const status = document.createElement("span");
  status.className = "toolbar-status";
  toolbar.appendChild(status);
  root.appendChild(toolbar);

  const annotateRoot = document.createElement("div");
  annotateRoot.className = "annotate-bar";
  root.appendChild(annotateRoot);

  const main = document.createElement("main");
  main.className = "panes";
  const paperRoot = document.createElement("section");
  paperRoot.className = "pane paper-pane";
  const codeRoot = document.createElement("section");
  codeRoot.className = "pane code-pane";
  const graphRoot = document.createElement("section");
  graphRoot.className = "pane graph-pane";
  main.appendChild(paperRoot);
  main.appendChild(codeRoot);
  main.appendChild(graphRoot);
  root.appendChild(main);

  const paperPane = new PaperPane(paperRoot, {
    onMentionSelected: (mention) => state.selectMention(mention),
  });
  const codePane = new CodePane(codeRoot, api, {
    onEntitySelected: (entity) => state.selectEntity(entity),
  });
  const graphPane = new GraphPane(graphRoot, {
    onNodeClick: (node) => handleNodeClick(node),
  });

  const [model, index, initialLinks] = await Promise.all([
    api.getDocument(),
    api.getEntities(),
    api.getLinks(),
  ]);

  const annotationBar = new AnnotationBar(annotateRoot, state, api, async () => {
    await refreshLinks();
    await refreshGraph();
  });
  annotationBar.setVocabulary(initialLinks.label_vocabulary);

  async function refreshLinks(): Promise<void> {
    const links = await api.getLinks();
    paperPane.render(model, links.links);
    status.textContent = `${links.links.length} links`;
  }

  async function refreshGraph(): Promise<void> {
    const graph = await api.getGraph(state.graphLevel);
    graphPane.render(graph);
    for (const button of levelToggle.querySelectorAll("button")) {
      button.classList.toggle("active", button.dataset.level === state.graphLevel);
    }
  }

  function handleNodeClick(node: GraphNode): void {
    if (node.kind === "mention") {
      const [, page, line] = node.node_id.split(":");
      paperPane.scrollToLine(Number(page), Number(line));
    } else if (node.kind === "page") {
      paperPane.scrollToPage(Number(node.node_id.split(":")[1]));
    } else if (node.kind === "file") {
      void codePane.revealFile(node.node_id.slice(2));
    } else {
      codePane.revealPackage(node.node_id.slice(4));
    }
  }

  autoButton.addEventListener("click", () => {
    void (async () => {
      await api.runAutoDiscovery();
      await refreshLinks();
      await refreshGraph();
    })();
  });
  exportButton.addEventListener("click", () => {
    void (async () => {
      const result = await api.exportLinks();
      status.textContent = `exported ${result.links} links to ${result.path}`;
    })();
  });

  let lastLevel = state.graphLevel;
  state.subscribe(() => {
    if (state.graphLevel !== lastLevel) {
      lastLevel = state.graphLevel;
      void refreshGraph();
    }
  });

  codePane.render(index);
  paperPane.render(model, initialLinks.links);
  status.textContent = `${initialLinks.links.length} links`;
  await refreshGraph();

  return { state, paperPane, codePane, graphPane, refreshLinks, refreshGraph };
}

// browser entry point; tests import boot() directly instead
if (typeof document !== "undefined" && document.getElementById("app")) {
  void boot(document.getElementById("app")!);
}
