/** The step-wise annotation flow, driven through real DOM events. */

import { beforeEach, describe, expect, it } from "vitest";

import { boot } from "../src/main.js";
import { FakeService } from "./fakeService.js";

async function flush(): Promise<void> {
  await new Promise((resolve) => setTimeout(resolve, 0));
  await new Promise((resolve) => setTimeout(resolve, 0));
}

function click(el: Element | null): void {
  if (!el) throw new Error("missing element to click");
  el.dispatchEvent(new MouseEvent("click", { bubbles: true }));
}

describe("annotate flow", () => {
  let service: FakeService;
  let root: HTMLElement;

  beforeEach(() => {
    service = new FakeService();
    service.seedAutoLinks();
    service.install();
    document.body.innerHTML = '<div id="app"></div>';
    root = document.getElementById("app")!;
  });

  it("submits only when mention, entity and label are all selected", async () => {
    const app = await boot(root);
    const submit = root.querySelector<HTMLButtonElement>("button.submit-link")!;
    expect(submit.disabled).toBe(true);

    // step 1: select paper text
    click(root.querySelector(".paper-line .span.mono"));
    await flush();
    expect(app.state.mention).not.toBeNull();
    expect(submit.disabled).toBe(true);

    // step 2: select a code entity
    click(root.querySelector('[data-qname="repo.core.Engine.Engine.stop"]'));
    await flush();
    expect(app.state.entity?.qualifiedName).toBe("repo.core.Engine.Engine.stop");
    expect(submit.disabled).toBe(true);

    // step 3: pick a label from the vocabulary echoed by the service
    const select = root.querySelector<HTMLSelectElement>("select.label-select")!;
    expect([...select.options].map((o) => o.value)).toContain("implements");
    select.value = "implements";
    select.dispatchEvent(new Event("change", { bubbles: true }));
    await flush();
    expect(submit.disabled).toBe(false);
  });

  it("round-trips a manual link: POST, GET /api/links, export, reload", async () => {
    await boot(root);
    const before = service.links.length;

    // mention: the monospace span "Engine.stop()" on page 2
    const page2 = root.querySelector("#page-2")!;
    click(page2.querySelector(".span.mono"));
    click(root.querySelector('[data-qname="repo.core.Engine.Engine.stop"]'));
    const select = root.querySelector<HTMLSelectElement>("select.label-select")!;
    select.value = "implements";
    select.dispatchEvent(new Event("change", { bubbles: true }));
    await flush();
    click(root.querySelector("button.submit-link"));
    await flush();

    // the service now holds the manual link
    expect(service.links.length).toBe(before + 1);
    const manual = service.links.find((l) => l.origin === "manual")!;
    expect(manual.target_qname).toBe("repo.core.Engine.Engine.stop");
    expect(manual.label).toBe("implements");
    expect(manual.snippet).toBe("Engine.stop()");
    expect(manual.page).toBe(2);

    // GET /api/links reflects it
    const listed = await (await fetch("/api/links")).json();
    expect(listed.links.map((l: { link_id: string }) => l.link_id)).toContain(manual.link_id);

    // export includes it
    click(root.querySelector("button.export-links"));
    await flush();
    expect(service.exportCalls).toBe(1);
    expect(service.exportedLinkIds).toContain(manual.link_id);

    // reload: a fresh boot reproduces the panes from server state alone;
    // highlight count equals link count
    document.body.innerHTML = '<div id="app"></div>';
    const app2 = await boot(document.getElementById("app")!);
    await flush();
    expect(app2.paperPane.highlightCount()).toBe(service.links.length);
  });

  it("keeps the selection and shows the conflict inline on 409", async () => {
    const app = await boot(root);

    // recreate an already-existing manual link to force the duplicate
    const page2 = root.querySelector("#page-2")!;
    click(page2.querySelector(".span.mono"));
    click(root.querySelector('[data-qname="repo.core.Engine.Engine.stop"]'));
    const select = root.querySelector<HTMLSelectElement>("select.label-select")!;
    select.value = "uses";
    select.dispatchEvent(new Event("change", { bubbles: true }));
    await flush();
    click(root.querySelector("button.submit-link"));
    await flush();

    click(page2.querySelector(".span.mono"));
    click(root.querySelector('[data-qname="repo.core.Engine.Engine.stop"]'));
    select.value = "uses";
    select.dispatchEvent(new Event("change", { bubbles: true }));
    await flush();
    click(root.querySelector("button.submit-link"));
    await flush();

    const message = root.querySelector(".annotate-message")!;
    expect(message.textContent).toContain("conflict");
    expect(app.state.mention).not.toBeNull();
    expect(app.state.entity).not.toBeNull();
    expect(app.state.pendingLabel).toBe("uses");
  });

  it("renders one highlight per link with target tooltips", async () => {
    const app = await boot(root);
    await flush();
    expect(app.paperPane.highlightCount()).toBe(service.links.length);

    const mark = root.querySelector("mark.link-highlight")!;
    mark.dispatchEvent(new MouseEvent("mouseenter", { bubbles: true }));
    const tooltip = document.querySelector(".tooltip")!;
    expect(tooltip.classList.contains("hidden")).toBe(false);
    expect(tooltip.textContent).toContain("core/Engine.java:5");
    mark.dispatchEvent(new MouseEvent("mouseleave", { bubbles: true }));
    expect(tooltip.classList.contains("hidden")).toBe(true);
  });

  it("holds no authoritative state: two boots from one service agree", async () => {
    await boot(root);
    const first = root.innerHTML;
    document.body.innerHTML = '<div id="app"></div>';
    await boot(document.getElementById("app")!);
    expect(document.getElementById("app")!.innerHTML).toBe(first);
  });
});
