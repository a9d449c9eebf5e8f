/** ViewState: the submit invariant and change notification. */

import { describe, expect, it } from "vitest";

import { ViewState } from "../src/state.js";

const MENTION = { page: 1, line: 2, charStart: 4, charEnd: 9, snippet: "token" };
const ENTITY = {
  qualifiedName: "repo.core.Engine.Engine.run",
  filePath: "core/Engine.java",
  line: 5,
  kind: "function",
};

describe("ViewState", () => {
  it("allows submission only with mention, entity and label together", () => {
    const state = new ViewState();
    expect(state.canSubmit()).toBe(false);
    state.selectMention(MENTION);
    expect(state.canSubmit()).toBe(false);
    state.selectEntity(ENTITY);
    expect(state.canSubmit()).toBe(false);
    state.setLabel("uses");
    expect(state.canSubmit()).toBe(true);
    state.selectMention(null);
    expect(state.canSubmit()).toBe(false);
  });

  it("clearPending drops mention and label but keeps the entity", () => {
    const state = new ViewState();
    state.selectMention(MENTION);
    state.selectEntity(ENTITY);
    state.setLabel("defines");
    state.clearPending();
    expect(state.mention).toBeNull();
    expect(state.pendingLabel).toBeNull();
    expect(state.entity).toEqual(ENTITY);
  });

  it("selecting a mention tracks the current page", () => {
    const state = new ViewState();
    state.selectMention({ ...MENTION, page: 3 });
    expect(state.currentPage).toBe(3);
  });

  it("notifies subscribers until unsubscribed", () => {
    const state = new ViewState();
    let calls = 0;
    const unsubscribe = state.subscribe(() => {
      calls += 1;
    });
    state.setLabel("uses");
    state.setGraphLevel("package");
    unsubscribe();
    state.setLabel(null);
    expect(calls).toBe(2);
  });
});
