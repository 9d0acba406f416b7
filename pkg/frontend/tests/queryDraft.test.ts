import { readFileSync } from "node:fs";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import {
  askedAgent,
  buildExplainBody,
  canSubmit,
  toggleCell,
  type Draft,
} from "../src/queryDraft.js";
import type { SessionInfo } from "../src/types.js";

const session: SessionInfo = JSON.parse(
  readFileSync(join(__dirname, "fixtures", "session.json"), "utf8"),
);
const solution = session.solution!;
const instance = session.instance;

describe("toggleCell", () => {
  it("selects an alternative value", () => {
    const draft = toggleCell({}, 0, 1, solution);
    expect(draft).toEqual({ 0: 1 });
  });

  it("clicking the current value clears the variable", () => {
    const draft = toggleCell({ 0: 1 }, 0, solution["0"], solution);
    expect(draft).toEqual({});
  });

  it("clicking the selected alternative again clears it", () => {
    const draft = toggleCell({ 0: 1 }, 0, 1, solution);
    expect(draft).toEqual({});
  });

  it("reselecting moves the alternative", () => {
    const draft = toggleCell({ 0: 1 }, 0, 0, solution);
    expect(draft).toEqual({ 0: 0 });
  });

  it("does not mutate the input draft", () => {
    const before: Draft = { 0: 1 };
    toggleCell(before, 1, 2, solution);
    expect(before).toEqual({ 0: 1 });
  });
});

describe("canSubmit", () => {
  it("rejects the empty draft", () => {
    expect(canSubmit({}, solution)).toBe(false);
  });

  it("accepts a draft whose values all differ from the solution", () => {
    expect(canSubmit({ 0: 1, 1: 2 }, solution)).toBe(true);
  });

  it("rejects a draft containing a current value", () => {
    expect(canSubmit({ 0: solution["0"] }, solution)).toBe(false);
  });
});

describe("buildExplainBody", () => {
  it("builds the demo query from user clicks", () => {
    // M1 Afternoon -> Noon, M2 Evening -> Afternoon.
    let draft: Draft = {};
    draft = toggleCell(draft, 0, 1, solution);
    draft = toggleCell(draft, 1, 2, solution);
    const body = buildExplainBody(instance, draft, solution, "base");
    expect(body).toEqual({
      variant: "base",
      query: {
        asked_agent: 0,
        original: { "0": 2, "1": 3 },
        alternative: { "0": 1, "1": 2 },
      },
    });
  });

  it("asks the owner of the lowest selected variable", () => {
    expect(askedAgent(instance, { 1: 0 })).toBe(instance.variables[1].owner);
  });

  it("refuses unsubmittable drafts", () => {
    expect(() => buildExplainBody(instance, {}, solution, "base")).toThrow();
  });
});
