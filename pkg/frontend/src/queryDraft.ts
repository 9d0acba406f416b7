/** Query drafting: clicked cells accumulate into a contrastive query.
 *
 * A draft maps variables to chosen alternative values.  Clicking a
 * variable's current value clears that variable; clicking the already
 * selected alternative also clears it; anything else (re)selects.  A draft
 * is submittable only when it is non-empty and every selected alternative
 * differs from the variable's current value.
 */

import type { InstanceDoc, QueryDoc, Variant } from "./types.js";

export type Draft = Record<number, number>;

export function toggleCell(
  draft: Draft,
  variable: number,
  value: number,
  solution: Record<string, number>,
): Draft {
  const next: Draft = { ...draft };
  const current = solution[String(variable)];
  if (value === current || next[variable] === value) {
    delete next[variable];
  } else {
    next[variable] = value;
  }
  return next;
}

export function draftSize(draft: Draft): number {
  return Object.keys(draft).length;
}

export function canSubmit(draft: Draft, solution: Record<string, number>): boolean {
  const entries = Object.entries(draft);
  if (entries.length === 0) {
    return false;
  }
  return entries.every(([variable, value]) => solution[variable] !== value);
}

/** Asked agent: owner of the lowest-id selected variable. */
export function askedAgent(instance: InstanceDoc, draft: Draft): number {
  const ids = Object.keys(draft)
    .map(Number)
    .sort((a, b) => a - b);
  const owner = new Map(instance.variables.map((v) => [v.id, v.owner]));
  return owner.get(ids[0]) ?? instance.agents[0];
}

export function buildExplainBody(
  instance: InstanceDoc,
  draft: Draft,
  solution: Record<string, number>,
  variant: Variant,
): { query: QueryDoc; variant: Variant } {
  if (!canSubmit(draft, solution)) {
    throw new Error("draft is not submittable");
  }
  const original: Record<string, number> = {};
  const alternative: Record<string, number> = {};
  for (const key of Object.keys(draft)
    .map(Number)
    .sort((a, b) => a - b)) {
    original[String(key)] = solution[String(key)];
    alternative[String(key)] = draft[key];
  }
  return {
    query: { asked_agent: askedAgent(instance, draft), original, alternative },
    variant,
  };
}
