/** Turns an explain response into prose lines for the explanation panel.
 *
 * Totals and line counts come straight from the API payload; nothing is
 * recomputed client-side.  One line per grounded constraint, naming the
 * partner variables and the cost, plus a summary sentence comparing the
 * two totals.
 */

import { constraintName, valueName, variableName } from "./labels.js";
import type { CostJson, ExplainResponse, InstanceDoc, RenderLine } from "./types.js";

export interface ExplanationView {
  solutionLines: string[];
  alternativeLines: string[];
  solutionTotal: CostJson;
  alternativeTotal: CostJson;
  summary: string;
  validBadge: string;
  length: number;
  nclo: number;
  error?: string;
}

function costText(cost: CostJson): string {
  return cost === "inf" ? "infinity" : String(cost);
}

function lineText(instance: InstanceDoc, line: RenderLine): string {
  const assignments = line.scope
    .map((variable, i) => `${variableName(instance, variable)}=${valueName(instance, variable, line.values[i])}`)
    .join(", ");
  const partners = line.partners.map((p) => variableName(instance, p));
  const withPart =
    partners.length > 0 ? ` with ${partners.join(" and ")}` : "";
  return (
    `${costText(line.cost)} from constraint ${constraintName(instance, line.constraint_id)}` +
    `${withPart} (${assignments})`
  );
}

function describeQuery(instance: InstanceDoc, response: ExplainResponse): string {
  return Object.keys(response.query.original)
    .map(Number)
    .sort((a, b) => a - b)
    .map((variable) => {
      const from = valueName(instance, variable, response.query.original[String(variable)]);
      const to = valueName(instance, variable, response.query.alternative[String(variable)]);
      return `${variableName(instance, variable)}: ${from} -> ${to}`;
    })
    .join("; ");
}

export function renderExplanation(
  instance: InstanceDoc,
  response: ExplainResponse,
): ExplanationView {
  try {
    const rendering = response.rendering;
    const solutionLines = rendering.solution_lines.map((line) => lineText(instance, line));
    const alternativeLines = rendering.alternative_lines.map((line) =>
      lineText(instance, line),
    );
    const solutionTotal = rendering.solution_total;
    const alternativeTotal = rendering.alternative_total;
    // Non-base variants may drop alternative constraints, so their total
    // reads as a lower bound.
    const partial = response.variant !== "base";
    const alternativePhrase = rendering.valid
      ? `${partial ? "at least " : ""}${costText(alternativeTotal)}`
      : `only ${costText(alternativeTotal)}`;
    const summary = rendering.valid
      ? `Keeping the current values (${describeQuery(instance, response)}) costs ` +
        `${costText(solutionTotal)}; the alternative costs ${alternativePhrase}, ` +
        `so the current choice is no worse.`
      : `The collected alternative constraints reach ${alternativePhrase}, below the ` +
        `current cost ${costText(solutionTotal)}; no valid explanation exists for this query.`;
    return {
      solutionLines,
      alternativeLines,
      solutionTotal,
      alternativeTotal,
      summary,
      validBadge: rendering.valid ? "valid" : "no valid explanation",
      length: rendering.length,
      nclo: rendering.nclo,
    };
  } catch (err) {
    return {
      solutionLines: [],
      alternativeLines: [],
      solutionTotal: 0,
      alternativeTotal: 0,
      summary: "",
      validBadge: "error",
      length: 0,
      nclo: 0,
      error: `malformed explanation payload: ${String(err)}`,
    };
  }
}
