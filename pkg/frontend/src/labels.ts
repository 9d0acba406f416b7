/** Display-name resolution from instance label metadata, with id fallbacks. */

import type { InstanceDoc } from "./types.js";

export function variableName(instance: InstanceDoc, variable: number): string {
  return instance.labels?.variables?.[String(variable)] ?? `x${variable}`;
}

export function valueName(
  instance: InstanceDoc,
  variable: number,
  value: number,
): string {
  return instance.labels?.values?.[String(variable)]?.[String(value)] ?? String(value);
}

export function constraintName(instance: InstanceDoc, constraintId: number): string {
  return instance.labels?.constraints?.[String(constraintId)] ?? `f${constraintId}`;
}
