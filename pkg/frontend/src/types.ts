/** Payload shapes of the explanation service HTTP API. */

export type CostJson = number | "inf";

export interface VariableDoc {
  id: number;
  domain: number[];
  owner: number;
}

export interface TableRow {
  values: number[];
  cost: CostJson;
}

export interface ConstraintDoc {
  id: number;
  scope: number[];
  table: TableRow[];
}

export interface Labels {
  variables?: Record<string, string>;
  values?: Record<string, Record<string, string>>;
  constraints?: Record<string, string>;
}

export interface InstanceDoc {
  agents: number[];
  variables: VariableDoc[];
  constraints: ConstraintDoc[];
  labels?: Labels;
}

export interface SessionInfo {
  session_id: string;
  instance: InstanceDoc;
  solution: Record<string, number> | null;
  solution_mode: string | null;
  solution_cost: CostJson | null;
  history_length: number;
}

export interface QueryDoc {
  asked_agent: number;
  original: Record<string, number>;
  alternative: Record<string, number>;
}

export interface GroundedDoc {
  constraint_id: number;
  scope: number[];
  values: number[];
  cost: CostJson;
}

export interface ExplanationDoc {
  solution_side: GroundedDoc[];
  alternative_side: GroundedDoc[];
  solution_cost: CostJson;
  alternative_cost: CostJson;
}

export interface StatsDoc {
  nclo: number;
  messages: number;
  length: number;
  valid: boolean;
  rounds: number;
  steps: number;
}

export interface RenderLine {
  constraint_id: number;
  scope: number[];
  values: number[];
  cost: CostJson;
  partners: number[];
}

export interface Rendering {
  solution_lines: RenderLine[];
  alternative_lines: RenderLine[];
  solution_total: CostJson;
  alternative_total: CostJson;
  valid: boolean;
  length: number;
  nclo: number;
}

export interface ExplainResponse {
  query: QueryDoc;
  variant: string;
  explanation: ExplanationDoc;
  stats: StatsDoc;
  rendering: Rendering;
}

export const VARIANTS = ["base", "o1", "o2", "v1", "v2"] as const;
export type Variant = (typeof VARIANTS)[number];
