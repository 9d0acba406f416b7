/** DOM wiring: schedule grid, query drafting, variant picker, explanation
 * panel, and the history sidebar.  All logic lives in the tested modules;
 * this file only moves data between them and the page. */

import { ApiError, defaultBaseUrl, ExplainClient } from "./api.js";
import { valueName, variableName } from "./labels.js";
import { buildExplainBody, canSubmit, draftSize, toggleCell, type Draft } from "./queryDraft.js";
import { renderExplanation } from "./render.js";
import type { ExplainResponse, SessionInfo, Variant } from "./types.js";

const client = new ExplainClient(defaultBaseUrl());

interface AppState {
  session: SessionInfo | null;
  draft: Draft;
  variant: Variant;
  history: ExplainResponse[];
  shown: ExplainResponse | null;
}

const state: AppState = {
  session: null,
  draft: {},
  variant: "base",
  history: [],
  shown: null,
};

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function byId(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

function setStatus(text: string, isError = false): void {
  const status = byId("status");
  status.textContent = text;
  status.classList.toggle("error", isError);
}

async function loadDemo(): Promise<void> {
  await loadSession({ preset: "meeting-demo" });
}

async function loadRandom(): Promise<void> {
  const seed = Math.floor(Math.random() * 1_000_000);
  await loadSession({
    generator: { kind: "meeting", num_agents: 6, density: 0.5, num_slots: 6, seed },
  });
}

async function loadSession(body: object): Promise<void> {
  try {
    setStatus("creating session…");
    const created = await client.createSession(body);
    await client.solve(created.session_id, { mode: "optimal" });
    state.session = await client.getSession(created.session_id);
    state.draft = {};
    state.history = [];
    state.shown = null;
    setStatus(`session ${created.session_id} ready`);
    renderAll();
  } catch (err) {
    setStatus(err instanceof ApiError ? err.message : String(err), true);
  }
}

function renderGrid(): void {
  const grid = byId("grid");
  grid.textContent = "";
  const session = state.session;
  if (!session || !session.solution) return;
  const instance = session.instance;
  const table = el("table", "schedule");
  const header = el("tr");
  header.appendChild(el("th", "", ""));
  const domain = instance.variables[0]?.domain ?? [];
  const sharedDomain = instance.variables.every(
    (v) => JSON.stringify(v.domain) === JSON.stringify(domain),
  );
  for (const variable of instance.variables) {
    const row = el("tr");
    row.appendChild(el("th", "", variableName(instance, variable.id)));
    for (const value of variable.domain) {
      const cell = el("td", "cell", valueName(instance, variable.id, value));
      const current = session.solution![String(variable.id)] === value;
      if (current) cell.classList.add("current");
      if (state.draft[variable.id] === value) cell.classList.add("selected");
      cell.addEventListener("click", () => {
        state.draft = toggleCell(state.draft, variable.id, value, session.solution!);
        renderAll();
      });
      row.appendChild(cell);
    }
    table.appendChild(row);
  }
  if (sharedDomain && instance.variables.length > 0) {
    for (const value of domain) {
      header.appendChild(el("th", "", valueName(instance, instance.variables[0].id, value)));
    }
    table.insertBefore(header, table.firstChild);
  }
  grid.appendChild(table);
  const cost = session.solution_cost;
  byId("solution-note").textContent =
    `current optimal cost: ${cost === "inf" ? "infinity" : cost}` +
    ` — click cells to pick alternative values (${draftSize(state.draft)} selected)`;
}

function renderControls(): void {
  const submit = byId("submit") as HTMLButtonElement;
  submit.disabled = !(
    state.session?.solution && canSubmit(state.draft, state.session.solution)
  );
}

function renderPanel(): void {
  const panel = byId("panel");
  panel.textContent = "";
  const session = state.session;
  const shown = state.shown;
  if (!session || !shown) return;
  const view = renderExplanation(session.instance, shown);
  if (view.error) {
    panel.appendChild(el("div", "card error", view.error));
    return;
  }
  const badge = el("span", view.validBadge === "valid" ? "badge ok" : "badge bad", view.validBadge);
  const head = el("div", "panel-head");
  head.appendChild(el("strong", "", `variant ${shown.variant}`));
  head.appendChild(badge);
  head.appendChild(el("span", "meta", `length ${view.length} · NCLO ${view.nclo}`));
  panel.appendChild(head);
  const sides = el("div", "sides");
  for (const [title, lines, total] of [
    ["current values", view.solutionLines, view.solutionTotal],
    ["alternative", view.alternativeLines, view.alternativeTotal],
  ] as const) {
    const side = el("div", "side");
    side.appendChild(el("h3", "", `${title} — total ${total === "inf" ? "infinity" : total}`));
    const list = el("ul");
    for (const line of lines) list.appendChild(el("li", "", line));
    side.appendChild(list);
    sides.appendChild(side);
  }
  panel.appendChild(sides);
  panel.appendChild(el("p", "summary", view.summary));
}

function renderHistory(): void {
  const box = byId("history");
  box.textContent = "";
  state.history.forEach((entry, index) => {
    const item = el("button", "history-item");
    const vars = Object.keys(entry.query.original).length;
    item.textContent =
      `#${index + 1} ${entry.variant} · ${vars} var${vars === 1 ? "" : "s"} · ` +
      `${entry.stats.valid ? "valid" : "invalid"} · len ${entry.stats.length}`;
    item.addEventListener("click", () => {
      state.shown = entry;
      renderPanel();
    });
    box.appendChild(item);
  });
}

function renderAll(): void {
  renderGrid();
  renderControls();
  renderPanel();
  renderHistory();
}

async function submitDraft(): Promise<void> {
  const session = state.session;
  if (!session?.solution) return;
  try {
    const body = buildExplainBody(session.instance, state.draft, session.solution, state.variant);
    setStatus("asking…");
    const response = await client.explain(session.session_id, body);
    state.history.push(response);
    state.shown = response;
    setStatus("explanation received");
    renderAll();
  } catch (err) {
    setStatus(err instanceof ApiError ? err.message : String(err), true);
  }
}

export function start(): void {
  byId("load-demo").addEventListener("click", loadDemo);
  byId("load-random").addEventListener("click", loadRandom);
  byId("submit").addEventListener("click", submitDraft);
  const select = byId("variant") as HTMLSelectElement;
  select.addEventListener("change", () => {
    state.variant = select.value as Variant;
  });
  setStatus("load the demo or a random instance to begin");
}

if (typeof document !== "undefined" && document.getElementById("load-demo")) {
  start();
}
