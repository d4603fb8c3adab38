/** Browser wiring: token entry, course picker, panel routing.
 *
 * The token lives in memory for the session only. Each panel refresh
 * takes a RequestGate ticket; responses landing after a newer request
 * are dropped, so at most one response per panel ever reaches the DOM. */

import { ApiClient, ApiError } from "./api.js";
import { EXPORT_FORMATS, exportFilename, fetchExport, triggerDownload } from "./export.js";
import {
  PANELS,
  renderComparePanel,
  renderDropoutPanel,
  renderEmpty,
  renderError,
  renderForumPanel,
  renderFunnelPanel,
  renderLoading,
  renderQuizzesPanel,
  renderTimelinePanel,
  type Panel,
} from "./panels.js";
import { RequestGate, compareSelectionValid, initialState, type ViewState } from "./state.js";
import { COMPARE_KEYS, type CompareKey, type ExportFormat } from "./types.js";

const state: ViewState = initialState();
const gate = new RequestGate();
let client: ApiClient | null = null;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function setContent(html: string): void {
  el<HTMLDivElement>("panel-content").innerHTML = html;
}

async function refresh(): Promise<void> {
  if (!client || !state.course) {
    setContent(renderEmpty("Pick a course to begin."));
    return;
  }
  const course = state.course;
  const panel = state.panel;
  const ticket = gate.begin(panel);
  setContent(renderLoading(panel));
  try {
    const html = await renderPanel(client, course, panel);
    if (gate.isCurrent(panel, ticket)) setContent(html);
  } catch (error) {
    if (!gate.isCurrent(panel, ticket)) return;
    setContent(renderError(error));
    if (error instanceof ApiError && error.status === 401) {
      el<HTMLInputElement>("token").focus();
    }
  }
}

async function renderPanel(api: ApiClient, course: string, panel: Panel): Promise<string> {
  switch (panel) {
    case "funnel":
      return renderFunnelPanel(course, await api.funnel(course));
    case "dropout":
      return renderDropoutPanel(course, await api.dropout(course));
    case "forum": {
      const [forum, reads] = await Promise.all([api.forum(course), api.reads(course, "day")]);
      return renderForumPanel(course, forum, reads);
    }
    case "quizzes":
      return renderQuizzesPanel(course, await api.quizSummary(course));
    case "videos": {
      if (!state.video) return renderEmpty("Enter a video id above to inspect its timeline.");
      return renderTimelinePanel(await api.timeline(course, state.video));
    }
    case "compare": {
      if (!compareSelectionValid(state)) {
        return renderEmpty("Pick two different indicators to compare.");
      }
      const y = state.compareY === "reads" && state.sqrtAxis ? "reads_sqrt" : state.compareY;
      return renderComparePanel(course, await api.compare(course, state.compareX, y));
    }
  }
}

function fillSelect(select: HTMLSelectElement, options: readonly string[], value: string): void {
  select.innerHTML = options
    .map((o) => `<option value="${o}"${o === value ? " selected" : ""}>${o}</option>`)
    .join("");
}

async function connect(): Promise<void> {
  const base = el<HTMLInputElement>("base-url").value.replace(/\/$/, "");
  const token = el<HTMLInputElement>("token").value;
  client = new ApiClient(base, token);
  try {
    const { courses } = await client.courses();
    if (courses.length === 0) {
      setContent(renderEmpty("The store has no courses registered."));
      return;
    }
    state.course = courses[0] ?? null;
    fillSelect(el<HTMLSelectElement>("course"), courses, state.course ?? "");
    await refresh();
  } catch (error) {
    setContent(renderError(error));
  }
}

function wire(): void {
  const nav = el<HTMLElement>("panel-nav");
  nav.innerHTML = PANELS.map(
    (p) => `<button data-panel="${p}" class="nav-button">${p}</button>`,
  ).join("");
  nav.addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    const panel = target.dataset["panel"] as Panel | undefined;
    if (panel) {
      state.panel = panel;
      void refresh();
    }
  });

  el<HTMLButtonElement>("connect").addEventListener("click", () => void connect());
  el<HTMLSelectElement>("course").addEventListener("change", (event) => {
    state.course = (event.target as HTMLSelectElement).value;
    void refresh();
  });

  const selectX = el<HTMLSelectElement>("compare-x");
  const selectY = el<HTMLSelectElement>("compare-y");
  fillSelect(selectX, COMPARE_KEYS, state.compareX);
  fillSelect(selectY, COMPARE_KEYS, state.compareY);
  selectX.addEventListener("change", () => {
    state.compareX = selectX.value as CompareKey;
    void refresh();
  });
  selectY.addEventListener("change", () => {
    state.compareY = selectY.value as CompareKey;
    void refresh();
  });
  const sqrt = el<HTMLInputElement>("sqrt-axis");
  sqrt.checked = state.sqrtAxis;
  sqrt.addEventListener("change", () => {
    state.sqrtAxis = sqrt.checked;
    void refresh();
  });

  el<HTMLInputElement>("video-id").addEventListener("change", (event) => {
    state.video = (event.target as HTMLInputElement).value || null;
    void refresh();
  });

  const formatSelect = el<HTMLSelectElement>("export-format");
  fillSelect(formatSelect, EXPORT_FORMATS, "csv");
  el<HTMLButtonElement>("export").addEventListener("click", () => {
    void (async () => {
      if (!client || !state.course) return;
      const format = formatSelect.value as ExportFormat;
      try {
        const body = await fetchExport(client, state.course, format);
        triggerDownload(body, exportFilename(state.course, format));
      } catch (error) {
        el<HTMLDivElement>("toast").textContent =
          error instanceof Error ? `Export failed: ${error.message}` : "Export failed";
      }
    })();
  });

  setContent(renderEmpty("Enter the API token and connect."));
}

wire();
