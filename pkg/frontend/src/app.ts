/** DOM wiring: scenario form, solve queue, result panel, sweep explorer.
 *
 * One solve is in flight per tab; submissions made while one is running
 * queue client-side and run in order.
 */

import { ApiClient, ApiError, InfeasibleError } from "./api.js";
import {
  ScenarioForm,
  WEIGHT_PRESETS,
  defaultForm,
  toSolveRequest,
  validateForm,
} from "./form.js";
import {
  renderDualAxisChart,
  renderInfeasible,
  renderSolution,
  renderSweepTable,
} from "./render.js";
import type { InstanceDoc } from "./types.js";

const api = new ApiClient();

interface AppState {
  instance: InstanceDoc | null;
  instanceId: string | null;
  form: ScenarioForm;
  queue: (() => Promise<void>)[];
  running: boolean;
}

const state: AppState = {
  instance: null,
  instanceId: null,
  form: defaultForm(),
  queue: [],
  running: false,
};

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function setBusy(busy: boolean): void {
  el<HTMLButtonElement>("solve-button").disabled = busy;
  el("busy").hidden = !busy;
}

function enqueue(work: () => Promise<void>): void {
  state.queue.push(work);
  void drain();
}

async function drain(): Promise<void> {
  if (state.running) return;
  state.running = true;
  setBusy(true);
  try {
    for (;;) {
      const work = state.queue.shift();
      if (!work) break;
      await work();
    }
  } finally {
    state.running = false;
    setBusy(false);
  }
}

function showError(message: string): void {
  el("results").innerHTML =
    `<div class="banner error" role="alert"></div>`;
  el("results").querySelector(".banner")!.textContent = message;
}

function readForm(): ScenarioForm {
  const weights = el<HTMLInputElement>("weights").value
    .split(",").map((w) => Number(w.trim()));
  const moqRaw = el<HTMLInputElement>("moq").value.trim();
  const levelRaw = el<HTMLInputElement>("pinned-level").value.trim();
  return {
    weights,
    moq: moqRaw === "" ? null : Number(moqRaw),
    mpaRatio: Number(el<HTMLInputElement>("mpa-ratio").value),
    pinnedRecipe: el<HTMLSelectElement>("pinned-recipe").value,
    pinnedLevel: levelRaw === "" ? null : Number(levelRaw),
    method: el<HTMLSelectElement>("method").value as "iterative" | "global",
    timeLimit: Number(el<HTMLInputElement>("time-limit").value),
  };
}

async function doSolve(): Promise<void> {
  const form = readForm();
  const problems = validateForm(form);
  if (problems.length > 0) {
    showError(problems.join("; "));
    return;
  }
  if (!state.instanceId || !state.instance) {
    showError("Upload an instance first.");
    return;
  }
  state.form = form;
  const instance = state.instance;
  const request = toSolveRequest(form, state.instanceId);
  enqueue(async () => {
    try {
      const doc = await api.solve(request);
      el("results").innerHTML = renderSolution(doc, form.weights, instance);
    } catch (err) {
      if (err instanceof InfeasibleError) {
        // banner plus verbatim diagnostics; previous results are replaced
        el("results").innerHTML = renderInfeasible(err.doc);
      } else if (err instanceof ApiError) {
        showError(`Solve failed (${err.status}): ${JSON.stringify(err.detail)}`);
      } else {
        showError(String(err));
      }
    }
  });
}

async function doSweep(): Promise<void> {
  if (!state.instanceId) {
    showError("Upload an instance first.");
    return;
  }
  const kind = el<HTMLSelectElement>("sweep-kind").value as
    "weights" | "hogs" | "moq" | "demand";
  const instanceId = state.instanceId;
  const params: Record<string, unknown> = { instance_id: instanceId };
  const values = el<HTMLInputElement>("sweep-values").value;
  if (kind === "weights") {
    params.weight_sets = values.split(";").map(
      (set) => set.split(",").map((v) => Number(v.trim())));
  } else if (kind === "hogs") {
    params.recipe = el<HTMLInputElement>("sweep-recipe").value;
    params.levels = values.split(",").map(Number);
  } else if (kind === "moq") {
    params.moq_values = values.split(",").map(Number);
  } else {
    params.counts = values.split(",").map(Number);
  }
  enqueue(async () => {
    try {
      const response = await api.sweep(kind, params);
      const keyLabel = { weights: "weights", hogs: "pinned level",
                         moq: "MOQ", demand: "demands" }[kind];
      el("sweep-results").innerHTML =
        renderDualAxisChart(response, keyLabel) +
        renderSweepTable(response, keyLabel);
    } catch (err) {
      el("sweep-results").innerHTML = `<div class="banner error"></div>`;
      el("sweep-results").querySelector(".banner")!.textContent =
        err instanceof ApiError
          ? `Sweep failed (${err.status}): ${JSON.stringify(err.detail)}`
          : String(err);
    }
  });
}

async function loadInstance(file: File): Promise<void> {
  try {
    const doc = JSON.parse(await file.text()) as InstanceDoc;
    const id = await api.uploadInstance(doc);
    state.instance = doc;
    state.instanceId = id;
    const meta = await api.instanceMetadata(id);
    el("instance-info").textContent =
      `${meta.materials} materials, ${meta.recipes} recipes, ` +
      `${meta.nonzero_demands} demands`;
    const picker = el<HTMLSelectElement>("pinned-recipe");
    picker.innerHTML = `<option value="">— none —</option>` +
      doc.recipes.map((r) =>
        `<option value="${r.id}">${r.id}</option>`).join("");
  } catch (err) {
    showError(err instanceof ApiError
      ? `Upload rejected: ${JSON.stringify(err.detail)}`
      : String(err));
  }
}

export function init(): void {
  const presets = el<HTMLSelectElement>("preset");
  presets.innerHTML = WEIGHT_PRESETS.map((preset, i) =>
    `<option value="${i}">${preset.label}</option>`).join("") +
    `<option value="custom">custom…</option>`;
  presets.addEventListener("change", () => {
    if (presets.value !== "custom") {
      const preset = WEIGHT_PRESETS[Number(presets.value)];
      el<HTMLInputElement>("weights").value = preset.weights.join(",");
      el<HTMLInputElement>("weights").readOnly = true;
    } else {
      el<HTMLInputElement>("weights").readOnly = false;
    }
  });
  el<HTMLInputElement>("weights").value =
    WEIGHT_PRESETS[0].weights.join(",");
  el<HTMLInputElement>("weights").readOnly = true;

  el<HTMLInputElement>("instance-file").addEventListener("change", (event) => {
    const input = event.target as HTMLInputElement;
    if (input.files?.[0]) void loadInstance(input.files[0]);
  });
  el<HTMLButtonElement>("solve-button").addEventListener("click", () => {
    void doSolve();
  });
  el<HTMLButtonElement>("sweep-button").addEventListener("click", () => {
    void doSweep();
  });
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  init();
}
