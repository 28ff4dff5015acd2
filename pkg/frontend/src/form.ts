/** Scenario form state, presets, and client-side validation mirroring the
 * backend's Scenario invariants. The form never computes anything about the
 * solution; it only shapes a solve request. */

export interface ScenarioForm {
  weights: number[];
  moq: number | null;
  mpaRatio: number;
  pinnedRecipe: string;
  pinnedLevel: number | null;
  method: "iterative" | "global";
  timeLimit: number;
}

export interface WeightPreset {
  label: string;
  weights: number[];
}

/** Predefined weight sets; the balanced cost-first set is the default. */
export const WEIGHT_PRESETS: WeightPreset[] = [
  { label: "(100,100,1,1,1) — cost-first compromise", weights: [100, 100, 1, 1, 1] },
  { label: "(10,10,1,1,1)", weights: [10, 10, 1, 1, 1] },
  { label: "(1,1,1,1,1) — uniform", weights: [1, 1, 1, 1, 1] },
  { label: "(1,0,0,0,0) — purchases only", weights: [1, 0, 0, 0, 0] },
  { label: "(0,1,0,0,0) — stock value only", weights: [0, 1, 0, 0, 0] },
  { label: "(0,0,1,0,0) — turnover only", weights: [0, 0, 1, 0, 0] },
  { label: "(0,0,0,1,0) — freshness only", weights: [0, 0, 0, 1, 0] },
  { label: "(0,0,0,0,1) — expiration only", weights: [0, 0, 0, 0, 1] },
];

export function defaultForm(): ScenarioForm {
  return {
    weights: [...WEIGHT_PRESETS[0].weights],
    moq: null,
    mpaRatio: 0.05,
    pinnedRecipe: "",
    pinnedLevel: null,
    method: "iterative",
    timeLimit: 60,
  };
}

/** Mirrors the backend invariants; returns one message per violation. */
export function validateForm(form: ScenarioForm): string[] {
  const problems: string[] = [];
  if (form.weights.length !== 5) {
    problems.push("exactly five weights are required");
  }
  if (form.weights.some((w) => !Number.isFinite(w) || w < 0)) {
    problems.push("weights must be finite and non-negative");
  }
  if (form.moq !== null && (!Number.isFinite(form.moq) || form.moq < 0)) {
    problems.push("minimum order quantity must be non-negative");
  }
  if (!(form.mpaRatio > 0 && form.mpaRatio < 1)) {
    problems.push("minimum-share ratio must lie strictly between 0 and 1");
  }
  if (form.pinnedRecipe !== "" &&
      (form.pinnedLevel === null || !Number.isFinite(form.pinnedLevel) ||
       form.pinnedLevel < 0)) {
    problems.push("pinned recipe level must be a non-negative number");
  }
  if (!(form.timeLimit > 0)) {
    problems.push("time limit must be positive");
  }
  return problems;
}

export function toSolveRequest(form: ScenarioForm, instanceId: string) {
  const fixed: Record<string, number> = {};
  if (form.pinnedRecipe !== "" && form.pinnedLevel !== null) {
    fixed[form.pinnedRecipe] = form.pinnedLevel;
  }
  return {
    instance_id: instanceId,
    weights: form.weights,
    moq: form.moq,
    mpa_ratio: form.mpaRatio,
    fixed_recipe_levels: fixed,
    method: form.method,
    time_limit: form.timeLimit,
    backend: "simplex",
  };
}
