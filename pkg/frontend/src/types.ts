/** Payload shapes of the planning service HTTP API (v1). */

export interface SolveStatistics {
  iterations: number;
  moq_groups: number;
  mpa_groups: number;
  wall_time: number;
}

/** Response of POST /api/v1/solve, also nested in 422 infeasibility details. */
export interface SolutionDocument {
  status: string;
  method: string;
  statistics: SolveStatistics;
  objective?: number;
  components?: Record<string, number>;
  z?: Record<string, number>;
  z_hat?: Record<string, number>;
  buy?: Record<string, number>;
  stock_new?: Record<string, number>;
  stock_old?: Record<string, number>;
}

export interface SweepRowDoc {
  key: string;
  status: string;
  objective: number | null;
  f: number[] | null;
  t: (number | null)[] | null;
  iterations: number;
  consB: number;
  consP: number;
  wall_time: number;
}

export interface SweepResponse {
  kind: string;
  rows: SweepRowDoc[];
}

export interface BatchDoc {
  quantity: number;
  remaining_shelf_life: number;
}

export interface MaterialDoc {
  id: string;
  name: string;
  cost: number;
  demand: number;
  moq: number;
  turnover: number;
  shelf_life: number;
  batches: BatchDoc[];
}

export interface RecipePairDoc {
  material: string;
  qty: number;
}

export interface RecipeDoc {
  id: string;
  inputs: RecipePairDoc[];
  outputs: RecipePairDoc[];
  alt_groups: { members: string[]; total_quantity: number }[];
}

export interface InstanceDoc {
  schema_version: number;
  materials: MaterialDoc[];
  recipes: RecipeDoc[];
}

export interface SolveRequest {
  instance_id: string;
  weights: number[];
  moq: number | null;
  mpa_ratio: number;
  fixed_recipe_levels: Record<string, number>;
  method: "iterative" | "global";
  time_limit: number;
  backend: string;
}
