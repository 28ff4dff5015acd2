/** Pure rendering: payloads in, HTML/SVG strings out.
 *
 * Every number shown is taken verbatim from a backend response and carried
 * in a machine-readable `data-value` attribute, so contract tests can check
 * the rendered view field-for-field against recorded payloads. No
 * optimization math happens here.
 */

import type {
  InstanceDoc,
  SolutionDocument,
  SweepResponse,
  SweepRowDoc,
} from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Display formatting only; data-value always carries the exact number. */
export function fmt(value: number): string {
  if (!Number.isFinite(value)) return String(value);
  if (value !== 0 && (Math.abs(value) >= 1e7 || Math.abs(value) < 1e-3)) {
    return value.toExponential(4);
  }
  return value.toLocaleString("en-US", { maximumFractionDigits: 3 });
}

function cell(field: string, value: number, text?: string): string {
  return `<td data-field="${escapeHtml(field)}" data-value="${value}">` +
    `${escapeHtml(text ?? fmt(value))}</td>`;
}

const COMPONENT_LABELS = [
  "purchases",
  "stock value",
  "low turnover",
  "old-stock freshness",
  "expiration",
];

export function renderObjectiveBreakdown(
  doc: SolutionDocument, weights: number[]): string {
  const components = doc.components ?? {};
  const rows = [0, 1, 2, 3, 4].map((l) => {
    const f = components[`f${l}`] ?? 0;
    const w = weights[l] ?? 0;
    return `<tr><th>f${l} — ${COMPONENT_LABELS[l]}</th>` +
      cell(`f${l}`, f) +
      cell(`w${l}`, w) +
      cell(`wf${l}`, w * f) +
      `</tr>`;
  });
  const objective = doc.objective ?? 0;
  return `<table class="components">
<thead><tr><th>component</th><th>value</th><th>weight</th><th>weighted</th></tr></thead>
<tbody>${rows.join("\n")}</tbody>
<tfoot><tr><th>objective</th><td></td><td></td>${cell("objective", objective)}</tr></tfoot>
</table>`;
}

export interface BuyLine {
  material: string;
  name: string;
  quantity: number;
  unitCost: number;
  nominalCost: number;
}

/** Buy list sorted by nominal cost (quantity x unit cost), descending. */
export function buyLines(doc: SolutionDocument, instance: InstanceDoc): BuyLine[] {
  const costs = new Map(instance.materials.map((m) => [m.id, m]));
  return Object.entries(doc.buy ?? {})
    .map(([material, quantity]) => {
      const mat = costs.get(material);
      const unitCost = mat?.cost ?? 0;
      return {
        material,
        name: mat?.name ?? "",
        quantity,
        unitCost,
        nominalCost: quantity * unitCost,
      };
    })
    .sort((a, b) => b.nominalCost - a.nominalCost);
}

export function renderBuyList(doc: SolutionDocument, instance: InstanceDoc): string {
  const lines = buyLines(doc, instance);
  if (lines.length === 0) {
    return `<p class="empty">Nothing to buy.</p>`;
  }
  const rows = lines.map((line) =>
    `<tr data-material="${escapeHtml(line.material)}">` +
    `<th>${escapeHtml(line.material)}${line.name ? " — " + escapeHtml(line.name) : ""}</th>` +
    cell(`buy:${line.material}`, line.quantity) +
    cell(`cost:${line.material}`, line.unitCost) +
    cell(`nominal:${line.material}`, line.nominalCost) +
    `</tr>`);
  return `<table class="buy-list">
<thead><tr><th>material</th><th>quantity</th><th>unit cost</th><th>nominal cost</th></tr></thead>
<tbody>${rows.join("\n")}</tbody>
</table>`;
}

export function renderStockRemainders(doc: SolutionDocument): string {
  const ids = new Set([
    ...Object.keys(doc.stock_new ?? {}),
    ...Object.keys(doc.stock_old ?? {}),
  ]);
  if (ids.size === 0) {
    return `<p class="empty">No stock remainders.</p>`;
  }
  const rows = [...ids].sort().map((mid) =>
    `<tr data-material="${escapeHtml(mid)}"><th>${escapeHtml(mid)}</th>` +
    cell(`stock_new:${mid}`, doc.stock_new?.[mid] ?? 0) +
    cell(`stock_old:${mid}`, doc.stock_old?.[mid] ?? 0) +
    `</tr>`);
  return `<table class="stock-list">
<thead><tr><th>material</th><th>new</th><th>old</th></tr></thead>
<tbody>${rows.join("\n")}</tbody>
</table>`;
}

export function renderStatistics(doc: SolutionDocument): string {
  const s = doc.statistics;
  return `<dl class="statistics">
<dt>iterations</dt><dd data-field="iterations" data-value="${s.iterations}">${s.iterations}</dd>
<dt>MOQ groups</dt><dd data-field="moq_groups" data-value="${s.moq_groups}">${s.moq_groups}</dd>
<dt>share groups</dt><dd data-field="mpa_groups" data-value="${s.mpa_groups}">${s.mpa_groups}</dd>
<dt>wall time</dt><dd data-field="wall_time" data-value="${s.wall_time}">${fmt(s.wall_time)} s</dd>
</dl>`;
}

export function renderRecipeActivity(doc: SolutionDocument): string {
  const z = doc.z ?? {};
  const rows = Object.entries(z).sort(([a], [b]) => a.localeCompare(b)).map(
    ([rid, level]) =>
      `<tr><th>${escapeHtml(rid)}</th>${cell(`z:${rid}`, level)}</tr>`);
  if (rows.length === 0) {
    return `<p class="empty">No recipe is active.</p>`;
  }
  return `<table class="activity">
<thead><tr><th>recipe</th><th>activity</th></tr></thead>
<tbody>${rows.join("\n")}</tbody>
</table>`;
}

/** Full solution view for a successful solve. */
export function renderSolution(
  doc: SolutionDocument, weights: number[], instance: InstanceDoc): string {
  return `<div class="solution" data-status="${escapeHtml(doc.status)}">
<h2>Solution <span class="status-ok">${escapeHtml(doc.status)}</span>
<span class="method">${escapeHtml(doc.method)}</span></h2>
<h3>Cost breakdown</h3>
${renderObjectiveBreakdown(doc, weights)}
<h3>Buy recommendations</h3>
${renderBuyList(doc, instance)}
<h3>Recipe activity</h3>
${renderRecipeActivity(doc)}
<h3>Stock remainders</h3>
${renderStockRemainders(doc)}
<h3>Solve statistics</h3>
${renderStatistics(doc)}
</div>`;
}

/** Infeasibility banner with the 422 diagnostics verbatim; no result data. */
export function renderInfeasible(detail: SolutionDocument): string {
  return `<div class="infeasible" data-status="${escapeHtml(detail.status)}">
<div class="banner" role="alert">The scenario is ${escapeHtml(detail.status)}; no plan exists under the given constraints.</div>
<details open><summary>Solver diagnostics</summary>
<pre class="diagnostics">${escapeHtml(JSON.stringify(detail, null, 2))}</pre>
</details>
</div>`;
}

// ---------------------------------------------------------------------------
// Sweep explorer: dual-axis line chart + table mirroring the CSV.

const SERIES = [
  { component: 0, axis: "left", color: "#1f77b4" },
  { component: 1, axis: "left", color: "#ff7f0e" },
  { component: 2, axis: "right", color: "#2ca02c" },
  { component: 3, axis: "right", color: "#d62728" },
  { component: 4, axis: "right", color: "#9467bd" },
] as const;

const W = 640;
const H = 360;
const PAD = { left: 64, right: 64, top: 24, bottom: 40 };

function scale(value: number, lo: number, hi: number,
               outLo: number, outHi: number): number {
  if (hi <= lo) return (outLo + outHi) / 2;
  return outLo + ((value - lo) / (hi - lo)) * (outHi - outLo);
}

function axisRange(rows: SweepRowDoc[], components: readonly number[]):
    [number, number] {
  const values = rows.flatMap((row) =>
    row.f ? components.map((c) => row.f![c]) : []);
  if (values.length === 0) return [0, 1];
  const lo = Math.min(0, ...values);
  const hi = Math.max(...values);
  return hi > lo ? [lo, hi] : [lo, lo + 1];
}

function ticks(lo: number, hi: number, n = 5): number[] {
  return Array.from({ length: n }, (_, i) => lo + ((hi - lo) * i) / (n - 1));
}

/** f0/f1 against the left axis, f2/f3/f4 against the right axis. */
export function renderDualAxisChart(response: SweepResponse,
                                    xLabel: string): string {
  const rows = response.rows.filter((row) => row.f !== null);
  const [leftLo, leftHi] = axisRange(rows, [0, 1]);
  const [rightLo, rightHi] = axisRange(rows, [2, 3, 4]);
  const x = (i: number) =>
    scale(i, 0, Math.max(1, rows.length - 1), PAD.left, W - PAD.right);

  const series = SERIES.map(({ component, axis, color }) => {
    const [lo, hi] = axis === "left" ? [leftLo, leftHi] : [rightLo, rightHi];
    const points = rows.map((row, i) => {
      const y = scale(row.f![component], lo, hi, H - PAD.bottom, PAD.top);
      return `${x(i).toFixed(1)},${y.toFixed(1)}`;
    }).join(" ");
    return `<polyline data-series="f${component}" data-axis="${axis}" ` +
      `fill="none" stroke="${color}" stroke-width="2" points="${points}"/>`;
  });

  const leftTicks = ticks(leftLo, leftHi).map((v) => {
    const y = scale(v, leftLo, leftHi, H - PAD.bottom, PAD.top).toFixed(1);
    return `<text x="${PAD.left - 6}" y="${y}" text-anchor="end" ` +
      `class="tick" data-axis="left">${fmt(v)}</text>`;
  });
  const rightTicks = ticks(rightLo, rightHi).map((v) => {
    const y = scale(v, rightLo, rightHi, H - PAD.bottom, PAD.top).toFixed(1);
    return `<text x="${W - PAD.right + 6}" y="${y}" text-anchor="start" ` +
      `class="tick" data-axis="right">${fmt(v)}</text>`;
  });
  const xTicks = rows.map((row, i) =>
    `<text x="${x(i).toFixed(1)}" y="${H - PAD.bottom + 16}" ` +
    `text-anchor="middle" class="tick">${escapeHtml(row.key)}</text>`);

  const legend = SERIES.map(({ component, axis, color }, i) =>
    `<g transform="translate(${PAD.left + i * 110}, ${H - 6})">` +
    `<rect width="10" height="10" y="-9" fill="${color}"/>` +
    `<text x="14">f${component} (${axis})</text></g>`);

  return `<svg class="sweep-chart" viewBox="0 0 ${W} ${H}" role="img"
 aria-label="objective components versus ${escapeHtml(xLabel)}">
<line x1="${PAD.left}" y1="${PAD.top}" x2="${PAD.left}" y2="${H - PAD.bottom}" class="axis" data-axis="left" stroke="black"/>
<line x1="${W - PAD.right}" y1="${PAD.top}" x2="${W - PAD.right}" y2="${H - PAD.bottom}" class="axis" data-axis="right" stroke="black"/>
<line x1="${PAD.left}" y1="${H - PAD.bottom}" x2="${W - PAD.right}" y2="${H - PAD.bottom}" class="axis" stroke="black"/>
<text x="${W / 2}" y="${H - PAD.bottom + 32}" text-anchor="middle">${escapeHtml(xLabel)}</text>
<text transform="rotate(-90) translate(${-(H / 2)}, 16)" text-anchor="middle">f0, f1</text>
<text transform="rotate(90) translate(${H / 2}, ${-(W - 14)})" text-anchor="middle">f2, f3, f4</text>
${leftTicks.join("\n")}
${rightTicks.join("\n")}
${xTicks.join("\n")}
${series.join("\n")}
${legend.join("\n")}
</svg>`;
}

/** t-value cell background from green (0) to red, verbatim value kept. */
function tCell(row: SweepRowDoc, l: number): string {
  const t = row.t?.[l] ?? null;
  if (t === null) {
    return `<td data-field="t${l}" data-value="">n/a</td>`;
  }
  const hue = Math.max(0, 120 - Math.min(Math.max(t, 0), 100) * 1.2);
  return `<td data-field="t${l}" data-value="${t}" ` +
    `style="background:hsl(${hue.toFixed(0)},70%,85%)">${fmt(t)}</td>`;
}

export function renderSweepTable(response: SweepResponse,
                                 keyLabel: string): string {
  const hasT = response.rows.some((row) => row.t !== null);
  const header =
    `<tr><th>${escapeHtml(keyLabel)}</th><th>status</th><th>objective</th>` +
    [0, 1, 2, 3, 4].map((l) => `<th>f${l}</th>`).join("") +
    (hasT ? [0, 1, 2, 3, 4].map((l) => `<th>t${l}</th>`).join("") : "") +
    `<th>#iter</th><th>#consB</th><th>#consP</th><th>time [s]</th></tr>`;
  const body = response.rows.map((row) => {
    const f = row.f ?? [null, null, null, null, null];
    const cells = [
      `<th>${escapeHtml(row.key)}</th>`,
      `<td data-field="status">${escapeHtml(row.status)}</td>`,
      row.objective === null
        ? `<td data-field="objective" data-value="">—</td>`
        : cell("objective", row.objective),
      ...f.map((v, l) => v === null
        ? `<td data-field="f${l}" data-value="">—</td>`
        : cell(`f${l}`, v)),
      ...(hasT ? [0, 1, 2, 3, 4].map((l) => tCell(row, l)) : []),
      cell("iterations", row.iterations, String(row.iterations)),
      cell("consB", row.consB, String(row.consB)),
      cell("consP", row.consP, String(row.consP)),
      cell("wall_time", row.wall_time),
    ];
    return `<tr data-key="${escapeHtml(row.key)}">${cells.join("")}</tr>`;
  });
  return `<table class="sweep-table">
<thead>${header}</thead>
<tbody>${body.join("\n")}</tbody>
</table>`;
}

/** Progress indicator for partially completed sweeps. */
export function renderSweepProgress(done: number, total: number): string {
  return `<p class="progress" data-done="${done}" data-total="${total}">` +
    `${done} of ${total} rows completed…</p>`;
}
