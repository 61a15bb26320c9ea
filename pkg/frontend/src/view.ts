/** Pure HTML renderers for inference results.
 *
 * Every number shown to the user is taken verbatim from the service payload
 * (String(value) of the parsed JSON number); this module does no probability
 * arithmetic. The only computation is converting masses to CSS percentage
 * widths for the stacked bars, which duplicates nothing the service reports.
 */

import type { AttributionEntry, InferResponse, OpinionRecord, TargetSummary } from "./types";

const ROUTE_ORDER = ["RA", "RB", "RC"];

const ROUTE_LABELS: Record<string, string> = {
  RA: "Route A",
  RB: "Route B",
  RC: "Route C",
};

const SEGMENTS = [
  { key: "safe", label: "safe", cls: "seg-safe" },
  { key: "danger", label: "danger", cls: "seg-danger" },
  { key: "uncertainty", label: "uncertain", cls: "seg-uncertainty" },
] as const;

export function fmt(x: number): string {
  return String(x);
}

function escapeHtml(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function targetOrder(resp: InferResponse): string[] {
  const names = Object.keys(resp.opinions);
  const front = ROUTE_ORDER.filter((n) => names.includes(n));
  const rest = names.filter((n) => !ROUTE_ORDER.includes(n)).sort();
  return front.concat(rest);
}

function segmentBar(target: string, op: OpinionRecord): string {
  const masses = [op.beliefs[0], op.beliefs[1], op.uncertainty];
  const parts = SEGMENTS.map((seg, i) => {
    const v = masses[i];
    return `<span class="seg ${seg.cls}" data-route="${target}" ` +
      `data-segment="${seg.key}" data-value="${fmt(v)}" ` +
      `style="width:${v * 100}%" title="${seg.label} ${fmt(v)}"></span>`;
  });
  const labels = SEGMENTS.map((seg, i) =>
    `<span class="seg-label ${seg.cls}">${seg.label} <b>${fmt(masses[i])}</b></span>`);
  return `<div class="bar" role="img" aria-label="belief masses for ${target}">` +
    parts.join("") + `</div><div class="bar-labels">` + labels.join(" ") + `</div>`;
}

function summaryLine(target: string, summary: TargetSummary | undefined): string {
  if (!summary) return "";
  const p = summary.projected[0];
  const [lo, hi] = summary.interval90;
  return `<p class="summary" data-route="${target}">` +
    `P(safe) = <b data-field="projected">${fmt(p)}</b>, ` +
    `90% interval [<span data-field="lo">${fmt(lo)}</span>, ` +
    `<span data-field="hi">${fmt(hi)}</span>]</p>`;
}

function attributionList(target: string, attribution: AttributionEntry[]): string {
  const entry = attribution.find((a) => a.target === target);
  if (!entry || entry.sources.length === 0) return "";
  const items = entry.sources.slice(0, 3).map((s) =>
    `<li data-source="${escapeHtml(s.source)}">${escapeHtml(s.source)}: ` +
    `<span data-field="delta_u">${fmt(s.delta_u)}</span></li>`);
  return `<details class="attribution"><summary>top uncertainty sources</summary>` +
    `<ol>${items.join("")}</ol></details>`;
}

export function renderResult(resp: InferResponse): string {
  const summary = resp.diagnostics.summary ?? {};
  const cards = targetOrder(resp).map((t) => {
    const label = ROUTE_LABELS[t] ?? t;
    return `<section class="route-card" data-route="${t}">` +
      `<h2>${escapeHtml(label)}</h2>` +
      segmentBar(t, resp.opinions[t]) +
      summaryLine(t, summary[t]) +
      attributionList(t, resp.attribution) +
      `</section>`;
  });
  return cards.join("\n");
}

export function renderError(message: string): string {
  return `<div class="error-banner" role="alert">${escapeHtml(message)}</div>`;
}
