import { describe, expect, it } from "vitest";

import { renderError, renderResult } from "../src/view";
import type { InferResponse } from "../src/types";
import inferRow1 from "./fixtures/infer_row1.json";
import inferRow4 from "./fixtures/infer_row4.json";

const row1 = inferRow1 as unknown as InferResponse;
const row4 = inferRow4 as unknown as InferResponse;

function segmentValue(html: string, route: string, segment: string): string {
  const re = new RegExp(
    `data-route="${route}" data-segment="${segment}" data-value="([^"]*)"`);
  const m = html.match(re);
  expect(m, `segment ${route}/${segment} missing`).not.toBeNull();
  return m![1];
}

function summaryField(html: string, route: string, field: string): string {
  const re = new RegExp(
    `data-route="${route}"[^]*?data-field="${field}"[^>]*>([^<]*)<`);
  const m = html.match(re);
  expect(m, `summary ${route}/${field} missing`).not.toBeNull();
  return m![1];
}

describe("result rendering uses service values verbatim", () => {
  it("shows every route opinion of the captured service response byte-equal", () => {
    for (const resp of [row1, row4]) {
      const html = renderResult(resp);
      for (const route of ["RA", "RB", "RC"]) {
        const op = resp.opinions[route];
        expect(segmentValue(html, route, "safe")).toBe(String(op.beliefs[0]));
        expect(segmentValue(html, route, "danger")).toBe(String(op.beliefs[1]));
        expect(segmentValue(html, route, "uncertainty")).toBe(String(op.uncertainty));
        const summary = resp.diagnostics.summary![route];
        expect(summaryField(html, route, "projected")).toBe(String(summary.projected[0]));
        expect(summaryField(html, route, "lo")).toBe(String(summary.interval90[0]));
        expect(summaryField(html, route, "hi")).toBe(String(summary.interval90[1]));
      }
    }
  });

  it("renders at most the top three attribution sources, in service order", () => {
    const html = renderResult(row4);
    const rb = row4.attribution.find((a) => a.target === "RB")!;
    const top = rb.sources.slice(0, 3);
    let cursor = -1;
    for (const src of top) {
      const idx = html.indexOf(`>${src.delta_u}</span>`);
      expect(idx, `delta_u ${src.delta_u} missing`).toBeGreaterThan(cursor);
      cursor = idx;
    }
    if (rb.sources.length > 3) {
      expect(html).not.toContain(`>${rb.sources[3].delta_u}</span>`);
    }
  });

  it("row 4 marks Route B as the most uncertain route", () => {
    const html = renderResult(row4);
    const u = (route: string) => Number(segmentValue(html, route, "uncertainty"));
    expect(u("RB")).toBeGreaterThan(u("RA"));
    expect(u("RB")).toBeGreaterThan(u("RC"));
    // and its uncertainty band is visibly wide: above 0.2 of the bar
    expect(u("RB")).toBeGreaterThan(0.2);
  });

  it("displays deliberately wrong service numbers unchanged (no recomputation)", () => {
    // masses that violate sum-to-one and an interval disagreeing with the
    // projected value: a client doing its own math could not produce these
    const tampered: InferResponse = {
      opinions: {
        RA: { beliefs: [0.111, 0.222], uncertainty: 0.9876, base_rate: [0.5, 0.5] },
      },
      diagnostics: {
        summary: { RA: { projected: [0.123, 0.877], interval90: [0.9, 0.1] } },
      },
      attribution: [
        { target: "RA", sources: [{ source: "made up", delta_u: 0.424242 }] },
      ],
    };
    const html = renderResult(tampered);
    expect(segmentValue(html, "RA", "safe")).toBe("0.111");
    expect(segmentValue(html, "RA", "danger")).toBe("0.222");
    expect(segmentValue(html, "RA", "uncertainty")).toBe("0.9876");
    expect(summaryField(html, "RA", "projected")).toBe("0.123");
    expect(summaryField(html, "RA", "lo")).toBe("0.9");
    expect(summaryField(html, "RA", "hi")).toBe("0.1");
    expect(html).toContain("0.424242");
  });

  it("orders route cards A, B, C and keeps other targets after them", () => {
    const html = renderResult(row4);
    const positions = ["RA", "RB", "RC", "CD"].map((r) =>
      html.indexOf(`<section class="route-card" data-route="${r}">`));
    expect(positions.every((p) => p >= 0)).toBe(true);
    expect(positions).toEqual([...positions].sort((a, b) => a - b));
  });

  it("labels segments with text, not color alone", () => {
    const html = renderResult(row1);
    expect(html).toContain("safe");
    expect(html).toContain("danger");
    expect(html).toContain("uncertain");
  });
});

describe("error rendering", () => {
  it("escapes markup in service error messages", () => {
    const html = renderError('bad <script>alert("x")</script>');
    expect(html).toContain("error-banner");
    expect(html).not.toContain("<script>");
    expect(html).toContain("&lt;script&gt;");
  });
});
