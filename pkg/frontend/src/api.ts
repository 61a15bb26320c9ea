/** Thin fetch client for the inference service.
 *
 * Every inference call carries a sequence number; a response whose call was
 * superseded by a newer one is reported as stale so the view never shows
 * results for evidence the user has already moved past.
 */

import type { ApiError, EvidencePayload, InferResponse, ScenarioRow } from "./types";

export interface MinimalResponse {
  ok: boolean;
  status: number;
  text(): Promise<string>;
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<MinimalResponse>;

export type InferOutcome =
  | { kind: "stale" }
  | { kind: "ok"; body: InferResponse; text: string }
  | { kind: "error"; status: number; body: ApiError };

export class ApiClient {
  private seq = 0;

  constructor(private fetchFn: FetchLike, private base = "") {}

  async infer(evidence: EvidencePayload): Promise<InferOutcome> {
    const mySeq = ++this.seq;
    const resp = await this.fetchFn(this.base + "/api/infer", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(evidence),
    });
    const text = await resp.text();
    if (mySeq !== this.seq) return { kind: "stale" };
    if (!resp.ok) return { kind: "error", status: resp.status, body: JSON.parse(text) };
    return { kind: "ok", body: JSON.parse(text), text };
  }

  async scenarioRows(): Promise<ScenarioRow[]> {
    const resp = await this.fetchFn(this.base + "/api/scenario/rows");
    const text = await resp.text();
    if (!resp.ok) throw new Error(`scenario rows: HTTP ${resp.status}`);
    return JSON.parse(text);
  }
}
