/** What-if form state and its mapping to the /api/infer evidence payload.
 *
 * The form covers the three observable inputs of the route scenario:
 * two hard selectors (crime report CCA, military activity MCA) and the
 * camera's soft opinion on MA, entered as two belief sliders whose
 * remainder is the camera's uncertainty mass.
 */

import type { EvidencePayload, OpinionRecord } from "./types";

export type Selector = "norm" | "high" | "unobserved";

export interface FormState {
  cca: Selector;
  mca: Selector;
  cameraObserved: boolean;
  cameraNorm: number;
  cameraViolent: number;
  cameraBaseRate: number[];
}

const SUM_TOL = 1e-9;

export function initialState(): FormState {
  return {
    cca: "unobserved",
    mca: "unobserved",
    cameraObserved: false,
    cameraNorm: 0,
    cameraViolent: 0,
    cameraBaseRate: [0.5, 0.5],
  };
}

/** Uncertainty mass implied by the two camera sliders. */
export function cameraUncertainty(s: FormState): number {
  return 1 - s.cameraNorm - s.cameraViolent;
}

/** Returns a human-readable problem with the form, or null when valid. */
export function validate(s: FormState): string | null {
  if (!s.cameraObserved) return null;
  if (s.cameraNorm < 0 || s.cameraNorm > 1 || s.cameraViolent < 0 || s.cameraViolent > 1) {
    return "camera belief masses must be between 0 and 1";
  }
  if (s.cameraNorm + s.cameraViolent > 1 + SUM_TOL) {
    return "camera belief masses exceed 1; lower one slider";
  }
  return null;
}

/** Serialize the form into the evidence payload the service expects. */
export function toEvidence(s: FormState): EvidencePayload {
  const hard: Record<string, string> = {};
  if (s.cca !== "unobserved") hard["CCA"] = s.cca;
  if (s.mca !== "unobserved") hard["MCA"] = s.mca;
  const soft: Record<string, OpinionRecord> = {};
  if (s.cameraObserved) {
    soft["MA"] = {
      beliefs: [s.cameraNorm, s.cameraViolent],
      uncertainty: cameraUncertainty(s),
      base_rate: s.cameraBaseRate.slice(),
    };
  }
  return { hard, soft };
}

/** Populate the form from a preset evidence row served by the API. */
export function fromEvidence(ev: EvidencePayload): FormState {
  const s = initialState();
  const hard = ev.hard ?? {};
  if (hard["CCA"] === "norm" || hard["CCA"] === "high") s.cca = hard["CCA"];
  if (hard["MCA"] === "norm" || hard["MCA"] === "high") s.mca = hard["MCA"];
  const ma = (ev.soft ?? {})["MA"];
  if (ma) {
    s.cameraObserved = true;
    s.cameraNorm = ma.beliefs[0];
    s.cameraViolent = ma.beliefs[1];
    s.cameraBaseRate = ma.base_rate.slice();
  }
  return s;
}
