/** Wire shapes of the three /api endpoints. The UI displays these values
 * verbatim and never derives probabilities itself. */

export interface OpinionRecord {
  beliefs: number[];
  uncertainty: number;
  base_rate: number[];
}

export interface EvidencePayload {
  hard: Record<string, string>;
  soft: Record<string, OpinionRecord>;
}

export interface SourceEntry {
  source: string;
  delta_u: number;
}

export interface AttributionEntry {
  target: string;
  sources: SourceEntry[];
}

export interface TargetSummary {
  projected: number[];
  interval90: number[];
}

export interface InferResponse {
  opinions: Record<string, OpinionRecord>;
  diagnostics: { summary?: Record<string, TargetSummary> } & Record<string, unknown>;
  attribution: AttributionEntry[];
}

export interface ScenarioRow {
  row: number;
  observations: string;
  evidence: EvidencePayload;
}

export interface ApiError {
  error: string;
  message: string;
  node?: string;
}
