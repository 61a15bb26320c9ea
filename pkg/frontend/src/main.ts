/** DOM wiring: the only module that touches the document. All logic lives in
 * state.ts / api.ts / view.ts so it can be tested without a browser. */

import { ApiClient } from "./api";
import { FormState, cameraUncertainty, fromEvidence, initialState, toEvidence, validate } from "./state";
import { renderError, renderResult } from "./view";
import type { ScenarioRow } from "./types";

const client = new ApiClient((url, init) => fetch(url, init));

let state: FormState = initialState();

function $(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el;
}

function readForm(): void {
  state.cca = ($("cca") as HTMLSelectElement).value as FormState["cca"];
  state.mca = ($("mca") as HTMLSelectElement).value as FormState["mca"];
  state.cameraObserved = ($("camera-on") as HTMLInputElement).checked;
  state.cameraNorm = Number(($("camera-norm") as HTMLInputElement).value);
  state.cameraViolent = Number(($("camera-violent") as HTMLInputElement).value);
}

function writeForm(): void {
  ($("cca") as HTMLSelectElement).value = state.cca;
  ($("mca") as HTMLSelectElement).value = state.mca;
  ($("camera-on") as HTMLInputElement).checked = state.cameraObserved;
  ($("camera-norm") as HTMLInputElement).value = String(state.cameraNorm);
  ($("camera-violent") as HTMLInputElement).value = String(state.cameraViolent);
}

function refreshFormStatus(): void {
  const problem = validate(state);
  $("camera-u").textContent = state.cameraObserved
    ? `uncertainty mass: ${cameraUncertainty(state).toFixed(3)}`
    : "camera unobserved";
  ($("submit") as HTMLButtonElement).disabled = problem !== null;
  $("form-error").textContent = problem ?? "";
  $("camera-sliders").classList.toggle("disabled", !state.cameraObserved);
}

async function runInference(): Promise<void> {
  const problem = validate(state);
  if (problem !== null) return;
  $("banner").innerHTML = "";
  $("results").setAttribute("aria-busy", "true");
  try {
    const outcome = await client.infer(toEvidence(state));
    if (outcome.kind === "stale") return;
    if (outcome.kind === "error") {
      $("banner").innerHTML = renderError(
        `service error (HTTP ${outcome.status}): ${outcome.body.message}`);
      return;
    }
    $("results").innerHTML = renderResult(outcome.body);
  } catch (err) {
    $("banner").innerHTML = renderError(`service unreachable: ${String(err)}`);
  } finally {
    $("results").removeAttribute("aria-busy");
  }
}

function onFormChange(): void {
  readForm();
  refreshFormStatus();
}

async function loadPresets(): Promise<void> {
  let rows: ScenarioRow[];
  try {
    rows = await client.scenarioRows();
  } catch (err) {
    $("banner").innerHTML = renderError(`could not load presets: ${String(err)}`);
    return;
  }
  const holder = $("presets");
  for (const row of rows) {
    const btn = document.createElement("button");
    btn.type = "button";
    btn.textContent = `row ${row.row}`;
    btn.title = row.observations;
    btn.addEventListener("click", () => {
      state = fromEvidence(row.evidence);
      writeForm();
      refreshFormStatus();
      void runInference();
    });
    holder.appendChild(btn);
  }
}

function init(): void {
  for (const id of ["cca", "mca", "camera-on", "camera-norm", "camera-violent"]) {
    $(id).addEventListener("input", onFormChange);
    $(id).addEventListener("change", onFormChange);
  }
  $("submit").addEventListener("click", () => void runInference());
  writeForm();
  refreshFormStatus();
  void loadPresets();
  void runInference();
}

document.addEventListener("DOMContentLoaded", init);
