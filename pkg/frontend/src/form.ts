// Form model: maps server status to editable values, tracks dirtiness,
// and produces the config patch to send back. No DOM in here.

import type { EffectiveConfig, ServerState } from "./types.js";
import { FormValues, validateForm } from "./validation.js";

export function valuesFromConfig(config: EffectiveConfig): FormValues {
  return {
    receive_port: config.receive_port,
    send_port: config.send_port,
    target_ip: config.target_ip,
    remote: config.remote,
    bind_ip: config.bind_ip ?? "",
    credentials_enabled: config.credentials !== null,
    token: "",
    hub: config.credentials?.hub ?? "",
    group: config.credentials?.group ?? "",
    project: config.credentials?.project ?? "",
    max_qubits: config.max_qubits,
    default_shots: config.default_shots,
    seed: config.seed,
  };
}

// The patch sent on Start. Tokens are write-only: the server redacts
// them in status payloads, so an empty token field means "keep".
export function patchFromValues(
  values: FormValues,
  baseline: FormValues
): Record<string, unknown> {
  const patch: Record<string, unknown> = {};
  if (values.receive_port !== baseline.receive_port) patch.receive_port = values.receive_port;
  if (values.send_port !== baseline.send_port) patch.send_port = values.send_port;
  if (values.target_ip !== baseline.target_ip) patch.target_ip = values.target_ip;
  if (values.remote !== baseline.remote) patch.remote = values.remote;
  const bind = values.remote && values.bind_ip.length > 0 ? values.bind_ip : null;
  const baselineBind = baseline.remote && baseline.bind_ip.length > 0 ? baseline.bind_ip : null;
  if (bind !== baselineBind) patch.bind_ip = bind;
  if (values.credentials_enabled) {
    if (
      values.token.length > 0 ||
      !baseline.credentials_enabled ||
      values.hub !== baseline.hub ||
      values.group !== baseline.group ||
      values.project !== baseline.project
    ) {
      patch.credentials = {
        token: values.token,
        hub: values.hub,
        group: values.group,
        project: values.project,
      };
    }
  } else if (baseline.credentials_enabled) {
    patch.credentials = null;
  }
  if (values.max_qubits !== baseline.max_qubits) patch.max_qubits = values.max_qubits;
  if (values.default_shots !== baseline.default_shots) patch.default_shots = values.default_shots;
  if (values.seed !== baseline.seed) patch.seed = values.seed;
  return patch;
}

export function isDirty(values: FormValues, baseline: FormValues): boolean {
  return Object.keys(patchFromValues(values, baseline)).length > 0;
}

// Start is disabled while the form holds invalid edits or while a
// transition is in flight; Stop only makes sense when running.
export function startButton(
  state: ServerState,
  values: FormValues
): { label: string; enabled: boolean } {
  if (state === "running") return { label: "Stop", enabled: true };
  if (state === "starting" || state === "stopping") {
    return { label: "…", enabled: false };
  }
  const invalid = validateForm(values).length > 0;
  return { label: "Start", enabled: !invalid };
}
