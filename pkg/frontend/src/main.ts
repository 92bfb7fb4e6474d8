// Panel wiring: DOM in, control API out. All server state changes go
// through ControlApi; this file only reflects status and collects input.

import { ControlApi, ValidationFailure } from "./api.js";
import { isDirty, patchFromValues, startButton, valuesFromConfig } from "./form.js";
import { LogBuffer, LogStream } from "./logs.js";
import type { FieldProblem, Status } from "./types.js";
import { FormValues, validateForm } from "./validation.js";

const api = new ControlApi();

const el = {
  state: document.getElementById("state") as HTMLSpanElement,
  jobs: document.getElementById("jobs-done") as HTMLSpanElement,
  uptime: document.getElementById("uptime") as HTMLSpanElement,
  lastError: document.getElementById("last-error") as HTMLDivElement,
  banner: document.getElementById("banner") as HTMLDivElement,
  form: document.getElementById("network-form") as HTMLFormElement,
  receivePort: document.getElementById("receive-port") as HTMLInputElement,
  sendPort: document.getElementById("send-port") as HTMLInputElement,
  targetIp: document.getElementById("target-ip") as HTMLInputElement,
  remote: document.getElementById("remote") as HTMLInputElement,
  bindIp: document.getElementById("bind-ip") as HTMLInputElement,
  credsToggle: document.getElementById("creds-toggle") as HTMLInputElement,
  credsFields: document.getElementById("creds-fields") as HTMLFieldSetElement,
  token: document.getElementById("token") as HTMLInputElement,
  hub: document.getElementById("hub") as HTMLInputElement,
  group: document.getElementById("group") as HTMLInputElement,
  project: document.getElementById("project") as HTMLInputElement,
  maxQubits: document.getElementById("max-qubits") as HTMLInputElement,
  defaultShots: document.getElementById("default-shots") as HTMLInputElement,
  seed: document.getElementById("seed") as HTMLInputElement,
  startStop: document.getElementById("start-stop") as HTMLButtonElement,
  monitor: document.getElementById("monitor") as HTMLDivElement,
};

let baseline: FormValues | null = null;
let lastStatus: Status | null = null;

function intOrNull(input: HTMLInputElement): number | null {
  if (input.value.trim() === "") return null;
  const value = Number(input.value);
  return Number.isInteger(value) ? value : null;
}

function readForm(): FormValues {
  return {
    receive_port: intOrNull(el.receivePort),
    send_port: intOrNull(el.sendPort),
    target_ip: el.targetIp.value.trim(),
    remote: el.remote.checked,
    bind_ip: el.bindIp.value.trim(),
    credentials_enabled: el.credsToggle.checked,
    token: el.token.value,
    hub: el.hub.value.trim(),
    group: el.group.value.trim(),
    project: el.project.value.trim(),
    max_qubits: intOrNull(el.maxQubits),
    default_shots: intOrNull(el.defaultShots),
    seed: intOrNull(el.seed),
  };
}

function writeForm(values: FormValues): void {
  el.receivePort.value = String(values.receive_port ?? "");
  el.sendPort.value = String(values.send_port ?? "");
  el.targetIp.value = values.target_ip;
  el.remote.checked = values.remote;
  el.bindIp.value = values.bind_ip;
  el.credsToggle.checked = values.credentials_enabled;
  el.hub.value = values.hub;
  el.group.value = values.group;
  el.project.value = values.project;
  el.maxQubits.value = String(values.max_qubits ?? "");
  el.defaultShots.value = String(values.default_shots ?? "");
  el.seed.value = values.seed === null ? "" : String(values.seed);
}

function renderProblems(problems: FieldProblem[]): void {
  for (const span of document.querySelectorAll<HTMLSpanElement>(".field-error")) {
    span.textContent = "";
  }
  for (const problem of problems) {
    const span = document.querySelector<HTMLSpanElement>(
      `.field-error[data-field="${problem.field}"]`
    );
    if (span) span.textContent = problem.message;
  }
}

function refreshControls(): void {
  const values = readForm();
  renderProblems(validateForm(values));
  el.credsFields.hidden = !values.credentials_enabled;
  el.bindIp.disabled = !values.remote;
  if (lastStatus) {
    const button = startButton(lastStatus.state, values);
    el.startStop.textContent = button.label;
    el.startStop.disabled = !button.enabled;
  }
}

function renderStatus(status: Status): void {
  lastStatus = status;
  el.state.textContent = status.state;
  el.state.dataset.state = status.state;
  el.jobs.textContent = String(status.jobs_done);
  el.uptime.textContent = `${Math.floor(status.uptime_s)} s`;
  el.lastError.textContent = status.last_error ?? "";
  el.lastError.hidden = !status.last_error;
  const editable = status.state === "stopped";
  for (const input of el.form.querySelectorAll("input")) {
    input.readOnly = !editable && input.type !== "checkbox";
    if (input.type === "checkbox") input.disabled = !editable;
  }
  // while the user has local edits, don't clobber the form
  const current = readForm();
  if (baseline === null || !isDirty(current, baseline)) {
    baseline = valuesFromConfig(status.effective_config);
    writeForm(baseline);
  }
  refreshControls();
}

function setBanner(lost: boolean): void {
  el.banner.hidden = !lost;
}

async function pollStatus(): Promise<void> {
  try {
    renderStatus(await api.getStatus());
    setBanner(false);
  } catch {
    setBanner(true);
  }
}

async function onStartStop(): Promise<void> {
  if (!lastStatus) return;
  el.startStop.disabled = true; // optimistic disable until the API answers
  try {
    if (lastStatus.state === "running") {
      renderStatus(await api.stop());
      return;
    }
    const values = readForm();
    if (baseline && isDirty(values, baseline)) {
      baseline = null; // accept the server's merged view afterwards
      renderStatus(await api.putConfig(patchFromValues(values, valuesFromConfig(lastStatus.effective_config))));
      el.token.value = "";
    }
    renderStatus(await api.start());
    setBanner(false);
  } catch (error) {
    if (error instanceof ValidationFailure) {
      renderProblems(error.problems);
      el.startStop.disabled = false;
    } else {
      setBanner(true);
      await pollStatus();
    }
  }
}

// -- monitor ------------------------------------------------------------

const buffer = new LogBuffer();
let paused = false;

function renderMonitor(): void {
  if (paused) return;
  const fragment = document.createDocumentFragment();
  for (const line of buffer.lines) {
    const div = document.createElement("div");
    div.className = `log-line log-${line.level}`;
    div.textContent = line.text;
    fragment.appendChild(div);
  }
  el.monitor.replaceChildren(fragment);
  el.monitor.scrollTop = el.monitor.scrollHeight;
}

const stream = new LogStream(
  (tail) => api.logsUrl(tail),
  (event) => {
    buffer.push(event);
    renderMonitor();
  },
  (connected) => setBanner(!connected)
);

el.monitor.addEventListener("mouseenter", () => {
  paused = true;
});
el.monitor.addEventListener("mouseleave", () => {
  paused = false;
  renderMonitor();
});

el.form.addEventListener("input", refreshControls);
el.startStop.addEventListener("click", (event) => {
  event.preventDefault();
  void onStartStop();
});

void pollStatus();
stream.connect();
setInterval(() => void pollStatus(), 2000);
