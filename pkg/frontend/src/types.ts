// Shapes mirrored from the control API's JSON bodies.

export interface Credentials {
  token: string;
  hub: string;
  group: string;
  project: string;
}

export interface EffectiveConfig {
  receive_port: number;
  send_port: number;
  target_ip: string;
  remote: boolean;
  bind_ip: string | null;
  credentials: Credentials | null;
  max_qubits: number;
  default_shots: number;
  seed: number | null;
  parallel_jobs: number;
  remote_timeout_s: number;
}

export type ServerState = "stopped" | "starting" | "running" | "stopping";

export interface Status {
  state: ServerState;
  effective_config: EffectiveConfig;
  jobs_done: number;
  last_error: string | null;
  uptime_s: number;
}

export interface LogEvent {
  ts: number;
  level: "notice" | "error" | "marker";
  line: string;
}

export interface FieldProblem {
  field: string;
  message: string;
}
