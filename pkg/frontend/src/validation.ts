// Client-side mirror of the server's configuration checks, so the form
// can flag problems inline before a request is made. The server stays
// authoritative; these rules must produce the same field/message pairs
// as its 422 responses.

import type { FieldProblem } from "./types.js";

export interface FormValues {
  receive_port: number | null;
  send_port: number | null;
  target_ip: string;
  remote: boolean;
  bind_ip: string;
  credentials_enabled: boolean;
  token: string;
  hub: string;
  group: string;
  project: string;
  max_qubits: number | null;
  default_shots: number | null;
  seed: number | null;
}

const MAX_SHOTS = 1_048_576;
const MAX_SUPPORTED_QUBITS = 24;

export function isIpAddress(text: string): boolean {
  const ipv4 = text.split(".");
  if (ipv4.length === 4) {
    return ipv4.every(
      (part) =>
        /^\d{1,3}$/.test(part) &&
        Number(part) <= 255 &&
        String(Number(part)) === part
    );
  }
  // compressed or full IPv6: hex groups separated by ':', at most one '::'
  if (!text.includes(":")) return false;
  if ((text.match(/::/g) ?? []).length > 1) return false;
  const groups = text.split(":");
  if (groups.length > 8) return false;
  const nonEmpty = groups.filter((g) => g.length > 0);
  if (!text.includes("::") && groups.length !== 8) return false;
  return nonEmpty.every((g) => /^[0-9a-fA-F]{1,4}$/.test(g));
}

export function isLoopback(text: string): boolean {
  return text.startsWith("127.") || text === "::1";
}

function portProblem(field: string, value: number | null): FieldProblem | null {
  if (value === null || !Number.isInteger(value) || value < 1 || value > 65535) {
    return { field, message: "port out of range (1..65535)" };
  }
  return null;
}

export function validateForm(values: FormValues): FieldProblem[] {
  const problems: FieldProblem[] = [];
  const receive = portProblem("receive_port", values.receive_port);
  if (receive) problems.push(receive);
  const send = portProblem("send_port", values.send_port);
  if (send) problems.push(send);

  if (!isIpAddress(values.target_ip)) {
    problems.push({
      field: "target_ip",
      message: `invalid IP address: '${values.target_ip}'`,
    });
  } else if (
    values.receive_port !== null &&
    values.receive_port === values.send_port &&
    isLoopback(values.target_ip)
  ) {
    problems.push({
      field: "send_port",
      message: "send port must differ from receive port when the target is loopback",
    });
  }

  if (values.bind_ip.length > 0) {
    if (!values.remote) {
      problems.push({
        field: "bind_ip",
        message: "an explicit bind address requires remote mode",
      });
    } else if (!isIpAddress(values.bind_ip)) {
      problems.push({
        field: "bind_ip",
        message: `invalid IP address: '${values.bind_ip}'`,
      });
    }
  }

  if (values.credentials_enabled && values.token.length === 0) {
    problems.push({ field: "credentials", message: "token must be non-empty" });
  }

  if (
    values.max_qubits === null ||
    values.max_qubits < 1 ||
    values.max_qubits > MAX_SUPPORTED_QUBITS
  ) {
    problems.push({
      field: "max_qubits",
      message: `must be in 1..${MAX_SUPPORTED_QUBITS}`,
    });
  }
  if (
    values.default_shots === null ||
    values.default_shots < 1 ||
    values.default_shots > MAX_SHOTS
  ) {
    problems.push({ field: "default_shots", message: `must be in 1..${MAX_SHOTS}` });
  }
  if (values.seed !== null && (values.seed < 0 || !Number.isInteger(values.seed))) {
    problems.push({
      field: "seed",
      message: "seed must fit in an unsigned 64-bit integer",
    });
  }
  return problems;
}
