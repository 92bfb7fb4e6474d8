// Log monitor: SSE subscription plus a bounded line buffer. The buffer
// keeps the last 5,000 lines; when it overflows, one trim notice stands
// in for what was discarded. Rendering pauses while the pointer hovers
// the monitor, resumes (and catches up) when it leaves.

import type { LogEvent } from "./types.js";

export const MAX_LINES = 5000;

export interface MonitorLine {
  level: LogEvent["level"] | "trim";
  text: string;
}

export class LogBuffer {
  lines: MonitorLine[] = [];
  private trimmed = 0;

  constructor(private capacity: number = MAX_LINES) {}

  push(event: LogEvent): void {
    const stamp = new Date(event.ts * 1000).toLocaleTimeString();
    const prefix = event.level === "notice" ? "" : `${event.level}: `;
    this.lines.push({ level: event.level, text: `[${stamp}] ${prefix}${event.line}` });
    if (this.lines.length > this.capacity) {
      const excess = this.lines.length - this.capacity;
      this.lines.splice(0, excess);
      this.trimmed += excess;
      if (this.lines[0]?.level !== "trim") {
        this.lines.unshift({ level: "trim", text: "" });
      }
      this.lines[0].text = `[${this.trimmed} older line(s) trimmed]`;
    }
  }
}

export class LogStream {
  private source: EventSource | null = null;
  private everConnected = false;

  constructor(
    private url: (tail: number) => string,
    private onEvent: (event: LogEvent) => void,
    private onState: (connected: boolean) => void
  ) {}

  connect(): void {
    this.close();
    // replay some history on the first connect only, so reconnects
    // never duplicate lines
    const source = new EventSource(this.url(this.everConnected ? 0 : 200));
    this.everConnected = true;
    source.onopen = () => this.onState(true);
    source.onmessage = (message) => {
      this.onEvent(JSON.parse(message.data) as LogEvent);
    };
    source.onerror = () => {
      this.onState(false);
      // EventSource retries on its own while the object stays open
    };
    this.source = source;
  }

  close(): void {
    this.source?.close();
    this.source = null;
  }
}
