// Thin WebSocket wrapper: serializes InMsg, validates every inbound
// message against the v1 schema before handing it to the app.

import { InMsg, OutMsg, parseOutMsg, serialize } from "./protocol.js";

export interface SessionSocketHandlers {
  onMessage: (msg: OutMsg) => void;
  onProtocolViolation?: (reason: string, raw: string) => void;
  onOpen?: () => void;
  onClose?: () => void;
}

export class SessionSocket {
  private ws: WebSocket | null = null;
  private readonly url: string;
  private readonly handlers: SessionSocketHandlers;

  constructor(url: string, handlers: SessionSocketHandlers) {
    this.url = url;
    this.handlers = handlers;
  }

  connect(): void {
    this.ws = new WebSocket(this.url);
    this.ws.onopen = () => this.handlers.onOpen?.();
    this.ws.onclose = () => this.handlers.onClose?.();
    this.ws.onmessage = (ev) => {
      for (const line of String(ev.data).split("\n")) {
        if (line.trim() === "") continue;
        let parsed: unknown;
        try {
          parsed = JSON.parse(line);
        } catch {
          this.handlers.onProtocolViolation?.("not valid JSON", line);
          continue;
        }
        const msg = parseOutMsg(parsed);
        if (typeof msg === "string") {
          this.handlers.onProtocolViolation?.(msg, line);
        } else {
          this.handlers.onMessage(msg);
        }
      }
    };
  }

  /** Returns false when the transport is not open (caller may buffer). */
  send(msg: InMsg): boolean {
    if (this.ws === null || this.ws.readyState !== WebSocket.OPEN) return false;
    this.ws.send(serialize(msg));
    return true;
  }

  close(): void {
    this.ws?.close();
    this.ws = null;
  }

  get isOpen(): boolean {
    return this.ws !== null && this.ws.readyState === WebSocket.OPEN;
  }
}

export function defaultSessionUrl(): string {
  const proto = location.protocol === "https:" ? "wss" : "ws";
  return `${proto}://${location.host}/ws/session`;
}
