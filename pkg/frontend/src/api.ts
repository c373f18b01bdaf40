/** Thin fetch client for the play service; responses and errors are wire
 * documents, and server error reasons are surfaced verbatim. */

import {
  ErrorPayload,
  HintPayload,
  MovePayload,
  SessionPayload,
  parseDocument,
  wireDocument,
} from "./wire.js";

export class ServiceApiError extends Error {
  constructor(
    readonly code: string,
    readonly reason: string,
    readonly status: number,
  ) {
    super(reason);
    this.name = "ServiceApiError";
  }
}

export class ServiceClient {
  constructor(private readonly base: string = "") {}

  async createGame(
    piles: Array<Array<[string, string]>>,
    power: string,
    engineSide: string,
  ): Promise<SessionPayload> {
    return this.request<SessionPayload>(
      "POST",
      "/games",
      wireDocument("create_game", { piles, power, engine_side: engineSide }),
    );
  }

  async view(id: string): Promise<SessionPayload> {
    return this.request<SessionPayload>("GET", `/games/${id}`);
  }

  async submitMove(id: string, move: MovePayload): Promise<SessionPayload> {
    return this.request<SessionPayload>("POST", `/games/${id}/moves`, wireDocument("move", move));
  }

  async engineReply(id: string, delayR?: string): Promise<SessionPayload> {
    const body =
      delayR === undefined
        ? undefined
        : wireDocument("engine_options", { delay_r: delayR });
    return this.request<SessionPayload>("POST", `/games/${id}/engine-move`, body);
  }

  async hint(id: string): Promise<HintPayload> {
    return this.request<HintPayload>("GET", `/games/${id}/hint`);
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await fetch(this.base + path, {
      method,
      body: body === undefined ? undefined : JSON.stringify(body),
      headers: body === undefined ? undefined : { "Content-Type": "application/json" },
    });
    const doc = parseDocument(await response.text());
    if (!response.ok) {
      const error = doc.payload as ErrorPayload;
      throw new ServiceApiError(error.code, error.reason, response.status);
    }
    return doc.payload as T;
  }
}
