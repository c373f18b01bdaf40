/** Thin fetch client for the play service; responses and errors are wire
 * documents, and server error reasons are surfaced verbatim. */
import { parseDocument, wireDocument, } from "./wire.js";
export class ServiceApiError extends Error {
    code;
    reason;
    status;
    constructor(code, reason, status) {
        super(reason);
        this.code = code;
        this.reason = reason;
        this.status = status;
        this.name = "ServiceApiError";
    }
}
export class ServiceClient {
    base;
    constructor(base = "") {
        this.base = base;
    }
    async createGame(piles, power, engineSide) {
        return this.request("POST", "/games", wireDocument("create_game", { piles, power, engine_side: engineSide }));
    }
    async view(id) {
        return this.request("GET", `/games/${id}`);
    }
    async submitMove(id, move) {
        return this.request("POST", `/games/${id}/moves`, wireDocument("move", move));
    }
    async engineReply(id, delayR) {
        const body = delayR === undefined
            ? undefined
            : wireDocument("engine_options", { delay_r: delayR });
        return this.request("POST", `/games/${id}/engine-move`, body);
    }
    async hint(id) {
        return this.request("GET", `/games/${id}/hint`);
    }
    async request(method, path, body) {
        const response = await fetch(this.base + path, {
            method,
            body: body === undefined ? undefined : JSON.stringify(body),
            headers: body === undefined ? undefined : { "Content-Type": "application/json" },
        });
        const doc = parseDocument(await response.text());
        if (!response.ok) {
            const error = doc.payload;
            throw new ServiceApiError(error.code, error.reason, response.status);
        }
        return doc.payload;
    }
}
