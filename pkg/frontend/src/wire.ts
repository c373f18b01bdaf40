/** Wire document envelope and payload shapes shared with the play service.
 *
 * Every integer travels as a decimal string; exponents can run to hundreds
 * of digits, so they are only ever turned into BigInt, never Number.
 */

export const WIRE_VERSION = "1";

export interface WireDoc<T = unknown> {
  version: string;
  kind: string;
  payload: T;
}

export interface PositionPayload {
  primes: string[];
  piles: string[][];
}

export interface MovePartPayload {
  pile: string;
  times: string;
  increments: Record<string, string>;
}

export interface MovePayload {
  prime_index: string;
  parts: MovePartPayload[];
}

export interface SessionPayload {
  id: string;
  power: string;
  engine_side: string;
  whose_turn: string;
  primes: string[];
  piles: string[][];
  totals: string[];
  residues: string[];
  classification: string;
  is_terminal: boolean;
  can_delay: boolean;
  winner: string | null;
  history_length: string;
  last_move: MovePayload | null;
  lex_key: string[];
  created_at: string;
  updated_at: string;
}

export interface HintPayload {
  classification: string;
  move: MovePayload | null;
  can_delay: boolean;
}

export interface ErrorPayload {
  code: string;
  reason: string;
}

export function wireDocument<T>(kind: string, payload: T): WireDoc<T> {
  return { version: WIRE_VERSION, kind, payload };
}

export function parseDocument(text: string): WireDoc {
  let parsed: unknown;
  try {
    parsed = JSON.parse(text);
  } catch {
    throw new Error("malformed wire document");
  }
  const doc = parsed as WireDoc;
  if (
    typeof doc !== "object" ||
    doc === null ||
    typeof doc.kind !== "string" ||
    !("payload" in doc)
  ) {
    throw new Error("malformed wire document");
  }
  if (doc.version !== WIRE_VERSION) {
    throw new Error(`unknown wire version ${String(doc.version)}`);
  }
  return doc;
}

const DECIMAL = /^(0|[1-9][0-9]*)$/;

export function decimalInt(value: string): bigint {
  if (!DECIMAL.test(value)) {
    throw new Error(`not a decimal integer string: ${value}`);
  }
  return BigInt(value);
}
