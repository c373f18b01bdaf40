/** Board view-model: everything the table render needs, with the residue
 * row and classification recomputed client-side as a cross-check against
 * the service's own fields. */

import { SessionPayload, decimalInt } from "./wire.js";

export const ABBREVIATION_DIGITS = 30;

/** Huge exponents render as a digit count; the full value stays available
 * on demand (tooltip / click). */
export function abbreviate(decimal: string, threshold: number = ABBREVIATION_DIGITS): string {
  return decimal.length <= threshold ? decimal : `${decimal.length}-digit number`;
}

export function columnTotals(piles: string[][], width: number): bigint[] {
  const totals: bigint[] = new Array(width).fill(0n);
  for (const pile of piles) {
    pile.forEach((entry, column) => {
      totals[column] += decimalInt(entry);
    });
  }
  return totals;
}

export interface BoardViewModel {
  primes: string[];
  /** full decimal strings, one row per pile */
  pileRows: string[][];
  /** display strings, abbreviated past the digit threshold */
  pileCells: string[][];
  totals: string[];
  residues: number[];
  classification: "P" | "N";
  /** true when the client recomputation agrees with every service field */
  consistent: boolean;
  power: number;
  turn: string;
  engineSide: string;
  canDelay: boolean;
  terminal: boolean;
  winner: string | null;
}

export function buildViewModel(session: SessionPayload): BoardViewModel {
  const power = Number(decimalInt(session.power));
  const width = session.primes.length;
  const totals = columnTotals(session.piles, width);
  const residues = totals.map((t) => Number(t % BigInt(power)));
  const classification: "P" | "N" = residues.every((r) => r === 0) ? "P" : "N";
  const consistent =
    sameStrings(totals.map(String), session.totals) &&
    sameStrings(residues.map(String), session.residues) &&
    classification === session.classification;
  return {
    primes: session.primes,
    pileRows: session.piles,
    pileCells: session.piles.map((pile) => pile.map((e) => abbreviate(e))),
    totals: totals.map(String),
    residues,
    classification,
    consistent,
    power,
    turn: session.whose_turn,
    engineSide: session.engine_side,
    canDelay: session.can_delay,
    terminal: session.is_terminal,
    winner: session.winner,
  };
}

function sameStrings(a: string[], b: string[]): boolean {
  return a.length === b.length && a.every((value, i) => value === b[i]);
}
