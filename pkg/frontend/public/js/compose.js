/** Move composition: turn a board selection into a move document.
 *
 * Client-side prevalidation mirrors the engine's rules (insufficient
 * exponent, increments left of the divider, division budget), but the
 * server stays authoritative: anything composed here is still validated
 * on submit.
 */
import { decimalInt } from "./wire.js";
export function emptyDraft() {
    return { column: null, parts: [{ pile: null, times: 1, increments: {} }] };
}
/** First problem with the draft, or null when it composes cleanly. */
export function validateDraft(session, draft) {
    const width = session.primes.length;
    if (draft.column === null || draft.parts.every((p) => p.pile === null)) {
        return "select the pile cell to divide first";
    }
    const column = draft.column;
    if (column < 0 || column >= width) {
        return "divided prime is outside the window";
    }
    const power = Number(decimalInt(session.power));
    const seen = new Set();
    let budget = 0;
    for (const part of draft.parts) {
        if (part.pile === null) {
            return "every part needs a pile";
        }
        if (part.pile < 0 || part.pile >= session.piles.length) {
            return "pile is out of range";
        }
        if (seen.has(part.pile)) {
            return "a pile can appear in only one part";
        }
        seen.add(part.pile);
        if (!Number.isInteger(part.times) || part.times < 1) {
            return "each part must divide at least once";
        }
        budget += part.times;
        const held = decimalInt(session.piles[part.pile][column]);
        if (held < BigInt(part.times)) {
            return (`insufficient exponent: pile ${part.pile + 1} holds ${held} at prime ` +
                `${session.primes[column]}`);
        }
        for (const [key, raw] of Object.entries(part.increments)) {
            const q = Number(key);
            const text = raw.trim();
            if (text === "" || text === "0") {
                continue;
            }
            if (!/^[0-9]+$/.test(text)) {
                return `increment at prime ${session.primes[q]} must be a nonnegative integer`;
            }
            if (q <= column) {
                return "increments must sit right of the divided prime";
            }
            if (q >= width) {
                return "increment column is outside the window";
            }
        }
    }
    if (budget > power - 1) {
        return `division total ${budget} exceeds ${power - 1} (power ${power})`;
    }
    return null;
}
/** Build the wire move document; throws the validation message on bad drafts. */
export function composeMove(session, draft) {
    const problem = validateDraft(session, draft);
    if (problem !== null) {
        throw new Error(problem);
    }
    const parts = draft.parts.map((part) => {
        const increments = {};
        for (const [key, raw] of Object.entries(part.increments)) {
            const text = raw.trim();
            if (text !== "" && text !== "0") {
                increments[key] = decimalInt(text).toString();
            }
        }
        return {
            pile: String(part.pile),
            times: String(part.times),
            increments,
        };
    });
    return { prime_index: String(draft.column), parts };
}
/** Parse one factored pile line of the text grammar: "2^3 * 5^1" or "1". */
export function parsePileText(line) {
    const text = line.trim();
    if (text === "1") {
        return [];
    }
    const pairs = [];
    for (const factor of text.split("*")) {
        const match = /^\s*([0-9]+)\s*\^\s*([0-9]+)\s*$/.exec(factor);
        if (match === null) {
            throw new Error(`cannot read factor ${factor.trim()}; expected prime^exponent`);
        }
        pairs.push([match[1], match[2]]);
    }
    return pairs;
}
