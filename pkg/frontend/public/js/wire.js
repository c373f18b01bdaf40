/** Wire document envelope and payload shapes shared with the play service.
 *
 * Every integer travels as a decimal string; exponents can run to hundreds
 * of digits, so they are only ever turned into BigInt, never Number.
 */
export const WIRE_VERSION = "1";
export function wireDocument(kind, payload) {
    return { version: WIRE_VERSION, kind, payload };
}
export function parseDocument(text) {
    let parsed;
    try {
        parsed = JSON.parse(text);
    }
    catch {
        throw new Error("malformed wire document");
    }
    const doc = parsed;
    if (typeof doc !== "object" ||
        doc === null ||
        typeof doc.kind !== "string" ||
        !("payload" in doc)) {
        throw new Error("malformed wire document");
    }
    if (doc.version !== WIRE_VERSION) {
        throw new Error(`unknown wire version ${String(doc.version)}`);
    }
    return doc;
}
const DECIMAL = /^(0|[1-9][0-9]*)$/;
export function decimalInt(value) {
    if (!DECIMAL.test(value)) {
        throw new Error(`not a decimal integer string: ${value}`);
    }
    return BigInt(value);
}
