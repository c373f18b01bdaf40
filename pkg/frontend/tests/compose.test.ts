import { describe, expect, it } from "vitest";

import { composeMove, emptyDraft, parsePileText, validateDraft } from "../src/compose.js";
import { SessionPayload } from "../src/wire.js";

function session(overrides: Partial<SessionPayload> = {}): SessionPayload {
  return {
    id: "t",
    power: "2",
    engine_side: "II",
    whose_turn: "I",
    primes: ["2", "3", "5"],
    piles: [
      ["2", "0", "1"],
      ["0", "3", "0"],
    ],
    totals: ["2", "3", "1"],
    residues: ["0", "1", "1"],
    classification: "N",
    is_terminal: false,
    can_delay: true,
    winner: null,
    history_length: "0",
    last_move: null,
    lex_key: ["2", "3", "1"],
    created_at: "0.0",
    updated_at: "0.0",
    ...overrides,
  };
}

describe("composeMove", () => {
  it("builds a single-part move document", () => {
    const move = composeMove(session(), {
      column: 0,
      parts: [{ pile: 0, times: 1, increments: { 2: "4" } }],
    });
    expect(move).toEqual({
      prime_index: "0",
      parts: [{ pile: "0", times: "1", increments: { "2": "4" } }],
    });
  });

  it("drops empty and zero increment inputs", () => {
    const move = composeMove(session(), {
      column: 0,
      parts: [{ pile: 0, times: 1, increments: { 1: "", 2: "0" } }],
    });
    expect(move.parts[0].increments).toEqual({});
  });

  it("supports split divisions when the power allows them", () => {
    const move = composeMove(session({ power: "3" }), {
      column: 0,
      parts: [
        { pile: 0, times: 2, increments: {} },
      ],
    });
    expect(move.parts[0].times).toBe("2");
  });

  it("throws the validation message on bad drafts", () => {
    expect(() =>
      composeMove(session(), { column: 1, parts: [{ pile: 0, times: 1, increments: {} }] }),
    ).toThrow(/insufficient exponent/);
  });
});

describe("validateDraft", () => {
  it("requires a selection first", () => {
    expect(validateDraft(session(), emptyDraft())).toMatch(/select the pile/);
  });

  it("blocks increments left of the divider", () => {
    const problem = validateDraft(session(), {
      column: 1,
      parts: [{ pile: 1, times: 1, increments: { 0: "2" } }],
    });
    expect(problem).toMatch(/right of the divided prime/);
  });

  it("reports insufficient exponent with the pile and prime", () => {
    const problem = validateDraft(session(), {
      column: 0,
      parts: [{ pile: 1, times: 1, increments: {} }],
    });
    expect(problem).toMatch(/insufficient exponent: pile 2 .* 2/);
  });

  it("enforces the division budget of the power", () => {
    const problem = validateDraft(session(), {
      column: 0,
      parts: [{ pile: 0, times: 2, increments: {} }],
    });
    expect(problem).toMatch(/division total 2 exceeds 1/);
  });

  it("rejects junk increment text", () => {
    const problem = validateDraft(session(), {
      column: 0,
      parts: [{ pile: 0, times: 1, increments: { 2: "lots" } }],
    });
    expect(problem).toMatch(/nonnegative integer/);
  });

  it("accepts a clean draft", () => {
    const problem = validateDraft(session(), {
      column: 2,
      parts: [{ pile: 0, times: 1, increments: {} }],
    });
    expect(problem).toBeNull();
  });
});

describe("parsePileText", () => {
  it("parses the factored grammar", () => {
    expect(parsePileText("2^3 * 5^1")).toEqual([
      ["2", "3"],
      ["5", "1"],
    ]);
  });

  it("parses the empty pile", () => {
    expect(parsePileText("1")).toEqual([]);
  });

  it("rejects junk", () => {
    expect(() => parsePileText("six")).toThrow(/cannot read factor/);
  });
});
