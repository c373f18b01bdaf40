import { describe, expect, it } from "vitest";

import { abbreviate, buildViewModel, columnTotals } from "../src/board.js";
import { SessionPayload } from "../src/wire.js";

function session(overrides: Partial<SessionPayload> = {}): SessionPayload {
  return {
    id: "t",
    power: "2",
    engine_side: "II",
    whose_turn: "I",
    primes: ["2", "3"],
    piles: [
      ["1", "0"],
      ["0", "1"],
    ],
    totals: ["1", "1"],
    residues: ["1", "1"],
    classification: "N",
    is_terminal: false,
    can_delay: true,
    winner: null,
    history_length: "0",
    last_move: null,
    lex_key: ["1", "1"],
    created_at: "0.0",
    updated_at: "0.0",
    ...overrides,
  };
}

describe("columnTotals", () => {
  it("sums decimal strings exactly", () => {
    const totals = columnTotals(
      [
        ["2", "3", "5"],
        ["4", "6", "10"],
        ["6", "9", "15"],
      ],
      3,
    );
    expect(totals).toEqual([12n, 18n, 30n]);
  });

  it("is exact far past 53-bit floats", () => {
    const huge = "9".repeat(200);
    const totals = columnTotals([[huge], ["1"]], 1);
    expect(totals[0].toString()).toBe("1" + "0".repeat(200));
  });
});

describe("buildViewModel", () => {
  it("recomputes residues and classification that match the service", () => {
    const vm = buildViewModel(session());
    expect(vm.residues).toEqual([1, 1]);
    expect(vm.classification).toBe("N");
    expect(vm.consistent).toBe(true);
  });

  it("flags a divergence from the service fields", () => {
    const vm = buildViewModel(session({ classification: "P" }));
    expect(vm.consistent).toBe(false);
  });

  it("handles 200-digit exponents mod 3", () => {
    const huge = "1".repeat(200); // digit sum 200 -> 2 mod 3
    const vm = buildViewModel(
      session({
        power: "3",
        primes: ["2"],
        piles: [[huge]],
        totals: [huge],
        residues: ["2"],
        classification: "N",
        lex_key: [huge],
      }),
    );
    expect(vm.residues).toEqual([2]);
    expect(vm.consistent).toBe(true);
  });

  it("marks terminal all-zero boards P", () => {
    const vm = buildViewModel(
      session({
        piles: [
          ["0", "0"],
          ["0", "0"],
        ],
        totals: ["0", "0"],
        residues: ["0", "0"],
        classification: "P",
        is_terminal: true,
        can_delay: false,
        winner: "II",
      }),
    );
    expect(vm.classification).toBe("P");
    expect(vm.terminal).toBe(true);
    expect(vm.consistent).toBe(true);
  });
});

describe("abbreviate", () => {
  it("passes short numbers through", () => {
    expect(abbreviate("123456")).toBe("123456");
  });

  it("summarizes past the threshold", () => {
    expect(abbreviate("9".repeat(31))).toBe("31-digit number");
  });

  it("keeps the boundary value intact", () => {
    const boundary = "9".repeat(30);
    expect(abbreviate(boundary)).toBe(boundary);
  });
});
