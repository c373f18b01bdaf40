"""Brute-force P/N labeling of increment-capped games.

The solver does memoized backward induction over the finite reachable set
of a capped game, using nothing but the move rules: a position is winning
exactly when some capped follower is losing.  The closed-form classifier
enters only in :func:`verify_characterization`, where the two independent
routes are compared position by position.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from itertools import combinations_with_replacement, product

from .core import (
    GameConfig,
    Position,
    PrimeWindow,
    apply_move,
    enumerate_moves_capped,
)


@dataclass(frozen=True)
class GridSpec:
    """Exhaustive start grid: every matrix with 1..max_piles rows over the
    window, entries 0..max_exponent, solved with the given power and cap."""

    primes: tuple[int, ...]
    max_piles: int
    max_exponent: int
    power: int
    cap: int


@dataclass(frozen=True)
class OracleReport:
    """Outcome of one grid verification; empty ``mismatches`` means the
    closed-form characterization held everywhere the solver looked."""

    grid: GridSpec
    positions_labeled: int
    mismatches: tuple[tuple[Position, str, str], ...]
    elapsed: float

    @property
    def ok(self) -> bool:
        return not self.mismatches


def canonical(pos: Position) -> Position:
    """Sort piles: their order never affects the game value, and the sorted
    representative shrinks the memo."""
    return Position(pos.window, tuple(sorted(pos.piles)))


def solve_capped(
    start: Position,
    k_power: int,
    cap: int,
    *,
    canonicalize: bool = True,
    max_positions: int = 1_000_000,
) -> dict[Position, str]:
    """Labels ("P"/"N") for every position reachable from ``start`` under
    the cap.

    Terminal positions are "P"; a position is "N" exactly when some capped
    follower is "P".  ``cap`` must be at least ``k_power - 1`` so the
    residue-correcting follower stays inside the capped set, which is what
    makes these labels agree with the uncapped game.  The reachable set is
    finite: the leftmost exponent never grows, and each division adds at
    most ``cap`` per later column.  Deterministic; blowing past
    ``max_positions`` raises with the frontier size.
    """
    config = GameConfig(k_power)
    if cap < config.power - 1:
        raise ValueError("cap below power-1 would drop the residue-correcting follower")
    labels: dict[Position, str] = {}
    _solve_into(labels, start, config, cap, canonicalize, max_positions)
    return labels


def _solve_into(labels, start, config, cap, canonicalize, max_positions):
    norm = canonical if canonicalize else (lambda p: p)
    pending: dict[Position, tuple[Position, ...]] = {}
    stack = [norm(start)]
    while stack:
        u = stack[-1]
        if u in labels:
            stack.pop()
            continue
        if u in pending:
            # all followers were labeled before u resurfaces (the game is acyclic)
            followers = pending.pop(u)
            labels[u] = "N" if any(labels[v] == "P" for v in followers) else "P"
            stack.pop()
            continue
        followers = tuple(
            norm(apply_move(u, mv, config)) for mv in enumerate_moves_capped(u, config, cap)
        )
        pending[u] = followers
        stack.extend(v for v in followers if v not in labels)
        if len(labels) + len(pending) > max_positions:
            raise RuntimeError(
                f"capped game too large: {len(labels)} labeled, frontier size {len(stack)}"
            )


def verify_characterization(grid: GridSpec, *, max_positions: int = 1_000_000) -> OracleReport:
    """Solve every start on the grid and compare each brute-force label with
    the closed-form classification.

    The memo is shared across starts (same window, power, and cap yield the
    same labels), and pile order is quotiented out, so each multiset of
    pile vectors is solved once.
    """
    from .strategy import classify  # comparison side only; the solver never sees it

    config = GameConfig(grid.power)
    window = PrimeWindow(grid.primes)
    vectors = list(product(range(grid.max_exponent + 1), repeat=len(grid.primes)))
    started = time.perf_counter()
    labels: dict[Position, str] = {}
    for rows in range(1, grid.max_piles + 1):
        for matrix in combinations_with_replacement(vectors, rows):
            start = Position(window, matrix)
            if start not in labels:
                _solve_into(labels, start, config, grid.cap, True, max_positions)
    mismatches = tuple(
        (pos, label, classify(pos, grid.power).value)
        for pos, label in labels.items()
        if label != classify(pos, grid.power).value
    )
    return OracleReport(grid, len(labels), mismatches, time.perf_counter() - started)


def default_grids() -> tuple[GridSpec, ...]:
    """Desk-scale grids that finish in seconds yet exercise both the base
    game and one higher power."""
    return (
        GridSpec((2, 3), max_piles=2, max_exponent=2, power=2, cap=1),
        GridSpec((2, 3, 5), max_piles=1, max_exponent=2, power=2, cap=1),
        GridSpec((2, 3), max_piles=2, max_exponent=3, power=3, cap=2),
    )


def report_text(report: OracleReport) -> str:
    """Human-readable verification summary."""
    grid = report.grid
    lines = [
        f"grid: window {list(grid.primes)}, piles <= {grid.max_piles}, "
        f"exponents <= {grid.max_exponent}, power {grid.power}, cap {grid.cap}",
        f"positions labeled: {report.positions_labeled}",
        f"mismatches: {len(report.mismatches)}",
        f"elapsed: {report.elapsed:.3f}s",
    ]
    for pos, oracle_label, closed_form in report.mismatches[:20]:
        lines.append(f"  MISMATCH piles={pos.piles} oracle={oracle_label} closed-form={closed_form}")
    return "\n".join(lines)
