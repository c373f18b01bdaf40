"""Self-play: pluggable agents, single games, and seeded batch runs.

Agents are deterministic given their parameters and the per-game seed, so
every batch is reproducible.  The harness validates each agent move before
applying it and audits whole transcripts after the fact.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .core import (
    GameConfig,
    LexKey,
    Move,
    MovePart,
    MultivisionError,
    Position,
    apply_move,
    enumerate_moves_capped,
    is_terminal,
    lex_key,
    lex_less,
    validate_move,
)
from .strategy import (
    Classification,
    can_delay,
    classify,
    delay_move,
    minimal_move,
    winning_move,
)


class AgentError(MultivisionError):
    """An agent returned a missing or illegal move; names the offender."""


class Agent:
    """Move policy.  ``choose`` must be a pure function of the position and
    the supplied RNG stream."""

    name = "agent"
    seed = 0

    def choose(self, pos: Position, k_power: int, rng: random.Random) -> Move:
        raise NotImplementedError


class OptimalAgent(Agent):
    """Plays the residue-restoring move from winning positions.  From lost
    positions (no winning move exists) it keeps games finite with the
    smallest progress move instead of stalling."""

    name = "optimal"

    def choose(self, pos, k_power, rng):
        return winning_move(pos, k_power) or minimal_move(pos)


class RandomCappedAgent(Agent):
    """Uniform over the capped legal moves; the cap keeps the choice finite."""

    def __init__(self, cap: int, seed: int = 0):
        self.cap = cap
        self.seed = seed
        self.name = f"random_capped(cap={cap})"

    def choose(self, pos, k_power, rng):
        return rng.choice(enumerate_moves_capped(pos, GameConfig(k_power), self.cap))


class DelayerAgent(Agent):
    """Stalls with the pump move while the position allows it, then falls
    back to random capped moves."""

    def __init__(self, min_moves: int, cap: int, seed: int = 0):
        self.min_moves = min_moves
        self.cap = cap
        self.seed = seed
        self.name = f"delayer(r={min_moves})"

    def choose(self, pos, k_power, rng):
        if can_delay(pos):
            return delay_move(pos, self.min_moves)
        return rng.choice(enumerate_moves_capped(pos, GameConfig(k_power), self.cap))


class TopDecrementerAgent(Agent):
    """Divides by the top prime while any pile allows it, never multiplies."""

    name = "top_decrementer"

    def choose(self, pos, k_power, rng):
        top = pos.window.top_index
        for pile in range(pos.pile_count):
            if pos.piles[pile][top] > 0:
                return Move(top, (MovePart(pile, 1),))
        return minimal_move(pos)


@dataclass(frozen=True)
class MoveRecord:
    mover: str  # "I" | "II"
    move: Move
    key_after: LexKey
    from_p: bool  # the mover was theoretically lost when it moved


@dataclass(frozen=True)
class Transcript:
    """One play: start, ordered records, and the winner when play finished.

    ``outcome`` is absent both for truncated runs and for starts that were
    already terminal (nobody moved, so nobody won)."""

    start: Position
    entries: tuple[MoveRecord, ...]
    outcome: str | None
    truncated: bool = False

    @property
    def length(self) -> int:
        return len(self.entries)


def play_game(
    start: Position,
    k_power: int,
    agent_i: Agent,
    agent_ii: Agent,
    max_moves: int = 10_000,
    seed: int = 0,
) -> Transcript:
    """Alternating play from ``start``; agent_i moves first, the player who
    reaches the all-ones position wins.  Stops after ``max_moves`` with the
    truncated flag set instead of running forever."""
    if max_moves < 1:
        raise ValueError("max_moves must be >= 1")
    config = GameConfig(k_power)
    agents = {"I": agent_i, "II": agent_ii}
    rngs = {
        "I": random.Random((agent_i.seed << 32) ^ (seed * 2 + 1)),
        "II": random.Random((agent_ii.seed << 32) ^ (seed * 2)),
    }
    pos = start
    entries: list[MoveRecord] = []
    truncated = False
    mover = "I"
    while not is_terminal(pos):
        if len(entries) >= max_moves:
            truncated = True
            break
        agent = agents[mover]
        from_p = classify(pos, k_power) is Classification.P
        mv = agent.choose(pos, k_power, rngs[mover])
        if not isinstance(mv, Move):
            raise AgentError(f"agent {mover} ({agent.name}) returned {mv!r} instead of a move")
        violation = validate_move(pos, mv, config)
        if violation is not None:
            raise AgentError(
                f"agent {mover} ({agent.name}) chose an illegal move: "
                f"{violation.code}: {violation.detail}"
            )
        pos = apply_move(pos, mv, config)
        entries.append(MoveRecord(mover, mv, lex_key(pos), from_p))
        mover = "II" if mover == "I" else "I"
    outcome = entries[-1].mover if entries and is_terminal(pos) else None
    return Transcript(start, tuple(entries), outcome, truncated)


def transcript_violations(t: Transcript, k_power: int) -> list[str]:
    """Replay-and-audit: every recorded move must validate, keys must match
    the replay and strictly decrease, and the outcome must agree with the
    final position.  Empty list means the transcript is sound."""
    problems: list[str] = []
    config = GameConfig(k_power)
    pos = t.start
    previous = lex_key(pos)
    for n, rec in enumerate(t.entries):
        violation = validate_move(pos, rec.move, config)
        if violation is not None:
            problems.append(f"move {n}: illegal on replay ({violation.code})")
            return problems
        pos = apply_move(pos, rec.move, config)
        key = lex_key(pos)
        if key != rec.key_after:
            problems.append(f"move {n}: recorded key diverges from replay")
        if not lex_less(key, previous):
            problems.append(f"move {n}: lexicographic key did not decrease")
        previous = key
    if t.outcome is not None:
        if not is_terminal(pos):
            problems.append("outcome recorded on a non-terminal final position")
        elif not t.entries or t.entries[-1].mover != t.outcome:
            problems.append("winner is not the last mover")
    elif is_terminal(pos) and t.entries:
        problems.append("terminal play missing its outcome")
    return problems


@dataclass(frozen=True)
class BatchConfig:
    """Cross product of starts, agent pairs, and per-game seeds."""

    starts: tuple[Position, ...]
    agent_pairs: tuple[tuple[Agent, Agent], ...]
    seeds: tuple[int, ...]
    max_moves: int = 10_000


@dataclass(frozen=True)
class BatchSummary:
    games: int
    wins_i: int
    wins_ii: int
    truncated: int
    total_moves: int
    max_length: int
    violations: tuple[str, ...]

    @property
    def mean_length(self) -> float:
        return self.total_moves / self.games if self.games else 0.0

    def merged(self, other: "BatchSummary") -> "BatchSummary":
        """Associative combine, so independent shards can be summed."""
        return BatchSummary(
            self.games + other.games,
            self.wins_i + other.wins_i,
            self.wins_ii + other.wins_ii,
            self.truncated + other.truncated,
            self.total_moves + other.total_moves,
            max(self.max_length, other.max_length),
            self.violations + other.violations,
        )


def run_batch(config: BatchConfig, k_power: int) -> BatchSummary:
    """Play every (start, pair, seed) combination and aggregate.  Each game
    is audited with :func:`transcript_violations`; a clean engine reports
    no violations."""
    games = wins_i = wins_ii = truncated = total_moves = max_length = 0
    violations: list[str] = []
    for start_idx, start in enumerate(config.starts):
        for pair_idx, (first, second) in enumerate(config.agent_pairs):
            for seed in config.seeds:
                t = play_game(start, k_power, first, second, config.max_moves, seed)
                games += 1
                total_moves += t.length
                max_length = max(max_length, t.length)
                wins_i += t.outcome == "I"
                wins_ii += t.outcome == "II"
                truncated += t.truncated
                for problem in transcript_violations(t, k_power):
                    violations.append(
                        f"start {start_idx} pair {pair_idx} seed {seed}: {problem}"
                    )
    return BatchSummary(
        games, wins_i, wins_ii, truncated, total_moves, max_length, tuple(violations)
    )


def summary_text(summary: BatchSummary) -> str:
    lines = [
        f"games: {summary.games}",
        f"wins: I={summary.wins_i} II={summary.wins_ii}",
        f"truncated: {summary.truncated}",
        f"length: mean={summary.mean_length:.2f} max={summary.max_length}",
        f"violations: {len(summary.violations)}",
    ]
    lines.extend(f"  {v}" for v in summary.violations[:20])
    return "\n".join(lines)
