"""Classification and move synthesis on top of the board model.

The classifier and the winning-move builder each make a fixed number of
passes over the m x (k+1) exponent matrix; that bounded pass count is what
makes the strategy linear in the size of the position.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .core import (
    Move,
    MovePart,
    MultivisionError,
    Position,
    is_terminal,
    total_exponents,
)


class Classification(Enum):
    """Game value of a position under optimal play."""

    P = "P"  # previous mover wins: the player to move is losing
    N = "N"  # next mover wins


class StrategyError(MultivisionError):
    """A strategy operation was called outside its domain; see ``code``."""

    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


def _check_power(k_power: int) -> int:
    k_power = int(k_power)
    if k_power < 2:
        raise ValueError("power must be >= 2")
    return k_power


@dataclass(frozen=True)
class ResidueState:
    """The exponent matrix and its column totals reduced mod ``power``.

    The total row is all-zero exactly at losing positions.  ``updated``
    maintains the state incrementally by touching only the entries a move
    names; it must always agree with recomputation from the new position.
    """

    per_pile: tuple[tuple[int, ...], ...]
    total: tuple[int, ...]
    power: int

    def updated(self, mv: Move) -> "ResidueState":
        matrix = [list(row) for row in self.per_pile]
        total = list(self.total)
        k = self.power
        h = mv.prime_index
        for part in mv.parts:
            matrix[part.pile][h] = (matrix[part.pile][h] - part.times) % k
            total[h] = (total[h] - part.times) % k
            for q, amount in part.increments:
                matrix[part.pile][q] = (matrix[part.pile][q] + amount) % k
                total[q] = (total[q] + amount) % k
        return ResidueState(tuple(tuple(row) for row in matrix), tuple(total), k)


def residues(pos: Position, k_power: int) -> ResidueState:
    """Exact mod-``k_power`` reduction of every exponent and every total."""
    k = _check_power(k_power)
    per_pile = tuple(tuple(e % k for e in pile) for pile in pos.piles)
    total = tuple(t % k for t in total_exponents(pos))
    return ResidueState(per_pile, total, k)


def classify(pos: Position, k_power: int) -> Classification:
    """P iff every column total is a multiple of ``k_power`` (the pile-size
    product is a perfect power); terminal positions are P."""
    k = _check_power(k_power)
    if all(t % k == 0 for t in total_exponents(pos)):
        return Classification.P
    return Classification.N


def winning_move(pos: Position, k_power: int) -> Move | None:
    """A move whose follower has an all-zero residue row, or None from P.

    Construction: find the leftmost column whose total is off, divide away
    exactly its residue (spread greedily over piles in ascending order; the
    column total is at least the residue, so the spread always completes),
    and cancel every later column's residue with the least positive
    correction, all attached to the first selected pile.  Columns left of
    the divided one were already clean and stay untouched.
    """
    k = _check_power(k_power)
    if is_terminal(pos):
        raise StrategyError("called-on-terminal", "no moves exist from the all-ones position")
    totals = total_exponents(pos)
    h = next((i for i, t in enumerate(totals) if t % k), None)
    if h is None:
        return None
    share = totals[h] % k
    parts: list[MovePart] = []
    remaining = share
    for pile in range(pos.pile_count):
        take = min(remaining, pos.piles[pile][h])
        if take:
            parts.append(MovePart(pile, take))
            remaining -= take
            if not remaining:
                break
    corrections = {
        q: (-totals[q]) % k for q in range(h + 1, len(totals)) if totals[q] % k
    }
    first = parts[0]
    parts[0] = MovePart(first.pile, first.times, corrections)
    return Move(h, tuple(parts))


def can_delay(pos: Position) -> bool:
    """True while some prime below the top of the window still has mass;
    exactly then can play be stretched past any given length."""
    totals = total_exponents(pos)
    return any(t > 0 for t in totals[:-1])


def delay_move(pos: Position, min_moves: int) -> Move:
    """A single division low in the window that pumps the top prime by
    ``min_moves``, guaranteeing at least that many further moves of play.

    Picks the largest below-top index with positive total and the lowest
    pile holding mass there.
    """
    if min_moves < 1:
        raise ValueError("min_moves must be >= 1")
    if not can_delay(pos):
        raise StrategyError("cannot-delay", "only the top prime has mass; play is in its end moves")
    totals = total_exponents(pos)
    top = pos.window.top_index
    h = max(i for i in range(top) if totals[i] > 0)
    pile = next(i for i in range(pos.pile_count) if pos.piles[i][h] > 0)
    return Move(h, (MovePart(pile, 1, {top: min_moves}),))


def winning_delay_move(pos: Position, k_power: int, min_moves: int) -> Move:
    """The winning move, stretched: its top-prime increment is raised by a
    multiple of ``k_power`` so the follower still has an all-zero residue
    row while its top total grows by at least ``min_moves``.

    When the winning move already divides at the top there is no room to
    pump and it is returned unchanged.
    """
    k = _check_power(k_power)
    if min_moves < 1:
        raise ValueError("min_moves must be >= 1")
    if is_terminal(pos):
        raise StrategyError("called-on-terminal", "no moves exist from the all-ones position")
    mv = winning_move(pos, k)
    if mv is None:
        raise StrategyError("called-on-p-position", "only the winning side can pump and stay winning")
    top = pos.window.top_index
    if mv.prime_index == top:
        return mv
    pump = k * -(-min_moves // k)
    first = mv.parts[0]
    raised = dict(first.increments)
    raised[top] = raised.get(top, 0) + pump
    return Move(mv.prime_index, (MovePart(first.pile, first.times, raised), *mv.parts[1:]))


def minimal_move(pos: Position) -> Move:
    """Smallest progress move: one division at the leftmost occupied column,
    no growth.  Used by engines that must move from lost positions without
    stalling."""
    if is_terminal(pos):
        raise StrategyError("called-on-terminal", "no moves exist from the all-ones position")
    totals = total_exponents(pos)
    h = next(i for i, t in enumerate(totals) if t > 0)
    pile = next(i for i in range(pos.pile_count) if pos.piles[i][h] > 0)
    return Move(h, (MovePart(pile, 1),))


def engine_move(pos: Position, k_power: int, pump_min_moves: int | None = None) -> Move:
    """House engine policy.

    Winning positions: the residue-restoring move, pumped by
    ``pump_min_moves`` when given.  Lost positions: stall with a minimal
    delay while possible, else concede ground with the smallest move.
    """
    k = _check_power(k_power)
    if is_terminal(pos):
        raise StrategyError("called-on-terminal", "no moves exist from the all-ones position")
    if classify(pos, k) is Classification.N:
        if pump_min_moves:
            return winning_delay_move(pos, k, pump_min_moves)
        mv = winning_move(pos, k)
        assert mv is not None
        return mv
    if can_delay(pos):
        return delay_move(pos, 1)
    return minimal_move(pos)
