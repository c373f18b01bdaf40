"""Shared builders for the test suite: hand positions, random positions,
and random legal moves sampled without going through the enumerator."""

from __future__ import annotations

import random

from multivision.core import Move, MovePart, Position, PrimeWindow

PRIME_POOL = (2, 3, 5, 7, 11)


def make_pos(primes, piles) -> Position:
    return Position(PrimeWindow(tuple(primes)), tuple(tuple(p) for p in piles))


def random_position(
    rng: random.Random,
    max_primes: int = 3,
    max_piles: int = 3,
    max_exponent: int = 4,
    nonterminal: bool = False,
) -> Position:
    width = rng.randint(1, max_primes)
    offset = rng.randint(0, len(PRIME_POOL) - width)
    primes = PRIME_POOL[offset : offset + width]
    while True:
        piles = [
            [rng.randint(0, max_exponent) for _ in range(width)]
            for _ in range(rng.randint(1, max_piles))
        ]
        if not nonterminal or any(e for pile in piles for e in pile):
            return make_pos(primes, piles)


def random_legal_move(rng: random.Random, pos: Position, k_power: int, cap: int) -> Move:
    """Direct sampling: pick a divisible column, spread up to k_power-1
    divisions over its piles, attach random capped increments."""
    width = len(pos.window)
    occupied = [h for h in range(width) if any(pile[h] for pile in pos.piles)]
    h = rng.choice(occupied)
    eligible = [i for i, pile in enumerate(pos.piles) if pile[h] >= 1]
    rng.shuffle(eligible)
    budget = rng.randint(1, k_power - 1)
    parts = []
    for pile in eligible:
        take = min(budget, pos.piles[pile][h], rng.randint(1, k_power - 1))
        increments = {
            q: rng.randint(0, cap) for q in range(h + 1, width) if rng.random() < 0.5
        }
        parts.append(MovePart(pile, take, increments))
        budget -= take
        if budget == 0 or rng.random() < 0.5:
            break
    return Move(h, tuple(sorted(parts, key=lambda p: p.pile)))
