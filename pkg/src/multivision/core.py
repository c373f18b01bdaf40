"""Board model: prime windows, exponent-matrix positions, move legality.

Pile sizes are handled purely as exponent vectors over a fixed ascending
prime window.  The underlying integers are never materialized, so exponents
can be arbitrarily large without any special handling; every operation here
works entrywise on the m x (k+1) matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Iterator, Mapping

from .primes import is_prime, primes_between

ExponentVec = tuple[int, ...]
LexKey = tuple[int, ...]


class MultivisionError(Exception):
    """Base class for every error this package raises on purpose."""


class PositionError(MultivisionError):
    """Invalid position setup: non-prime base, negative exponent, and similar."""


@dataclass(frozen=True)
class PrimeWindow:
    """Ascending primes fixed for the lifetime of a game.

    The window is derived once from the initial piles and never extended.
    It is empty only for the all-ones start, which is already terminal.
    """

    primes: tuple[int, ...]

    def __post_init__(self) -> None:
        primes = tuple(int(p) for p in self.primes)
        object.__setattr__(self, "primes", primes)
        for i, p in enumerate(primes):
            if not is_prime(p):
                raise PositionError(f"window entry {p} is not prime")
            if i and primes[i - 1] >= p:
                raise PositionError("window primes must be strictly increasing")

    def __len__(self) -> int:
        return len(self.primes)

    @property
    def top_index(self) -> int:
        """Index of the largest prime; -1 for the empty sentinel window."""
        return len(self.primes) - 1

    def index_of(self, prime: int) -> int:
        try:
            return self.primes.index(prime)
        except ValueError:
            raise PositionError(f"prime {prime} is outside the window") from None


@dataclass(frozen=True)
class GameConfig:
    """Family parameter: positions whose column totals are all multiples of
    ``power`` are exactly the losing ones.  ``power=2`` is the base game."""

    power: int = 2

    def __post_init__(self) -> None:
        object.__setattr__(self, "power", int(self.power))
        if self.power < 2:
            raise ValueError("power must be >= 2")


def _canonical_increments(increments) -> tuple[tuple[int, int], ...]:
    if isinstance(increments, Mapping):
        items = increments.items()
    else:
        items = dict(increments).items()
    return tuple(sorted((int(q), int(v)) for q, v in items if int(v) != 0))


@dataclass(frozen=True)
class MovePart:
    """One pile's share of a move: divide it ``times`` times by the chosen
    prime and raise later window entries by ``increments``.

    Zero increments are dropped at construction so equal moves compare
    equal; validity is judged by :func:`validate_move`, not here.
    """

    pile: int
    times: int = 1
    increments: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "increments", _canonical_increments(self.increments))


@dataclass(frozen=True)
class Move:
    """A division at one window index, split over one or more piles."""

    prime_index: int
    parts: tuple[MovePart, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "parts", tuple(self.parts))

    @property
    def total_times(self) -> int:
        return sum(part.times for part in self.parts)


@dataclass(frozen=True)
class Position:
    """m piles as exponent vectors over a shared window; all entries >= 0."""

    window: PrimeWindow
    piles: tuple[ExponentVec, ...]

    def __post_init__(self) -> None:
        piles = tuple(tuple(int(e) for e in pile) for pile in self.piles)
        object.__setattr__(self, "piles", piles)
        if not piles:
            raise PositionError("a position needs at least one pile")
        width = len(self.window)
        for pile in piles:
            if len(pile) != width:
                raise PositionError("pile vector length must match the window")
            for e in pile:
                if e < 0:
                    raise PositionError("negative exponent")

    @property
    def pile_count(self) -> int:
        return len(self.piles)


@dataclass(frozen=True)
class Violation:
    """Why a move is illegal; ``code`` is stable, ``detail`` is for humans."""

    code: str
    detail: str


class MoveViolation(MultivisionError):
    """Raised when an illegal move is applied."""

    def __init__(self, violation: Violation):
        super().__init__(f"{violation.code}: {violation.detail}")
        self.violation = violation

    @property
    def code(self) -> str:
        return self.violation.code


def new_game(
    piles: Iterable[Mapping[int, int] | Iterable[tuple[int, int]]],
    config: GameConfig = GameConfig(),
) -> Position:
    """Build the start position from factored pile sizes.

    The window spans the smallest to the largest prime with positive total
    exponent, including every intermediate prime of the natural sequence:
    an exponent that is zero now may become positive during play.  The
    window does not depend on ``config``.  An all-ones start gets the empty
    sentinel window and is immediately terminal.
    """
    parsed: list[dict[int, int]] = []
    for pile in piles:
        items = pile.items() if isinstance(pile, Mapping) else pile
        factors: dict[int, int] = {}
        for base, exponent in items:
            base, exponent = int(base), int(exponent)
            if not is_prime(base):
                raise PositionError(f"base {base} is not prime")
            if exponent < 0:
                raise PositionError(f"negative exponent for base {base}")
            if base in factors:
                raise PositionError(f"duplicate base {base}")
            factors[base] = exponent
        parsed.append(factors)
    if not parsed:
        raise PositionError("at least one pile required")
    support = sorted({b for factors in parsed for b, e in factors.items() if e > 0})
    if support:
        window = PrimeWindow(tuple(primes_between(support[0], support[-1])))
    else:
        window = PrimeWindow(())
    matrix = tuple(tuple(factors.get(p, 0) for p in window.primes) for factors in parsed)
    return Position(window, matrix)


def total_exponents(pos: Position) -> ExponentVec:
    """Columnwise sum over piles: the exponent vector of the pile-size product."""
    return tuple(map(sum, zip(*pos.piles)))


def is_terminal(pos: Position) -> bool:
    """True iff every pile has size 1 (all exponents zero)."""
    return all(e == 0 for pile in pos.piles for e in pile)


def lex_key(pos: Position) -> LexKey:
    """Termination key: the total-exponent tuple, smallest prime first.

    Every legal move strictly decreases this key lexicographically, which
    is what bounds the length of play.
    """
    return total_exponents(pos)


def lex_less(a: LexKey, b: LexKey) -> bool:
    """Strict lexicographic order on equal-length keys, index 0 most significant."""
    if len(a) != len(b):
        raise ValueError("lex keys must have equal length")
    return tuple(a) < tuple(b)


def validate_move(pos: Position, mv: Move, config: GameConfig) -> Violation | None:
    """None when ``mv`` is legal at ``pos``; otherwise the first violation found.

    Legality: the divided index is in the window, every selected pile is
    distinct and holds enough exponent there (at least 1, so piles of size 1
    are never selectable), the division total lies in 1..power-1, and all
    growth lands strictly right of the divided index with positive amounts.
    """
    width = len(pos.window)
    h = mv.prime_index
    if not isinstance(h, int) or not 0 <= h < width:
        return Violation("bad-prime-index", f"prime index {h!r} outside window of size {width}")
    if not mv.parts:
        return Violation("s-out-of-range", "a move must divide at least one pile")
    seen: set[int] = set()
    total = 0
    for part in mv.parts:
        if not isinstance(part.pile, int) or not 0 <= part.pile < pos.pile_count:
            return Violation("bad-pile-index", f"pile index {part.pile!r} out of range")
        if part.pile in seen:
            return Violation("duplicate-pile", f"pile {part.pile} selected twice")
        seen.add(part.pile)
        if part.times < 1:
            return Violation("s-out-of-range", "each selected pile must be divided at least once")
        total += part.times
    if total > config.power - 1:
        return Violation(
            "s-out-of-range",
            f"division total {total} exceeds {config.power - 1} (power {config.power})",
        )
    for part in mv.parts:
        if pos.piles[part.pile][h] < part.times:
            return Violation(
                "insufficient-exponent",
                f"pile {part.pile} holds exponent {pos.piles[part.pile][h]} at index {h}, "
                f"needs {part.times}",
            )
        for q, amount in part.increments:
            if not 0 <= q < width:
                return Violation("bad-prime-index", f"increment index {q!r} outside window")
            if q <= h:
                return Violation(
                    "increment-not-after-h",
                    f"increment at index {q} not right of divided index {h}",
                )
            if amount < 1:
                return Violation("bad-increment", "increment amounts must be positive")
    return None


def apply_move(pos: Position, mv: Move, config: GameConfig) -> Position:
    """The follower position; raises :class:`MoveViolation` on illegal moves.

    Value semantics: the input position is never mutated.
    """
    violation = validate_move(pos, mv, config)
    if violation is not None:
        raise MoveViolation(violation)
    matrix = [list(pile) for pile in pos.piles]
    for part in mv.parts:
        matrix[part.pile][mv.prime_index] -= part.times
        for q, amount in part.increments:
            matrix[part.pile][q] += amount
    return Position(pos.window, tuple(tuple(pile) for pile in matrix))


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Ordered positive tuples of the given length summing to ``total``."""
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first, *rest)


def enumerate_moves_capped(pos: Position, config: GameConfig, cap: int) -> list[Move]:
    """Every legal move whose increments are each at most ``cap``.

    Order is deterministic: divided index ascending, then division total,
    then part count, then pile choice, then division split, then increment
    vectors lexicographically (first part varying slowest).  Intended for
    capped desk-scale work such as the brute-force solver; the uncapped
    move set is infinite whenever the window extends past the divided
    prime.
    """
    if cap < 0:
        raise ValueError("cap must be >= 0")
    moves: list[Move] = []
    width = len(pos.window)
    for h in range(width):
        eligible = [i for i in range(pos.pile_count) if pos.piles[i][h] >= 1]
        if not eligible:
            continue
        tail = range(h + 1, width)
        increment_options = [
            {q: v for q, v in zip(tail, values) if v}
            for values in product(range(cap + 1), repeat=len(tail))
        ]
        for total in range(1, config.power):
            for count in range(1, total + 1):
                if count > len(eligible):
                    break
                for chosen in combinations(eligible, count):
                    for split in _compositions(total, count):
                        if any(split[t] > pos.piles[p][h] for t, p in enumerate(chosen)):
                            continue
                        for incs in product(increment_options, repeat=count):
                            parts = tuple(
                                MovePart(p, split[t], incs[t]) for t, p in enumerate(chosen)
                            )
                            moves.append(Move(h, parts))
    return moves
