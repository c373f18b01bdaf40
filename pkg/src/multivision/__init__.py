"""Multivision: exact engine, brute-force verifier, self-play harness, and
play service for an impartial pile game of prime divisions and unbounded
multiplications, including its K-th-power generalization."""

from .core import (
    ExponentVec,
    GameConfig,
    LexKey,
    Move,
    MovePart,
    MoveViolation,
    MultivisionError,
    Position,
    PositionError,
    PrimeWindow,
    Violation,
    apply_move,
    enumerate_moves_capped,
    is_terminal,
    lex_key,
    lex_less,
    new_game,
    total_exponents,
    validate_move,
)
from .strategy import (
    Classification,
    ResidueState,
    StrategyError,
    can_delay,
    classify,
    delay_move,
    engine_move,
    minimal_move,
    residues,
    winning_delay_move,
    winning_move,
)
from .oracle import GridSpec, OracleReport, default_grids, solve_capped, verify_characterization
from .sim import (
    Agent,
    AgentError,
    BatchConfig,
    BatchSummary,
    DelayerAgent,
    MoveRecord,
    OptimalAgent,
    RandomCappedAgent,
    TopDecrementerAgent,
    Transcript,
    play_game,
    run_batch,
)
from .codec import (
    CodecError,
    FactoredNatural,
    FactorizationError,
    TextParseError,
    WireFormatError,
    decode_wire,
    encode_wire,
    factorize_small,
    format_position_text,
    parse_position_text,
)

__all__ = [name for name in dir() if not name.startswith("_")]
