"""Canonical text and wire formats.

Wire documents are JSON with a fixed ``{version, kind, payload}`` envelope,
sorted keys, and compact separators, so a given value always encodes to the
same bytes.  Integer fields travel as decimal strings: exponents routinely
exceed any fixed width, and native JSON numbers would silently lose
precision in readers that parse them as doubles.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

from .core import Move, MovePart, MultivisionError, Position, PrimeWindow
from .oracle import GridSpec, OracleReport
from .primes import is_prime
from .sim import BatchSummary, MoveRecord, Transcript

WIRE_VERSION = "1"


class CodecError(MultivisionError):
    """Base for text/wire encoding and decoding failures."""


class TextParseError(CodecError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class WireFormatError(CodecError):
    pass


class FactorizationError(CodecError):
    pass


@dataclass(frozen=True)
class FactoredNatural:
    """A natural in canonical factored form: ascending verified primes,
    exponents >= 1; the empty tuple is the number 1."""

    pairs: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        pairs = tuple((int(b), int(e)) for b, e in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        for i, (base, exponent) in enumerate(pairs):
            if not is_prime(base):
                raise CodecError(f"base {base} is not prime")
            if exponent < 1:
                raise CodecError(f"exponent for base {base} must be >= 1")
            if i and pairs[i - 1][0] >= base:
                raise CodecError("bases must be strictly increasing")

    def __iter__(self):
        return iter(self.pairs)


# ---------------------------------------------------------------------------
# text format
#
# position := pile (NEWLINE pile)*
# pile     := "1" | factor (" * " factor)*
# factor   := prime "^" exponent        (whitespace around "*" is free)

_TOKEN = re.compile(r"[ \t]*(\d+|\^|\*|\S)")


def _tokenize(line: str, line_no: int) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while pos < len(line):
        m = _TOKEN.match(line, pos)
        if m is None:
            break  # trailing whitespace
        text = m.group(1)
        column = m.start(1) + 1
        if text not in ("^", "*") and not text.isdigit():
            raise TextParseError(f"unexpected character {text!r}", line_no, column)
        tokens.append((text, column))
        pos = m.end()
    return tokens


def _parse_pile(line: str, line_no: int) -> FactoredNatural:
    tokens = _tokenize(line, line_no)
    end = len(line) + 1

    def expect(i: int, what: str) -> tuple[str, int]:
        if i >= len(tokens):
            raise TextParseError(f"expected {what}, got end of line", line_no, end)
        return tokens[i]

    if not tokens:
        raise TextParseError("empty pile line", line_no, 1)
    if len(tokens) == 1 and tokens[0][0] == "1":
        return FactoredNatural(())
    factors: dict[int, int] = {}
    i = 0
    while True:
        base_text, base_col = expect(i, "a prime base")
        if not base_text.isdigit():
            raise TextParseError(f"expected a prime base, got {base_text!r}", line_no, base_col)
        caret, caret_col = expect(i + 1, "'^'")
        if caret != "^":
            raise TextParseError(f"expected '^', got {caret!r}", line_no, caret_col)
        exp_text, exp_col = expect(i + 2, "an exponent")
        if not exp_text.isdigit():
            raise TextParseError(f"expected an exponent, got {exp_text!r}", line_no, exp_col)
        base = int(base_text)
        if not is_prime(base):
            raise TextParseError(f"non-prime base {base}", line_no, base_col)
        if base in factors:
            raise TextParseError(f"duplicate base {base}", line_no, base_col)
        factors[base] = int(exp_text)
        i += 3
        if i == len(tokens):
            break
        star, star_col = tokens[i]
        if star != "*":
            raise TextParseError(f"expected '*', got {star!r}", line_no, star_col)
        i += 1
    pairs = tuple(sorted((b, e) for b, e in factors.items() if e > 0))
    return FactoredNatural(pairs)


def parse_position_text(text: str) -> list[FactoredNatural]:
    """One factored pile per line; "1" is the empty factorization."""
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise TextParseError("no piles given", 1, 1)
    return [_parse_pile(line, n + 1) for n, line in enumerate(lines)]


def format_position_text(pos: Position) -> str:
    """Inverse of parsing up to canonical form; zero columns are omitted and
    an all-zero pile prints as "1"."""
    lines = []
    for pile in pos.piles:
        factors = [f"{p}^{e}" for p, e in zip(pos.window.primes, pile) if e > 0]
        lines.append(" * ".join(factors) if factors else "1")
    return "\n".join(lines)


def format_factored(value: FactoredNatural) -> str:
    return " * ".join(f"{b}^{e}" for b, e in value.pairs) if value.pairs else "1"


def factorize_small(n: int, limit: int = 100_000) -> FactoredNatural:
    """Trial division with divisors up to ``limit``.

    A leftover cofactor above the limit (prime or not) raises
    :class:`FactorizationError`; n=1 yields the empty factorization.
    """
    n = int(n)
    if n < 1:
        raise ValueError("n must be >= 1")
    pairs: list[tuple[int, int]] = []
    d = 2
    while d <= limit and d * d <= n:
        if n % d == 0:
            count = 0
            while n % d == 0:
                n //= d
                count += 1
            pairs.append((d, count))
        d += 1 if d == 2 else 2
    if n > 1:
        if n > limit:
            raise FactorizationError(f"incomplete-factorization: cofactor {n} exceeds limit {limit}")
        pairs.append((n, 1))
    return FactoredNatural(tuple(pairs))


# ---------------------------------------------------------------------------
# wire format

_DECIMAL = re.compile(r"(0|[1-9][0-9]*)\Z")


def decimal_int(value) -> int:
    """Parse a wire integer; anything but a canonical decimal string fails."""
    if not isinstance(value, str) or not _DECIMAL.match(value):
        raise WireFormatError(f"integer field not a decimal string: {value!r}")
    return int(value)


def field(obj, key: str):
    if not isinstance(obj, dict) or key not in obj:
        raise WireFormatError(f"missing field {key!r}")
    return obj[key]


def list_field(obj, key: str) -> list:
    value = field(obj, key)
    if not isinstance(value, list):
        raise WireFormatError(f"field {key!r} must be a list")
    return value


def document(kind: str, payload) -> dict:
    return {"version": WIRE_VERSION, "kind": kind, "payload": payload}


def dumps(doc: dict) -> bytes:
    return json.dumps(doc, sort_keys=True, separators=(",", ":")).encode("ascii")


def loads(data: bytes | str) -> dict:
    try:
        doc = json.loads(data)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise WireFormatError(f"malformed document: {exc}") from None
    if not isinstance(doc, dict):
        raise WireFormatError("document must be an object")
    version = field(doc, "version")
    if version != WIRE_VERSION:
        raise WireFormatError(f"unknown version tag {version!r}")
    kind = field(doc, "kind")
    if not isinstance(kind, str):
        raise WireFormatError("kind must be a string")
    field(doc, "payload")
    return doc


def position_payload(pos: Position) -> dict:
    return {
        "primes": [str(p) for p in pos.window.primes],
        "piles": [[str(e) for e in pile] for pile in pos.piles],
    }


def position_from_payload(obj) -> Position:
    window = PrimeWindow(tuple(decimal_int(p) for p in list_field(obj, "primes")))
    piles = tuple(
        tuple(decimal_int(e) for e in pile) if isinstance(pile, list) else _bad_pile(pile)
        for pile in list_field(obj, "piles")
    )
    return Position(window, piles)


def _bad_pile(value):
    raise WireFormatError(f"pile must be a list, got {value!r}")


def move_payload(mv: Move) -> dict:
    return {
        "prime_index": str(mv.prime_index),
        "parts": [
            {
                "pile": str(part.pile),
                "times": str(part.times),
                "increments": {str(q): str(v) for q, v in part.increments},
            }
            for part in mv.parts
        ],
    }


def move_from_payload(obj) -> Move:
    parts = []
    for part in list_field(obj, "parts"):
        increments = field(part, "increments")
        if not isinstance(increments, dict):
            raise WireFormatError("increments must be an object")
        parts.append(
            MovePart(
                decimal_int(field(part, "pile")),
                decimal_int(field(part, "times")),
                {decimal_int(q): decimal_int(v) for q, v in increments.items()},
            )
        )
    return Move(decimal_int(field(obj, "prime_index")), tuple(parts))


def move_record_payload(rec: MoveRecord) -> dict:
    return {
        "mover": rec.mover,
        "move": move_payload(rec.move),
        "key_after": [str(x) for x in rec.key_after],
        "from_p": rec.from_p,
    }


def move_record_from_payload(obj) -> MoveRecord:
    mover = field(obj, "mover")
    if mover not in ("I", "II"):
        raise WireFormatError(f"mover must be I or II, got {mover!r}")
    from_p = field(obj, "from_p")
    if not isinstance(from_p, bool):
        raise WireFormatError("from_p must be a boolean")
    return MoveRecord(
        mover,
        move_from_payload(field(obj, "move")),
        tuple(decimal_int(x) for x in list_field(obj, "key_after")),
        from_p,
    )


def transcript_payload(t: Transcript) -> dict:
    return {
        "start": position_payload(t.start),
        "moves": [move_record_payload(rec) for rec in t.entries],
        "outcome": t.outcome,
        "truncated": t.truncated,
        "length": str(t.length),
    }


def transcript_from_payload(obj) -> Transcript:
    outcome = field(obj, "outcome")
    if outcome not in (None, "I", "II"):
        raise WireFormatError(f"outcome must be I, II, or null, got {outcome!r}")
    truncated = field(obj, "truncated")
    if not isinstance(truncated, bool):
        raise WireFormatError("truncated must be a boolean")
    entries = tuple(move_record_from_payload(rec) for rec in list_field(obj, "moves"))
    if decimal_int(field(obj, "length")) != len(entries):
        raise WireFormatError("length field disagrees with the move list")
    return Transcript(position_from_payload(field(obj, "start")), entries, outcome, truncated)


def _float_str(x: float) -> str:
    return repr(float(x))


def _float_from(value) -> float:
    if not isinstance(value, str):
        raise WireFormatError(f"float field not a decimal string: {value!r}")
    try:
        return float(value)
    except ValueError:
        raise WireFormatError(f"float field not a decimal string: {value!r}") from None


def grid_payload(grid: GridSpec) -> dict:
    return {
        "primes": [str(p) for p in grid.primes],
        "max_piles": str(grid.max_piles),
        "max_exponent": str(grid.max_exponent),
        "power": str(grid.power),
        "cap": str(grid.cap),
    }


def grid_from_payload(obj) -> GridSpec:
    return GridSpec(
        tuple(decimal_int(p) for p in list_field(obj, "primes")),
        decimal_int(field(obj, "max_piles")),
        decimal_int(field(obj, "max_exponent")),
        decimal_int(field(obj, "power")),
        decimal_int(field(obj, "cap")),
    )


def report_payload(report: OracleReport) -> dict:
    return {
        "grid": grid_payload(report.grid),
        "positions_labeled": str(report.positions_labeled),
        "mismatches": [
            {"position": position_payload(p), "oracle": a, "closed_form": b}
            for p, a, b in report.mismatches
        ],
        "elapsed_seconds": _float_str(report.elapsed),
    }


def report_from_payload(obj) -> OracleReport:
    mismatches = []
    for row in list_field(obj, "mismatches"):
        oracle_label = field(row, "oracle")
        closed_form = field(row, "closed_form")
        if oracle_label not in ("P", "N") or closed_form not in ("P", "N"):
            raise WireFormatError("labels must be P or N")
        mismatches.append((position_from_payload(field(row, "position")), oracle_label, closed_form))
    return OracleReport(
        grid_from_payload(field(obj, "grid")),
        decimal_int(field(obj, "positions_labeled")),
        tuple(mismatches),
        _float_from(field(obj, "elapsed_seconds")),
    )


def summary_payload(summary: BatchSummary) -> dict:
    return {
        "games": str(summary.games),
        "wins_i": str(summary.wins_i),
        "wins_ii": str(summary.wins_ii),
        "truncated": str(summary.truncated),
        "total_moves": str(summary.total_moves),
        "max_length": str(summary.max_length),
        "violations": list(summary.violations),
    }


def summary_from_payload(obj) -> BatchSummary:
    violations = []
    for v in list_field(obj, "violations"):
        if not isinstance(v, str):
            raise WireFormatError("violations must be strings")
        violations.append(v)
    return BatchSummary(
        decimal_int(field(obj, "games")),
        decimal_int(field(obj, "wins_i")),
        decimal_int(field(obj, "wins_ii")),
        decimal_int(field(obj, "truncated")),
        decimal_int(field(obj, "total_moves")),
        decimal_int(field(obj, "max_length")),
        tuple(violations),
    )


_BUILDERS = {
    Position: ("position", position_payload),
    Move: ("move", move_payload),
    Transcript: ("transcript", transcript_payload),
    OracleReport: ("oracle_report", report_payload),
    BatchSummary: ("batch_summary", summary_payload),
}

_PARSERS = {
    "position": position_from_payload,
    "move": move_from_payload,
    "transcript": transcript_from_payload,
    "oracle_report": report_from_payload,
    "batch_summary": summary_from_payload,
}


def encode_wire(value) -> bytes:
    """Byte-deterministic wire document for a domain value."""
    entry = _BUILDERS.get(type(value))
    if entry is None:
        raise CodecError(f"cannot encode values of type {type(value).__name__}")
    kind, builder = entry
    return dumps(document(kind, builder(value)))


def decode_wire(data: bytes | str):
    """Inverse of :func:`encode_wire`; strict about structure and versions."""
    doc = loads(data)
    parser = _PARSERS.get(doc["kind"])
    if parser is None:
        raise WireFormatError(f"unknown kind {doc['kind']!r}")
    return parser(doc["payload"])
