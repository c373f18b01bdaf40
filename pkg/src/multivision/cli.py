"""Command-line front end: classification, hints, delay moves, interactive
play, brute-force verification, simulation batches, and the HTTP service.

Every subcommand is a thin adapter over the library; positions come from
--pos (";" separates piles), --file, or stdin in the usual text grammar.
Exit codes: 0 success, 1 domain errors, 2 usage errors.
"""

from __future__ import annotations

import argparse
import re
import sys

from . import codec, oracle, sim
from .core import (
    GameConfig,
    Move,
    MovePart,
    MoveViolation,
    MultivisionError,
    Position,
    PrimeWindow,
    apply_move,
    is_terminal,
    new_game,
    total_exponents,
    validate_move,
)
from .strategy import (
    Classification,
    can_delay,
    classify,
    delay_move,
    engine_move,
    residues,
    winning_move,
)


class MoveTextError(MultivisionError):
    """Unparseable human move text."""


# ---------------------------------------------------------------------------
# human move syntax: "pile <i>: /<p>[^<t>] [*<q>^<t> ...]"; multi-part moves
# wrap parts in brackets, separated by ";".  Pile numbers are 1-based.

_PART_RE = re.compile(
    r"\s*pile\s+(\d+)\s*:\s*/\s*(\d+)\s*(?:\^\s*(\d+))?((?:\s*\*\s*\d+\s*\^\s*\d+)*)\s*\Z"
)
_FACTOR_RE = re.compile(r"\*\s*(\d+)\s*\^\s*(\d+)")


def parse_move_text(text: str, window: PrimeWindow) -> Move:
    text = text.strip()
    if text.startswith("["):
        if not text.endswith("]"):
            raise MoveTextError("multi-part move must end with ']'")
        bodies = text[1:-1].split(";")
    else:
        bodies = [text]
    prime_index: int | None = None
    parts: list[MovePart] = []
    for body in bodies:
        match = _PART_RE.match(body)
        if match is None:
            raise MoveTextError(
                f"cannot parse {body.strip()!r}; expected 'pile <i>: /<p> [*<q>^<t> ...]'"
            )
        pile = int(match.group(1)) - 1
        if pile < 0:
            raise MoveTextError("pile numbers start at 1")
        h = window.index_of(int(match.group(2)))
        if prime_index is None:
            prime_index = h
        elif prime_index != h:
            raise MoveTextError("all parts of a move must divide by the same prime")
        times = int(match.group(3) or 1)
        increments: dict[int, int] = {}
        for q_text, amount_text in _FACTOR_RE.findall(match.group(4)):
            q = window.index_of(int(q_text))
            increments[q] = increments.get(q, 0) + int(amount_text)
        parts.append(MovePart(pile, times, increments))
    assert prime_index is not None
    return Move(prime_index, tuple(parts))


def format_move_text(mv: Move, window: PrimeWindow) -> str:
    rendered = []
    for part in mv.parts:
        body = f"pile {part.pile + 1}: /{window.primes[mv.prime_index]}"
        if part.times != 1:
            body += f"^{part.times}"
        for q, amount in part.increments:
            body += f" *{window.primes[q]}^{amount}"
        rendered.append(body)
    return rendered[0] if len(rendered) == 1 else "[" + "; ".join(rendered) + "]"


# ---------------------------------------------------------------------------
# shared plumbing

def _read_position(args, allow_stdin: bool = True) -> Position:
    if getattr(args, "pos", None):
        text = args.pos.replace(";", "\n")
    elif getattr(args, "file", None):
        with open(args.file, "r", encoding="utf-8") as handle:
            text = handle.read()
    elif allow_stdin:
        text = sys.stdin.read()
    else:
        raise MultivisionError("this subcommand needs --pos or --file (stdin is for moves)")
    piles = codec.parse_position_text(text)
    return new_game(piles, GameConfig(args.power))


def _vec(values) -> str:
    return "[" + ", ".join(str(v) for v in values) + "]"


def _emit_doc(kind: str, payload) -> None:
    sys.stdout.write(codec.dumps(codec.document(kind, payload)).decode("ascii") + "\n")


def _cell(value: int) -> str:
    text = str(value)
    return text if len(text) <= 12 else f"[{len(text)} digits]"


def _board_lines(pos: Position, k_power: int) -> list[str]:
    columns = [[str(p) for p in pos.window.primes]]
    for pile in pos.piles:
        columns.append([_cell(e) for e in pile])
    totals = total_exponents(pos)
    columns.append([_cell(t) for t in totals])
    columns.append([str(t % k_power) for t in totals])
    labels = (
        ["prime"]
        + [f"pile {i + 1}" for i in range(pos.pile_count)]
        + ["total", f"mod {k_power}"]
    )
    width = max((len(cell) for row in columns for cell in row), default=1)
    label_width = max(len(label) for label in labels)
    lines = []
    for label, row in zip(labels, columns):
        cells = "  ".join(cell.rjust(width) for cell in row)
        lines.append(f"{label.ljust(label_width)}  {cells}".rstrip())
    return lines


# ---------------------------------------------------------------------------
# subcommands

def _cmd_classify(args) -> int:
    pos = _read_position(args)
    label = classify(pos, args.power)
    totals = total_exponents(pos)
    if args.format == "wire":
        _emit_doc(
            "classification",
            {"classification": label.value, "totals": [str(t) for t in totals]},
        )
    else:
        print(label.value)
        print(f"totals: {_vec(totals)}")
    return 0


def _cmd_hint(args) -> int:
    pos = _read_position(args)
    move = None if is_terminal(pos) else winning_move(pos, args.power)
    if args.format == "wire":
        _emit_doc(
            "hint",
            {
                "classification": classify(pos, args.power).value,
                "move": codec.move_payload(move) if move else None,
                "can_delay": can_delay(pos),
            },
        )
    elif move is None:
        print("none: P-position")
    else:
        print(format_move_text(move, pos.window))
    return 0


def _cmd_delay(args) -> int:
    pos = _read_position(args)
    move = delay_move(pos, args.min_moves)
    if args.format == "wire":
        sys.stdout.write(codec.encode_wire(move).decode("ascii") + "\n")
    else:
        print(format_move_text(move, pos.window))
    return 0


def _cmd_solve(args) -> int:
    if args.window:
        primes = tuple(int(p) for p in args.window.split(","))
        grids = [
            oracle.GridSpec(primes, args.max_piles, args.max_exponent, args.power, args.cap)
        ]
    else:
        grids = list(oracle.default_grids())
    all_ok = True
    for grid in grids:
        report = oracle.verify_characterization(grid)
        all_ok = all_ok and report.ok
        if args.format == "wire":
            sys.stdout.write(codec.encode_wire(report).decode("ascii") + "\n")
        else:
            print(oracle.report_text(report))
            print()
    return 0 if all_ok else 1


_AGENTS = ("optimal", "random_capped", "delayer", "top_decrementer")


def _make_agent(name: str, args) -> sim.Agent:
    if name == "optimal":
        return sim.OptimalAgent()
    if name == "random_capped":
        return sim.RandomCappedAgent(args.cap, args.seed)
    if name == "delayer":
        return sim.DelayerAgent(args.min_moves, args.cap, args.seed)
    if name == "top_decrementer":
        return sim.TopDecrementerAgent()
    raise MultivisionError(f"unknown agent {name!r}; choose from {', '.join(_AGENTS)}")


def _cmd_simulate(args) -> int:
    start = _read_position(args)
    config = sim.BatchConfig(
        (start,),
        ((_make_agent(args.agent_i, args), _make_agent(args.agent_ii, args)),),
        tuple(range(args.seed, args.seed + args.games)),
        args.max_moves,
    )
    summary = sim.run_batch(config, args.power)
    if args.format == "wire":
        sys.stdout.write(codec.encode_wire(summary).decode("ascii") + "\n")
    else:
        print(sim.summary_text(summary))
    return 0 if not summary.violations else 1


def _cmd_play(args) -> int:
    pos = _read_position(args, allow_stdin=False)
    k = args.power
    config = GameConfig(k)
    print("you are player I; the engine replies as player II")
    print("moves look like 'pile 1: /2 *3^4'; 'hint' and 'quit' also work")
    mover_is_human = True
    moves_made = 0
    while True:
        print()
        for line in _board_lines(pos, k):
            print(line)
        print(f"classification: {classify(pos, k).value}   can_delay: {can_delay(pos)}")
        if is_terminal(pos):
            if moves_made == 0:
                print("nothing to play: the start is already terminal")
            else:
                print("game over: " + ("you win" if not mover_is_human else "the engine wins"))
            return 0
        if mover_is_human:
            try:
                raw = input("move> ")
            except EOFError:
                print("\nbye")
                return 0
            raw = raw.strip()
            if not raw:
                continue
            if raw in ("quit", "exit"):
                return 0
            if raw == "hint":
                move = winning_move(pos, k)
                print(f"hint: {format_move_text(move, pos.window)}" if move else "hint: none, P-position")
                continue
            try:
                move = parse_move_text(raw, pos.window)
            except MultivisionError as exc:
                print(f"cannot read that move: {exc}")
                continue
            violation = validate_move(pos, move, config)
            if violation is not None:
                print(f"illegal move ({violation.code}): {violation.detail}")
                continue
            pos = apply_move(pos, move, config)
        else:
            move = engine_move(pos, k, args.min_moves if args.min_moves > 1 else None)
            print(f"engine plays: {format_move_text(move, pos.window)}")
            pos = apply_move(pos, move, config)
        moves_made += 1
        mover_is_human = not mover_is_human


def _cmd_serve(args) -> int:
    from .service import GameService, make_server

    service = GameService(snapshot_dir=args.snapshot_dir)
    if args.snapshot_dir:
        restored = service.restore()
        if restored:
            print(f"restored {restored} session(s) from snapshots", flush=True)
    server = make_server(service, args.host, args.port, static_dir=args.ui_dir)
    host, port = server.server_address[:2]
    print(f"listening on http://{host}:{port}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


# ---------------------------------------------------------------------------
# parser

def _add_power(p: argparse.ArgumentParser) -> None:
    p.add_argument("-K", dest="power", type=int, default=2, metavar="K",
                   help="power parameter, >= 2 (default 2)")


def _add_format(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("text", "wire"), default="text",
                   help="output as text or as a wire document")


def _add_position_source(p: argparse.ArgumentParser) -> None:
    p.add_argument("--pos", help="inline position; ';' separates piles")
    p.add_argument("--file", help="read the position from this file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="multivision",
        description="engine and verification workbench for multivision games",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("classify", help="print P or N and the total exponents")
    _add_power(p); _add_format(p); _add_position_source(p)
    p.set_defaults(handler=_cmd_classify)

    p = sub.add_parser("hint", help="print the winning move, if any")
    _add_power(p); _add_format(p); _add_position_source(p)
    p.set_defaults(handler=_cmd_hint)

    p = sub.add_parser("delay", help="print a move that stalls for at least r moves")
    _add_power(p); _add_format(p); _add_position_source(p)
    p.add_argument("--r", dest="min_moves", type=int, default=100, metavar="R",
                   help="guaranteed number of further moves (default 100)")
    p.set_defaults(handler=_cmd_delay)

    p = sub.add_parser("play", help="interactive play against the engine")
    _add_power(p); _add_position_source(p)
    p.add_argument("--r", dest="min_moves", type=int, default=1, metavar="R",
                   help="engine stall length on lost positions (default 1)")
    p.set_defaults(handler=_cmd_play)

    p = sub.add_parser("solve", help="brute-force verification of the P/N rule")
    _add_power(p); _add_format(p)
    p.add_argument("--window", help="comma-separated primes; omit to run the default grids")
    p.add_argument("--max-piles", type=int, default=2)
    p.add_argument("--max-exponent", type=int, default=2)
    p.add_argument("--cap", type=int, default=1, help="increment cap for the solver")
    p.set_defaults(handler=_cmd_solve)

    p = sub.add_parser("simulate", help="run a batch of self-play games")
    _add_power(p); _add_format(p); _add_position_source(p)
    p.add_argument("--agent-i", choices=_AGENTS, default="random_capped")
    p.add_argument("--agent-ii", choices=_AGENTS, default="optimal")
    p.add_argument("--games", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cap", type=int, default=1, help="cap for randomized agents")
    p.add_argument("--r", dest="min_moves", type=int, default=10, metavar="R",
                   help="delayer stall length")
    p.add_argument("--max-moves", type=int, default=10_000)
    p.set_defaults(handler=_cmd_simulate)

    p = sub.add_parser("serve", help="start the HTTP play service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8177)
    p.add_argument("--ui-dir", help="serve this directory as the browser UI")
    p.add_argument("--snapshot-dir", help="append session snapshots here")
    p.set_defaults(handler=_cmd_serve)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.handler(args)
    except MoveViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except MultivisionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
